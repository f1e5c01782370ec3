"""Property tests for the algebraic invariants the package relies on."""
from fractions import Fraction

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from zinbiel.algebra import (
    StructureAlgebra,
    dumps,
    is_zinbiel,
    left_operator,
    loads,
    multiply,
    zinbiel_defect,
)
from zinbiel.catalog import MANIFEST, build, build_case1_family, build_null_filiform
from zinbiel.constraints import generate_constraints, type1_template
from zinbiel.invariants import characteristic_sequence, jordan_blocks_nilpotent
from zinbiel.linalg import Matrix, Solution, kernel, rref, solve_linear, subspace_from_spanning, vadd, vscale
from zinbiel.transform import BasisChange, transport

rationals = st.fractions(min_value=-7, max_value=7, max_denominator=7)


def vectors(n):
    return st.lists(rationals, min_size=n, max_size=n).map(tuple)


@st.composite
def matrices(draw, min_dim=1, max_dim=4, square=False):
    r = draw(st.integers(min_dim, max_dim))
    c = r if square else draw(st.integers(min_dim, max_dim))
    return Matrix(tuple(draw(vectors(c)) for _ in range(r)))


@st.composite
def invertible(draw, n):
    m = Matrix(tuple(draw(vectors(n)) for _ in range(n)))
    assume(m.determinant() != 0)
    return m


@st.composite
def sparse_algebras(draw, max_dim=4):
    n = draw(st.integers(1, max_dim))
    idx = st.integers(1, n)
    entries = draw(st.lists(st.tuples(idx, idx, idx, rationals), max_size=8, unique_by=lambda e: e[:3]))
    return StructureAlgebra.from_entries(n, entries)


@given(matrices())
def test_rref_idempotent(m):
    r, rank = rref(m)
    assert rref(r) == (r, rank)
    assert rank == m.rank()


@given(matrices(), st.randoms(use_true_random=False))
def test_span_ignores_order(m, rnd):
    rows = list(m.rows)
    shuffled = rows[:]
    rnd.shuffle(shuffled)
    n = m.ncols
    assert subspace_from_spanning(n, rows) == subspace_from_spanning(n, shuffled)


@given(matrices(), st.data())
def test_solution_satisfies_system(m, data):
    rhs = data.draw(vectors(m.nrows))
    res = solve_linear(m, rhs)
    if isinstance(res, Solution):
        assert m.apply(res.vector) == tuple(rhs)
        assert res.nullity == m.ncols - m.rank()
    else:
        # inconsistent only if rhs is outside the column space
        assert Matrix(tuple(r + (b,) for r, b in zip(m.rows, rhs))).rank() > m.rank()


@given(matrices())
def test_kernel_vectors_are_annihilated(m):
    K = kernel(m)
    assert K.dim == m.ncols - m.rank()
    for v in K.vectors:
        assert not any(m.apply(v))


@given(st.integers(1, 4).flatmap(invertible))
def test_inverse_is_exact(m):
    n = m.nrows
    assert m @ m.inverse() == Matrix.identity(n)
    assert all(isinstance(x, Fraction) for row in m.inverse().rows for x in row)


@given(sparse_algebras(), st.data())
def test_multiply_is_bilinear(A, data):
    n = A.dim
    x, x2, y = (data.draw(vectors(n)) for _ in range(3))
    c = data.draw(rationals)
    assert multiply(A, vadd(x, vscale(c, x2)), y) == vadd(multiply(A, x, y), vscale(c, multiply(A, x2, y)))
    assert multiply(A, y, vadd(x, x2)) == vadd(multiply(A, y, x), multiply(A, y, x2))
    assert left_operator(A, x).apply(y) == multiply(A, x, y)


@st.composite
def transported_nf(draw, max_dim=4):
    n = draw(st.integers(1, max_dim))
    return transport(build_null_filiform(n), draw(invertible(n)))


@given(st.one_of(sparse_algebras(), transported_nf()), st.data())
def test_zinbiel_means_zero_defect_everywhere(A, data):
    n = A.dim
    a, b, c = (data.draw(vectors(n)) for _ in range(3))
    if is_zinbiel(A):
        assert not any(zinbiel_defect(A, a, b, c))


@settings(max_examples=30)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), invertible(n))))
def test_nf_transport_stays_zinbiel(arg):
    n, P = arg
    assert is_zinbiel(transport(build_null_filiform(n), P))


@settings(max_examples=25)
@given(st.lists(rationals, min_size=6, max_size=6), st.integers(8, 10))
def test_case1_family_is_zinbiel(a, n):
    assert is_zinbiel(build_case1_family(n, tuple(a)))


@given(sparse_algebras())
def test_serialisation_round_trip(A):
    assert loads(dumps(A)) == A


@settings(max_examples=30)
@given(sparse_algebras(), st.data())
def test_transport_round_trip(A, data):
    P = BasisChange(data.draw(invertible(A.dim)))
    assert transport(transport(A, P), P.inverse()) == A


@settings(max_examples=20)
@given(st.sampled_from([e.name for e in MANIFEST]), st.integers(8, 10), st.data())
def test_jordan_blocks_partition_dimension(name, n, data):
    A = build(name, n)
    x = data.draw(vectors(n))
    assert jordan_blocks_nilpotent(left_operator(A, x)).size == n


@settings(max_examples=10)
@given(st.sampled_from([e.name for e in MANIFEST if e.case == "I"]), st.data())
def test_char_seq_stable_under_transport(name, data):
    n = 8
    A = build(name, n)
    P = data.draw(invertible(n))
    assert characteristic_sequence(transport(A, P)) == characteristic_sequence(A)


@settings(max_examples=25)
@given(st.lists(rationals, min_size=6, max_size=6), st.integers(1, 2), st.integers(1, 4))
def test_generated_constraints_vanish_on_family(a, r1, r2):
    n = 8
    A = build_case1_family(n, tuple(a))
    t = type1_template(n, r1, r2)
    try:
        values = t.assignment_from(A)
    except ValueError:
        return
    for eq in generate_constraints(t, "generators").equations:
        assert eq.poly.evaluate(values) == 0
