from fractions import Fraction

import pytest

from zinbiel.algebra import is_zinbiel
from zinbiel.catalog import build, build_case1_family, build_null_filiform, case1_tuple
from zinbiel.errors import SingularMatrix
from zinbiel.linalg import Matrix
from zinbiel.sampling import random_invertible_matrix, rng_for
from zinbiel.transform import (
    NULLITY_INVARIANTS,
    CASE1_FORMULAS,
    BasisChange,
    GeneratorChange,
    IsoFound,
    NoIsoFound,
    Rejected,
    SeparatedBy,
    admissible_generator_change,
    case1_params,
    check_nullity_sample,
    delta,
    formula_params,
    sample_generator_change,
    separate_or_search,
    transport,
    verify_nullity_invariants,
    verify_theorem1_formulas,
)

F = Fraction


def test_identity_transport():
    A = build_null_filiform(4)
    assert transport(A, BasisChange.identity(4)) == A


def test_homogeneous_rescaling_nf4():
    t = 2
    P = Matrix.of([[t ** (i + 1) if i == j else 0 for j in range(4)] for i in range(4)])
    assert transport(build_null_filiform(4), P) == build_null_filiform(4)


def test_singular_change():
    with pytest.raises(SingularMatrix):
        BasisChange(Matrix.zeros(3, 3))


def test_transport_keeps_identity(z1_8):
    rng = rng_for(2)
    for _ in range(5):
        assert is_zinbiel(transport(z1_8, random_invertible_matrix(rng, 8)))


def test_transport_inverse_round_trip(z1_8):
    P = BasisChange(random_invertible_matrix(rng_for(3), 8))
    assert transport(transport(z1_8, P), P.inverse()) == z1_8


def test_case1_params_reads_family():
    a = (F(2, 3), -1, 5, 0, F(7, 2), 1)
    assert case1_params(build_case1_family(8, a)) == tuple(map(F, a))
    assert case1_params(build("Z21", 8)) is None


@pytest.mark.parametrize("a", [(F(3), F(2), 0, F(-1), F(5), 0), (F(1, 2), F(-3), 0, F(4), F(2, 7), 0)])
@pytest.mark.parametrize("p1, pn, qm", [(F(1), F(0), F(1)), (F(2), F(-1), F(3, 2))])
def test_normalising_substitution(a, p1, pn, qm):
    a1, a2, a3, a4, a5, a6 = a
    pm = -a4 * p1 / a5
    qn = -a2 * qm / a5
    rn = (p1 + a2 * pm + a5 * pn) / a5
    g = GeneratorChange(p1, pm, pn, qm, qn, 0, rn)
    _, new = admissible_generator_change(build_case1_family(8, a), g)
    assert (new[4], new[3], new[1]) == (1, 0, 0)
    expected_a1 = (a2 * a4 - a1 * a5) * p1 / ((a2 * a4 - a5) * p1 - a5**2 * pn)
    assert new[0] == expected_a1
    assert new == formula_params(a, g)


def test_identity_generator_change():
    a = (F(2, 3), -1, 5, 0, F(7, 2), 1)
    _, new = admissible_generator_change(build_case1_family(8, a), GeneratorChange.identity())
    assert new == tuple(map(F, a))


def test_q1_rejected(z1_8):
    g = GeneratorChange(1, 0, 0, 1, 0, 0, 1, q1=1)
    with pytest.raises(Rejected) as err:
        admissible_generator_change(z1_8, g)
    assert err.value.restriction == "Q_1=R_1=0"


def test_kernel_restriction_rejected(z1_8):
    g = GeneratorChange(1, 0, 0, 1, 0, 1, 1)  # R_(n-2) = 1 breaks the linear condition
    with pytest.raises(Rejected) as err:
        admissible_generator_change(z1_8, g)
    assert err.value.restriction.endswith("=0") and "R_{n-2}" in err.value.restriction


def test_degenerate_determinant_rejected(z1_8):
    g = GeneratorChange(1, 0, 0, 1, 0, 0, 0)
    with pytest.raises(Rejected) as err:
        admissible_generator_change(z1_8, g)
    assert err.value.restriction == "P_1(Q_{n-2}R_n-Q_nR_{n-2})!=0"


def test_formula_check_seed_one():
    rep = verify_theorem1_formulas(samples=100, seed=1)
    assert rep["passes"] == 100 and rep["failure_count"] == 0
    assert rep["seed"] == 1 and rep["samples"] == 100


def test_formula_check_other_dims():
    rep = verify_theorem1_formulas(samples=30, seed=4, dims=(9, 11))
    assert rep["passes"] == 30


def test_skips_are_counted():
    rep = verify_theorem1_formulas(samples=200, seed=0)
    assert rep["skipped"] >= 0 and rep["passes"] == 200


def test_corrupted_formula_detected():
    formulas = dict(CASE1_FORMULAS)
    original = formulas["a3'"]
    formulas["a3'"] = lambda a, g: original(a, g) + 1
    rep = verify_theorem1_formulas(samples=20, seed=0, formulas=formulas)
    assert rep["failure_count"] == 20
    assert set(rep["failures"][0]["mismatch"]) == {"a3'"}


def _case1_changes(a, count, seed):
    rng = rng_for(seed)
    out = []
    while len(out) < count:
        g = sample_generator_change(rng, a)
        try:
            admissible_generator_change(build_case1_family(8, a), g)
        except Rejected:
            continue
        out.append(g)
    return out


def test_a2a4_a1a5_nonzero_preserved():
    a = tuple(map(F, (1, 2, 0, 3, 4, 0)))
    expr = NULLITY_INVARIANTS[0]
    assert expr.evaluate(a) == 2
    for g in _case1_changes(a, 50, 0):
        assert check_nullity_sample(expr, a, g) is None


def test_a2a4_a1a5_zero_preserved():
    a = tuple(map(F, (2, 3, 0, 4, 6, 0)))
    expr = NULLITY_INVARIANTS[0]
    assert expr.evaluate(a) == 0
    for g in _case1_changes(a, 20, 1):
        _, new = admissible_generator_change(build_case1_family(8, a), g)
        assert expr.evaluate(new) == 0


@pytest.mark.parametrize("lam", [F(1), F(-2), F(3, 5)])
def test_delta_at_z8_tuples(lam):
    # (0, lambda, 1, 0, 0, 1) is the Z8 tuple; Delta is -lambda there
    assert delta((0, lam, 1, 0, 0, 1)) == -lam


@pytest.mark.parametrize("alpha", [F(2), F(-1), F(5, 3)])
def test_delta_vanishes_on_z9(alpha):
    assert delta(case1_tuple("Z9", alpha=alpha)) == 0


def test_nullity_report_shape():
    rep = verify_nullity_invariants(samples=20, seed=3)
    assert set(rep) >= {"op", "seed", "samples", "passes", "failures", "skipped"}
    assert all(e["flips"] == 0 and e["samples"] == 20 for e in rep["expressions"])
    assert all(e["zero_samples"] > 0 for e in rep["expressions"])


def test_separate_identical(z1_8):
    res = separate_or_search(z1_8, z1_8)
    assert isinstance(res, IsoFound)
    assert res.change.matrix == Matrix.identity(8)


def test_separate_from_nf(z1_8):
    res = separate_or_search(z1_8, build_null_filiform(8))
    assert isinstance(res, SeparatedBy) and res.invariant == "nilindex"


def test_z3_z4():
    res = separate_or_search(build("Z3", 8), build("Z4", 8))
    assert isinstance(res, (SeparatedBy, NoIsoFound))
    if isinstance(res, SeparatedBy):
        assert "a2" in res.invariant or res.invariant in ("char_seq", "dim_center", "dim_left_ann", "dim_right_ann")


def test_search_finds_rescaling(z1_8):
    A = build_case1_family(8, (1, 0, 0, 0, 3, 0))
    res = separate_or_search(A, z1_8, budget=2000)
    assert isinstance(res, IsoFound)
    assert transport(A, res.change) == z1_8


def test_search_deterministic(z1_8):
    A = build_case1_family(8, (1, 0, 0, 0, 3, 0))
    r1 = separate_or_search(A, z1_8, budget=2000, seed=4)
    r2 = separate_or_search(A, z1_8, budget=2000, seed=4)
    assert r1.to_dict() == r2.to_dict()


def test_no_iso_carries_budget():
    res = separate_or_search(build("Z17", 8), build("Z17", 8, **{"lambda": 3}), budget=10, seed=2)
    assert isinstance(res, (NoIsoFound, SeparatedBy))
    if isinstance(res, NoIsoFound):
        assert (res.budget, res.seed) == (10, 2)
