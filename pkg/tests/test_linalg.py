from fractions import Fraction

import pytest

from zinbiel.errors import DimensionMismatch, SingularMatrix
from zinbiel.linalg import (
    Inconsistent,
    Matrix,
    Solution,
    format_scalar,
    kernel,
    rref,
    scalar,
    solve_linear,
    subspace_from_spanning,
    zero_subspace,
)


def M(rows):
    return Matrix.of(rows)


def test_scalar_parsing_and_format():
    assert scalar("6/4") == Fraction(3, 2)
    assert scalar(" -2 ") == -2
    assert format_scalar(Fraction(-3, 6)) == "-1/2"
    assert format_scalar(Fraction(4)) == "4"
    with pytest.raises(ValueError):
        scalar("1.5.2")


def test_rref_proportional_rows():
    m, r = rref(M([[2, 4], [1, 2]]))
    assert r == 1
    assert m == M([[1, 2], [0, 0]])


def test_rref_identity():
    m, r = rref(Matrix.identity(3))
    assert (m, r) == (Matrix.identity(3), 3)


def test_rref_three_rows():
    m, r = rref(M([[0, 1], [1, 0], [1, 1]]))
    assert r == 2
    assert m == M([[1, 0], [0, 1], [0, 0]])


def test_span_drops_dependent_vectors():
    s = subspace_from_spanning(3, [(1, 0, 0), (2, 0, 0)])
    assert s.dim == 1
    assert s.vectors == ((1, 0, 0),)


def test_empty_span_is_zero():
    assert subspace_from_spanning(2, []) == zero_subspace(2)


def test_span_dim_two():
    assert subspace_from_spanning(4, [(1, 1, 0, 0), (0, 1, 1, 0), (1, 0, -1, 0)]).dim == 2


def test_span_length_mismatch():
    with pytest.raises(DimensionMismatch):
        subspace_from_spanning(3, [(1, 0)])


def test_solve_inconsistent_beta_system():
    system = M([[1, 1], [2, 1], [3, 1]])
    assert isinstance(solve_linear(system, [-1, -3, -6]), Inconsistent)


def test_solve_single():
    assert solve_linear(M([[1]]), [5]) == Solution((Fraction(5),), 0)


def test_solve_underdetermined():
    sol = solve_linear(M([[1, 1]]), [1])
    assert isinstance(sol, Solution) and sol.nullity == 1
    assert sum(sol.vector) == 1


def test_inverse_and_determinant():
    m = M([[2, 1], [7, 4]])
    assert m.determinant() == 1
    assert m @ m.inverse() == Matrix.identity(2)
    with pytest.raises(SingularMatrix):
        M([[1, 2], [2, 4]]).inverse()


def test_kernel():
    k = kernel(M([[1, 1, 0], [0, 0, 1]]))
    assert k.dim == 1
    assert (1, -1, 0) in k


def test_intersection_and_sum():
    a = subspace_from_spanning(3, [(1, 0, 0), (0, 1, 0)])
    b = subspace_from_spanning(3, [(0, 1, 0), (0, 0, 1)])
    assert a.intersection(b) == subspace_from_spanning(3, [(0, 1, 0)])
    assert (a + b).dim == 3
