"""Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`. Matrices are immutable dense grids,
subspaces are stored by their reduced row echelon basis so that equality of
subspaces is plain structural equality.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, SingularMatrix

Scalar = Fraction
Vector = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)

_SCALAR_RE = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


def scalar(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        if not _SCALAR_RE.match(x):
            raise ValueError(f"not a rational scalar: {x!r}")
        value = Fraction(x.replace(" ", ""))
        return value
    raise TypeError(f"cannot interpret {type(x).__name__} as an exact scalar")


def format_scalar(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def vector(values: Iterable) -> tuple:
    return tuple(scalar(v) for v in values)


def zero_vector(n: int) -> tuple:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> tuple:
    """The i-th standard basis vector, 0-based."""
    return tuple(ONE if k == i else ZERO for k in range(n))


def is_zero(v: Sequence) -> bool:
    return not any(v)


def vadd(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v: Sequence) -> tuple:
    return tuple(c * a for a in v)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), ZERO)


@dataclass(frozen=True)
class Matrix:
    rows: tuple  # tuple of row tuples

    def __post_init__(self):
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise DimensionMismatch("ragged matrix rows")

    @classmethod
    def of(cls, rows: Iterable[Iterable], ncols: int | None = None) -> "Matrix":
        rows = tuple(vector(r) for r in rows)
        if not rows and ncols:
            return cls.zeros(0, ncols)
        return cls(rows)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        m = cls(tuple((ZERO,) * ncols for _ in range(nrows)))
        object.__setattr__(m, "_ncols", ncols)
        return m

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(tuple(unit_vector(n, i) for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        return cls(tuple(tuple(col[i] for col in columns) for i in range(nrows)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        if self.rows:
            return len(self.rows[0])
        return getattr(self, "_ncols", 0)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "Matrix":
        return Matrix(tuple(zip(*self.rows))) if self.rows else Matrix.zeros(self.ncols, 0)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return Matrix(tuple(vadd(r, s) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot subtract {self.shape} and {other.shape}")
        return Matrix(tuple(vsub(r, s) for r, s in zip(self.rows, other.rows)))

    def scale(self, c) -> "Matrix":
        c = scalar(c)
        return Matrix(tuple(vscale(c, r) for r in self.rows))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.transpose().rows if other.rows else ()
        if not cols:
            return Matrix.zeros(self.nrows, other.ncols)
        return Matrix(tuple(tuple(dot(r, c) for c in cols) for r in self.rows))

    def apply(self, v: Sequence) -> tuple:
        """Matrix times column vector."""
        if len(v) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.shape} matrix")
        return tuple(dot(r, v) for r in self.rows)

    def rapply(self, v: Sequence) -> tuple:
        """Row vector times matrix."""
        if len(v) != self.nrows:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.shape} matrix")
        out = [ZERO] * self.ncols
        for c, row in zip(v, self.rows):
            if c:
                for j, x in enumerate(row):
                    if x:
                        out[j] += c * x
        return tuple(out)

    def power(self, k: int) -> "Matrix":
        if self.nrows != self.ncols:
            raise DimensionMismatch("power of a non-square matrix")
        result = Matrix.identity(self.nrows)
        for _ in range(k):
            result = result @ self
        return result

    def is_zero(self) -> bool:
        return all(not any(r) for r in self.rows)

    def rank(self) -> int:
        return rref(self)[1]

    def determinant(self) -> Fraction:
        if self.nrows != self.ncols:
            raise DimensionMismatch("determinant of a non-square matrix")
        a = [list(r) for r in self.rows]
        n = len(a)
        det = ONE
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c]), None)
            if p is None:
                return ZERO
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            det *= a[c][c]
            inv = 1 / a[c][c]
            for r in range(c + 1, n):
                f = a[r][c] * inv
                if f:
                    for j in range(c, n):
                        a[r][j] -= f * a[c][j]
        return det

    def inverse(self) -> "Matrix":
        n = self.nrows
        if n != self.ncols:
            raise DimensionMismatch("inverse of a non-square matrix")
        aug = Matrix(tuple(r + unit_vector(n, i) for i, r in enumerate(self.rows)))
        red, rank = rref(aug)
        if rank < n or any(red.rows[i][i] != 1 for i in range(n)):
            raise SingularMatrix("matrix is not invertible")
        return Matrix(tuple(r[n:] for r in red.rows))

    def to_lists(self) -> list[list[str]]:
        return [[format_scalar(x) for x in r] for r in self.rows]


def _rref_rows(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """In-place Gauss-Jordan elimination; returns the rows and pivot columns."""
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pivot_row = rows[r]
        inv = 1 / pivot_row[c]
        if inv != 1:
            pivot_row = rows[r] = [x * inv for x in pivot_row]
        nz = [j for j in range(c, ncols) if pivot_row[j]]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    for j in nz:
                        row[j] -= f * pivot_row[j]
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(m: Matrix) -> tuple[Matrix, int]:
    """Unique reduced row echelon form of ``m`` and its rank."""
    rows, pivots = _rref_rows([list(r) for r in m.rows], m.ncols)
    out = Matrix(tuple(tuple(r) for r in rows)) if rows else Matrix.zeros(0, m.ncols)
    return out, len(pivots)


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim given by its canonical RREF basis.

    Two Subspace values compare equal exactly when they are the same space.
    """

    ambient_dim: int
    basis: Matrix
    pivots: tuple = ()

    @property
    def dim(self) -> int:
        return self.basis.nrows

    @property
    def vectors(self) -> tuple:
        return self.basis.rows

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis.rows == other.basis.rows

    def __hash__(self):
        return hash((self.ambient_dim, self.basis.rows))

    def __len__(self):
        return self.dim

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        return is_zero(self.reduce(v))

    __contains__ = contains

    def reduce(self, v: Sequence) -> tuple:
        """Remainder of ``v`` after clearing all pivot coordinates."""
        w = list(v)
        for row, c in zip(self.basis.rows, self.pivots):
            f = w[c]
            if f:
                for j, x in enumerate(row):
                    if x:
                        w[j] -= f * x
        return tuple(w)

    def coordinates(self, v: Sequence) -> tuple:
        """Coefficients of ``v`` in the RREF basis; raises if v is outside."""
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return tuple(v[c] for c in self.pivots)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("subspaces of different ambient spaces")
        return subspace_from_spanning(self.ambient_dim, self.vectors + other.vectors)

    def intersection(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("subspaces of different ambient spaces")
        # x = sum a_i u_i = sum b_j w_j  <=>  (a, -b) in the kernel of [U; W]^T
        k, m = self.dim, other.dim
        if k == 0 or m == 0:
            return zero_subspace(self.ambient_dim)
        stacked = Matrix.from_columns(self.vectors + tuple(vscale(-1, w) for w in other.vectors), self.ambient_dim)
        vecs = []
        for coeffs in kernel(stacked).vectors:
            x = zero_vector(self.ambient_dim)
            for a, u in zip(coeffs[:k], self.vectors):
                if a:
                    x = vadd(x, vscale(a, u))
            vecs.append(x)
        return subspace_from_spanning(self.ambient_dim, vecs)

    def issubspace(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.vectors)

    def complement_basis(self, inner: "Subspace") -> list[tuple]:
        """Greedy completion of ``inner`` to this space using this space's
        RREF rows in order. ``inner`` must be contained in ``self``."""
        chosen: list[tuple] = []
        acc = inner
        for v in self.vectors:
            if not acc.contains(v):
                chosen.append(v)
                acc = subspace_from_spanning(self.ambient_dim, acc.vectors + (v,))
        return chosen


def zero_subspace(n: int) -> Subspace:
    return Subspace(n, Matrix.zeros(0, n), ())


def full_space(n: int) -> Subspace:
    return Subspace(n, Matrix.identity(n), tuple(range(n)))


def subspace_from_spanning(ambient: int, vectors: Iterable[Sequence]) -> Subspace:
    rows = []
    for v in vectors:
        if len(v) != ambient:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {ambient}")
        if any(v):
            rows.append([scalar(x) for x in v])
    if not rows:
        return zero_subspace(ambient)
    rows, pivots = _rref_rows(rows, ambient)
    basis = tuple(tuple(r) for r in rows[: len(pivots)])
    return Subspace(ambient, Matrix(basis), tuple(pivots))


def kernel(m: Matrix) -> Subspace:
    """Null space {x : m x = 0} as a Subspace of Q^ncols."""
    n = m.ncols
    rows, pivots = _rref_rows([list(r) for r in m.rows], n)
    free = [c for c in range(n) if c not in set(pivots)]
    vecs = []
    for f in free:
        x = [ZERO] * n
        x[f] = ONE
        for r, p in enumerate(pivots):
            x[p] = -rows[r][f]
        vecs.append(x)
    return subspace_from_spanning(n, vecs)


@dataclass(frozen=True)
class Solution:
    vector: tuple
    nullity: int


@dataclass(frozen=True)
class Inconsistent:
    """No solution. ``row`` is the index of an equation combination that
    reduced to 0 = nonzero, in the echelon order."""

    row: int = -1


def solve_linear(system: Matrix, rhs: Sequence) -> Solution | Inconsistent:
    """Solve ``system @ x = rhs`` exactly.

    Returns one particular solution (free variables set to zero) together with
    the nullity of the homogeneous system, or :class:`Inconsistent`.
    """
    if system.nrows != len(rhs):
        raise DimensionMismatch(f"{system.nrows} equations but {len(rhs)} right-hand sides")
    n = system.ncols
    aug = [list(r) + [scalar(b)] for r, b in zip(system.rows, rhs)]
    rows, pivots = _rref_rows(aug, n + 1)
    if pivots and pivots[-1] == n:
        return Inconsistent(len(pivots) - 1)
    x = [ZERO] * n
    for r, p in enumerate(pivots):
        x[p] = rows[r][n]
    return Solution(tuple(x), n - len(pivots))
