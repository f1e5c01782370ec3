"""Finite-dimensional algebras given by structure constants.

Indices are 1-based everywhere a user sees them (tables, files, witnesses),
matching the ``e_i`` notation. Elements are plain tuples of Fractions of
length ``dim``; coordinate ``k-1`` of a tuple is the coefficient of ``e_k``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch, FormatError
from .linalg import (
    ZERO,
    Matrix,
    format_scalar,
    scalar,
    unit_vector,
    zero_vector,
)

Element = tuple


@dataclass(frozen=True, eq=False)
class StructureAlgebra:
    """``e_i o e_j = sum_k c_ij^k e_k`` with zero products omitted.

    ``table`` maps ``(i, j)`` to a tuple of ``(k, c)`` pairs sorted by ``k``.
    Use :meth:`from_entries` to build one from loose data.
    """

    dim: int
    table: Mapping = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dimension must be non-negative")
        n = self.dim
        normalised = {key: tuple(sorted(terms)) for key, terms in sorted(self.table.items()) if terms}
        object.__setattr__(self, "table", normalised)
        for (i, j), terms in self.table.items():
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"product index ({i},{j}) outside 1..{n}")
            ks = [k for k, _ in terms]
            if len(set(ks)) != len(ks):
                raise ValueError(f"repeated output index in e_{i} o e_{j}")
            for k, c in terms:
                if not 1 <= k <= n:
                    raise ValueError(f"output index {k} outside 1..{n}")
                if not c:
                    raise ValueError(f"zero coefficient stored for e_{i} o e_{j} -> e_{k}")
        # dense cache of basis products, used by every hot loop
        basis_products = {}
        for (i, j), terms in self.table.items():
            v = [ZERO] * n
            for k, c in terms:
                v[k - 1] = c
            basis_products[(i, j)] = tuple(v)
        object.__setattr__(self, "_products", basis_products)

    @classmethod
    def from_entries(cls, dim: int, entries: Iterable, label: str = "") -> "StructureAlgebra":
        """Build from ``(i, j, k, c)`` entries. Repeated ``(i, j, k)`` is an
        error; zero coefficients are dropped."""
        acc: dict = {}
        for i, j, k, c in entries:
            c = scalar(c)
            key = (int(i), int(j))
            slot = acc.setdefault(key, {})
            if int(k) in slot:
                raise ValueError(f"entry ({i},{j},{k}) given twice")
            slot[int(k)] = c
        return cls.from_products(dim, acc, label)

    @classmethod
    def from_products(cls, dim: int, products: Mapping, label: str = "") -> "StructureAlgebra":
        """Build from ``{(i, j): {k: c}}`` or ``{(i, j): vector}``."""
        table = {}
        for (i, j), out in products.items():
            if isinstance(out, Mapping):
                terms = tuple(sorted((int(k), scalar(c)) for k, c in out.items() if c))
            else:
                if len(out) != dim:
                    raise DimensionMismatch(f"product vector of length {len(out)} in dimension {dim}")
                terms = tuple((k + 1, scalar(c)) for k, c in enumerate(out) if c)
            if terms:
                table[(int(i), int(j))] = terms
        return cls(dim, dict(sorted(table.items())), label)

    def entries(self) -> list[tuple[int, int, int, Fraction]]:
        return [(i, j, k, c) for (i, j), terms in sorted(self.table.items()) for k, c in terms]

    def coefficient(self, i: int, j: int, k: int) -> Fraction:
        v = self._products.get((i, j))
        return v[k - 1] if v else ZERO

    def basis_product(self, i: int, j: int) -> Element:
        """Coordinates of ``e_i o e_j`` (1-based indices)."""
        v = self._products.get((i, j))
        return v if v is not None else zero_vector(self.dim)

    def _integer_table(self):
        """Table scaled to integer coefficients, with the common denominator."""
        cached = self.__dict__.get("_int_table")
        if cached is None:
            d = lcm(1, *(c.denominator for terms in self.table.values() for _, c in terms))
            rows = tuple(((i, j), tuple((k, int(c * d)) for k, c in terms)) for (i, j), terms in self.table.items())
            cached = (rows, d)
            object.__setattr__(self, "_int_table", cached)
        return cached

    def relabel(self, label: str) -> "StructureAlgebra":
        return StructureAlgebra(self.dim, self.table, label)

    def __eq__(self, other):
        # structural equality ignores the label
        if not isinstance(other, StructureAlgebra):
            return NotImplemented
        return self.dim == other.dim and dict(self.table) == dict(other.table)

    def __hash__(self):
        return hash((self.dim, tuple(sorted(self.table.items()))))

    def __repr__(self):
        return f"StructureAlgebra(dim={self.dim}, label={self.label!r}, products={len(self.table)})"


def basis(A: StructureAlgebra, i: int) -> Element:
    """The basis element ``e_i`` (1-based)."""
    return unit_vector(A.dim, i - 1)


def _check(A: StructureAlgebra, *xs: Sequence):
    for x in xs:
        if len(x) != A.dim:
            raise DimensionMismatch(f"element of length {len(x)} in a {A.dim}-dimensional algebra")


def multiply(A: StructureAlgebra, x: Sequence, y: Sequence) -> Element:
    """Bilinear extension of the structure table."""
    _check(A, x, y)
    n = A.dim
    out = [ZERO] * n
    prods = A._products
    for (i, j), v in prods.items():
        a = x[i - 1]
        if not a:
            continue
        b = y[j - 1]
        if not b:
            continue
        ab = a * b
        for k in range(n):
            if v[k]:
                out[k] += ab * v[k]
    return tuple(out)


def zinbiel_defect(A: StructureAlgebra, a: Sequence, b: Sequence, c: Sequence) -> Element:
    """``(a o b) o c - a o (b o c) - a o (c o b)``."""
    _check(A, a, b, c)
    # every term is quadratic in the table and linear in each argument, so
    # the computation runs on integers after clearing denominators
    table, dt = A._integer_table()
    (x, dx), (y, dy), (z, dz) = (_integer_vector(v) for v in (a, b, c))
    n = A.dim
    lhs = _int_multiply(table, _int_multiply(table, x, y, n), z, n)
    r1 = _int_multiply(table, x, _int_multiply(table, y, z, n), n)
    r2 = _int_multiply(table, x, _int_multiply(table, z, y, n), n)
    scale = dt * dt * dx * dy * dz
    return tuple(Fraction(p - q - r, scale) for p, q, r in zip(lhs, r1, r2))


def _integer_vector(v: Sequence) -> tuple[list[int], int]:
    d = lcm(1, *(Fraction(t).denominator for t in v))
    return [int(t * d) for t in v], d


def _int_multiply(table, x, y, n) -> list[int]:
    out = [0] * n
    for (i, j), terms in table:
        a = x[i - 1]
        if a:
            b = y[j - 1]
            if b:
                ab = a * b
                for k, c in terms:
                    out[k - 1] += ab * c
    return out


def _basis_defect(A: StructureAlgebra, i: int, j: int, k: int) -> Element | None:
    """Defect on (e_i, e_j, e_k); None when every term is trivially zero."""
    prods = A._products
    ij, jk, kj = prods.get((i, j)), prods.get((j, k)), prods.get((k, j))
    if ij is None and jk is None and kj is None:
        return None
    n = A.dim
    out = [ZERO] * n

    def accumulate(coeffs, sign, right):
        for m, cm in enumerate(coeffs):
            if not cm:
                continue
            v = prods.get((m + 1, k)) if right else prods.get((i, m + 1))
            if v is None:
                continue
            f = sign * cm
            for t in range(n):
                if v[t]:
                    out[t] += f * v[t]

    if ij is not None:
        accumulate(ij, 1, right=True)  # (e_i o e_j) o e_k
    if jk is not None:
        accumulate(jk, -1, right=False)  # e_i o (e_j o e_k)
    if kj is not None:
        accumulate(kj, -1, right=False)  # e_i o (e_k o e_j)
    return tuple(out)


@dataclass(frozen=True)
class ZinbielCheck:
    ok: bool
    triple: tuple | None = None
    defect: Element | None = None

    def __bool__(self):
        return self.ok


def is_zinbiel(A: StructureAlgebra) -> ZinbielCheck:
    """Check the identity on all basis triples (enough by trilinearity).

    On failure the first failing triple in lexicographic order is reported
    with its defect vector.
    """
    n = A.dim
    for i, j, k in product(range(1, n + 1), repeat=3):
        d = _basis_defect(A, i, j, k)
        if d is not None and any(d):
            return ZinbielCheck(False, (i, j, k), d)
    return ZinbielCheck(True)


def left_operator(A: StructureAlgebra, x: Sequence) -> Matrix:
    """Matrix of ``L_x``; column j holds the coordinates of ``x o e_j``."""
    _check(A, x)
    n = A.dim
    cols = [[ZERO] * n for _ in range(n)]
    for (i, j), v in A._products.items():
        a = x[i - 1]
        if a:
            col = cols[j - 1]
            for k in range(n):
                if v[k]:
                    col[k] += a * v[k]
    return Matrix.from_columns(cols, n)


def right_operator(A: StructureAlgebra, y: Sequence) -> Matrix:
    """Matrix of ``x -> x o y``; only used for the left annihilator."""
    _check(A, y)
    n = A.dim
    cols = [[ZERO] * n for _ in range(n)]
    for (i, j), v in A._products.items():
        b = y[j - 1]
        if b:
            col = cols[i - 1]
            for k in range(n):
                if v[k]:
                    col[k] += b * v[k]
    return Matrix.from_columns(cols, n)


# --- file format -----------------------------------------------------------

_KEYS = {"dim", "label", "table"}


def to_dict(A: StructureAlgebra) -> dict:
    return {
        "dim": A.dim,
        "label": A.label,
        "table": [[i, j, k, format_scalar(c)] for i, j, k, c in A.entries()],
    }


def dumps(A: StructureAlgebra) -> str:
    return json.dumps(to_dict(A), indent=1)


def from_dict(data) -> StructureAlgebra:
    if not isinstance(data, dict):
        raise FormatError("algebra file must hold a JSON object")
    unknown = set(data) - _KEYS
    if unknown:
        raise FormatError(f"unknown key(s): {', '.join(sorted(unknown))}")
    for key in ("dim", "table"):
        if key not in data:
            raise FormatError(f"missing key: {key}")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
        raise FormatError("key 'dim' must be a non-negative integer")
    label = data.get("label", "")
    if not isinstance(label, str):
        raise FormatError("key 'label' must be a string")
    rows = data["table"]
    if not isinstance(rows, list):
        raise FormatError("key 'table' must be a list")
    entries = []
    for pos, row in enumerate(rows):
        where = f"table[{pos}]"
        if not (isinstance(row, list) and len(row) == 4):
            raise FormatError(f"{where}: expected [i, j, k, \"c\"]")
        *idx, c = row
        if not all(isinstance(t, int) and not isinstance(t, bool) for t in idx):
            raise FormatError(f"{where}: indices must be integers")
        if not all(1 <= t <= dim for t in idx):
            raise FormatError(f"{where}: index outside 1..{dim}")
        if not isinstance(c, str):
            raise FormatError(f"{where}: coefficient must be a string \"p/q\"")
        try:
            c = scalar(c)
        except ValueError as exc:
            raise FormatError(f"{where}: {exc}") from None
        entries.append((*idx, c))
    try:
        return StructureAlgebra.from_entries(dim, entries, label)
    except ValueError as exc:
        raise FormatError(f"table: {exc}") from None


def loads(text: str) -> StructureAlgebra:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(data)


def _integer_rows(rows) -> tuple[list[list[int]], int]:
    d = lcm(1, *(x.denominator for row in rows for x in row))
    return [[int(x * d) for x in row] for row in rows], d


def change_basis(A: StructureAlgebra, P: Matrix, Pinv: Matrix | None = None, label: str | None = None) -> StructureAlgebra:
    """Table of ``A`` in the basis whose a-th vector is row a of ``P``.

    ``Pinv`` may be supplied when the caller already has it.
    """
    n = A.dim
    if P.shape != (n, n):
        raise DimensionMismatch(f"{P.shape} basis change for a {n}-dimensional algebra")
    if Pinv is None:
        Pinv = P.inverse()
    # integer arithmetic over common denominators, one division at the end
    M, dm = _integer_rows(P.rows)
    Q, dq = _integer_rows(Pinv.rows)
    entries = A.entries()
    dc = lcm(1, *(c.denominator for *_, c in entries))
    C = [(i - 1, j - 1, k - 1, int(c * dc)) for i, j, k, c in entries]
    scale = dm * dm * dc * dq
    products = {}
    for a in range(n):
        ra = M[a]
        U = {}  # (j, k) -> sum_i ra[i] c_ij^k
        for i, j, k, c in C:
            if ra[i]:
                U[(j, k)] = U.get((j, k), 0) + ra[i] * c
        if not U:
            continue
        for b in range(n):
            rb = M[b]
            v = [0] * n
            for (j, k), u in U.items():
                if rb[j]:
                    v[k] += rb[j] * u
            if not any(v):
                continue
            w = [sum(v[k] * Q[k][l] for k in range(n) if v[k]) for l in range(n)]
            products[(a + 1, b + 1)] = {l + 1: Fraction(x, scale) for l, x in enumerate(w) if x}
    return StructureAlgebra.from_products(n, products, A.label if label is None else label)
