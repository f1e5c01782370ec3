"""Isomorphism invariants of nilpotent algebras.

Lower central series, nilindex, annihilators, characteristic sequence and the
natural gradation, plus an aggregate :class:`Fingerprint`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .algebra import StructureAlgebra, basis, change_basis, left_operator, right_operator
from .errors import DegenerateError, NotNilpotent
from .linalg import Matrix, Subspace, full_space, kernel, subspace_from_spanning
from .sampling import random_vector, rng_for

DEFAULT_TRIALS = 32


def power_series(A: StructureAlgebra) -> list[Subspace]:
    """``l^1 = A``, ``l^(k+1) = span{x o y : x in A, y in l^k}``, ending with 0."""
    n = A.dim
    ops = [left_operator(A, basis(A, i)) for i in range(1, n + 1)]
    series = [full_space(n)]
    while series[-1].dim:
        current = series[-1]
        nxt = subspace_from_spanning(n, (L.apply(y) for L in ops for y in current.vectors))
        if nxt.dim == current.dim:
            raise NotNilpotent(f"lower central series stabilises in dimension {nxt.dim}")
        series.append(nxt)
    return series


def nilindex(A: StructureAlgebra) -> int:
    return len(power_series(A)) - 1


@dataclass(frozen=True)
class Annihilators:
    right: Subspace
    left: Subspace
    center: Subspace


def _stack(mats: Sequence[Matrix], n: int) -> Matrix:
    rows = tuple(r for m in mats for r in m.rows)
    return Matrix(rows) if rows else Matrix.zeros(0, n)


def annihilators(A: StructureAlgebra) -> Annihilators:
    """right = {x : y o x = 0 for all y}, left = {x : x o y = 0 for all y},
    center = left meet right."""
    n = A.dim
    right = kernel(_stack([left_operator(A, basis(A, i)) for i in range(1, n + 1)], n))
    left = kernel(_stack([right_operator(A, basis(A, j)) for j in range(1, n + 1)], n))
    return Annihilators(right, left, left.intersection(right))


# --- Jordan structure of nilpotent operators ---------------------------------


@dataclass(frozen=True, order=True)
class CharSequence:
    """Jordan block sizes in weakly decreasing order; compares lexicographically."""

    blocks: tuple

    def __post_init__(self):
        b = tuple(int(x) for x in self.blocks)
        if any(x <= 0 for x in b) or any(x < y for x, y in zip(b, b[1:])):
            raise ValueError(f"not a weakly decreasing sequence of positive sizes: {b}")
        object.__setattr__(self, "blocks", b)

    @property
    def size(self) -> int:
        return sum(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __str__(self):
        return "(" + ",".join(map(str, self.blocks)) + ")"


def blocks_from_rank_profile(ranks: Sequence[int]) -> CharSequence:
    """Block sizes from ``rank(N^0), rank(N^1), ...`` ending in 0.

    The number of blocks of size at least k is ``rank(N^(k-1)) - rank(N^k)``.
    """
    ranks = list(ranks)
    if not ranks or ranks[-1] != 0:
        raise NotNilpotent("rank profile does not reach 0")
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))] + [0]
    blocks = []
    for k in range(len(at_least) - 1, 0, -1):
        blocks += [k] * (at_least[k - 1] - at_least[k])
    return CharSequence(tuple(blocks))


def rank_profile(N: Matrix) -> list[int]:
    """Ranks of successive powers of a nilpotent N, computed on images."""
    n = N.nrows
    if N.ncols != n:
        raise ValueError("rank profile of a non-square matrix")
    image = full_space(n)
    ranks = [n]
    while image.dim:
        nxt = subspace_from_spanning(n, (N.apply(v) for v in image.vectors))
        if nxt.dim == image.dim:
            raise NotNilpotent("matrix is not nilpotent")
        image = nxt
        ranks.append(image.dim)
    return ranks


def jordan_blocks_nilpotent(N: Matrix) -> CharSequence:
    return blocks_from_rank_profile(rank_profile(N))


def charseq_compare(a, b) -> int:
    """-1, 0 or 1 comparing block sequences lexicographically."""
    a, b = tuple(a), tuple(b)
    return (a > b) - (a < b)


def characteristic_witness(
    A: StructureAlgebra, trials: int = DEFAULT_TRIALS, seed: int = 0
) -> tuple[CharSequence, tuple]:
    """Best block sequence found and an element attaining it.

    Candidates are the basis vectors outside ``l^2`` followed by ``trials``
    seeded random rational vectors outside ``l^2``.
    """
    n = A.dim
    series = power_series(A)
    square = series[1] if len(series) > 1 else series[0]
    if square.dim == n:
        raise DegenerateError("l^2 = l: no elements outside the square")
    candidates = [basis(A, i) for i in range(1, n + 1) if basis(A, i) not in square]
    rng = rng_for(seed)
    drawn = 0
    while drawn < trials:
        v = random_vector(rng, n)
        if v in square:
            continue
        candidates.append(v)
        drawn += 1
    best, witness = None, None
    for x in candidates:
        c = jordan_blocks_nilpotent(left_operator(A, x))
        if best is None or c > best:
            best, witness = c, x
    return best, witness


def characteristic_sequence(A: StructureAlgebra, trials: int = DEFAULT_TRIALS, seed: int = 0) -> CharSequence:
    return characteristic_witness(A, trials, seed)[0]


# --- natural gradation -------------------------------------------------------


@dataclass(frozen=True)
class Gradation:
    """Layer i is a complement of ``l^(i+1)`` inside ``l^i``."""

    layers: tuple

    @property
    def layer_dims(self) -> tuple:
        return tuple(layer.dim for layer in self.layers)

    def adapted_basis(self) -> list[tuple]:
        return [v for layer in self.layers for v in layer.vectors]

    def layer_of(self) -> tuple:
        """1-based layer number of each adapted basis vector."""
        return tuple(i + 1 for i, layer in enumerate(self.layers) for _ in layer.vectors)


def natural_gradation(A: StructureAlgebra) -> Gradation:
    series = power_series(A)
    layers = []
    for big, small in zip(series, series[1:]):
        chosen = big.complement_basis(small)
        layers.append(subspace_from_spanning(A.dim, chosen))
    return Gradation(tuple(layers))


@dataclass(frozen=True)
class GradedTable:
    algebra: StructureAlgebra  # truncated table of gr(A)
    transported: StructureAlgebra  # A itself in the adapted basis
    basis: Matrix
    layer_of: tuple
    naturally_graded: bool


def graded_table(A: StructureAlgebra) -> GradedTable:
    """Transport A to the adapted basis and drop product components that
    leave layer i+j. ``naturally_graded`` reports whether nothing was dropped."""
    grad = natural_gradation(A)
    n = A.dim
    P = Matrix(tuple(grad.adapted_basis())) if n else Matrix.zeros(0, 0)
    B = change_basis(A, P)
    layer = grad.layer_of()
    kept = []
    for i, j, k, c in B.entries():
        if layer[k - 1] == layer[i - 1] + layer[j - 1]:
            kept.append((i, j, k, c))
    G = StructureAlgebra.from_entries(n, kept, f"gr({A.label})" if A.label else "gr")
    return GradedTable(G, B, P, layer, G == B)


# --- fingerprint -------------------------------------------------------------


@dataclass(frozen=True)
class Fingerprint:
    power_dims: tuple
    nilindex: int
    dim_left_ann: int
    dim_right_ann: int
    dim_center: int
    char_seq: CharSequence
    layer_dims: tuple

    FIELDS = ("power_dims", "nilindex", "dim_left_ann", "dim_right_ann", "dim_center", "char_seq", "layer_dims")
    # the coarsest invariant that differs is the one reported
    SEPARATION_ORDER = ("nilindex", "power_dims", "char_seq", "layer_dims", "dim_center", "dim_left_ann", "dim_right_ann")

    def to_dict(self) -> dict:
        out = {}
        for name in self.FIELDS:
            value = getattr(self, name)
            if isinstance(value, CharSequence):
                value = list(value.blocks)
            elif isinstance(value, tuple):
                value = list(value)
            out[name] = value
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def first_difference(self, other: "Fingerprint") -> str | None:
        for name in self.SEPARATION_ORDER:
            if getattr(self, name) != getattr(other, name):
                return name
        return None


def fingerprint(A: StructureAlgebra, trials: int = DEFAULT_TRIALS, seed: int = 0) -> Fingerprint:
    series = power_series(A)
    dims = tuple(s.dim for s in series)
    ann = annihilators(A)
    try:
        cs = characteristic_sequence(A, trials, seed)
    except DegenerateError:
        cs = CharSequence(())
    return Fingerprint(
        power_dims=dims,
        nilindex=len(series) - 1,
        dim_left_ann=ann.left.dim,
        dim_right_ann=ann.right.dim,
        dim_center=ann.center.dim,
        char_seq=cs,
        layer_dims=tuple(a - b for a, b in zip(dims, dims[1:])),
    )
