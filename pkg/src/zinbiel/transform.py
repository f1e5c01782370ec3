"""Basis changes, the Case I change-of-generators formulas, nullity
invariants of the parameters, and a seeded isomorphism search.

Case I algebras are the family ``Z(a1..a6)`` built by
:func:`zinbiel.catalog.build_case1_family`. A change of generators replaces
``e_1, e_{n-2}, e_n`` by combinations of themselves; the rest of the new basis
is forced by ``e'_{i+1} = e'_1 o e'_i`` and ``e'_{n-1} = e'_1 o e'_{n-2}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields
from fractions import Fraction
from math import isqrt
from typing import Callable, Mapping, Sequence

from .algebra import StructureAlgebra, change_basis, multiply
from .catalog import MIN_TYPE1_DIM, build_case1_family
from .errors import DimensionMismatch, SingularMatrix, ZinbielError
from .invariants import fingerprint
from .linalg import ZERO, Matrix, format_scalar, scalar, unit_vector
from .sampling import DEFAULT_HEIGHT, random_nonzero_rational, random_rational, rng_for


@dataclass(frozen=True)
class BasisChange:
    """Row a of ``matrix`` holds the old coordinates of the new vector e'_a."""

    matrix: Matrix

    def __post_init__(self):
        m = self.matrix
        if m.nrows != m.ncols:
            raise DimensionMismatch(f"basis change must be square, got {m.shape}")
        object.__setattr__(self, "_inverse", m.inverse())  # raises SingularMatrix

    @classmethod
    def identity(cls, n: int) -> "BasisChange":
        return cls(Matrix.identity(n))

    @property
    def dim(self) -> int:
        return self.matrix.nrows

    def inverse(self) -> "BasisChange":
        return BasisChange(self._inverse)

    def to_lists(self):
        return self.matrix.to_lists()


def transport(A: StructureAlgebra, P: BasisChange | Matrix) -> StructureAlgebra:
    """Structure constants of ``A`` in the basis given by the rows of P."""
    if isinstance(P, Matrix):
        P = BasisChange(P)
    if P.dim != A.dim:
        raise DimensionMismatch(f"{P.dim}-dimensional basis change for a {A.dim}-dimensional algebra")
    return change_basis(A, P.matrix, P._inverse)


# --- Case I generator changes ------------------------------------------------


def case1_params(A: StructureAlgebra) -> tuple | None:
    """``(a1..a6)`` if A is literally a member of the Case I family, else None."""
    n = A.dim
    if n < MIN_TYPE1_DIM:
        return None
    m = n - 2
    slots = [(m, 1), (m, m), (m, n), (n, 1), (n, m), (n, n)]
    a = tuple(A.coefficient(i, j, n - 1) for i, j in slots)
    return a if build_case1_family(n, a) == A else None


@dataclass(frozen=True)
class GeneratorChange:
    """Images of the generators; ``m`` stands for the index n-2.

    e'_1 = p1 e_1 + pm e_{n-2} + pn e_n, and likewise q* for e'_{n-2} and
    r* for e'_n.
    """

    p1: Fraction
    pm: Fraction
    pn: Fraction
    qm: Fraction
    qn: Fraction
    rm: Fraction
    rn: Fraction
    q1: Fraction = ZERO
    r1: Fraction = ZERO

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, scalar(getattr(self, f.name)))

    @classmethod
    def identity(cls) -> "GeneratorChange":
        return cls(1, 0, 0, 1, 0, 0, 1)

    def to_dict(self) -> dict:
        return {f.name: format_scalar(getattr(self, f.name)) for f in fields(self)}


RESTRICTIONS = (
    "Q_1=R_1=0",
    "P_1R_{n-2}+a_2P_{n-2}R_{n-2}+a_3P_{n-2}R_n+a_5P_nR_{n-2}+a_6P_nR_n=0",
    "P_1Q_{n-2}+a_2P_{n-2}Q_{n-2}+a_3P_{n-2}Q_n+a_5P_nQ_{n-2}+a_6P_nQ_n!=0",
    "P_1(Q_{n-2}R_n-Q_nR_{n-2})!=0",
)


class Rejected(ZinbielError):
    """A generator change violates one of the admissibility restrictions."""

    def __init__(self, restriction: str):
        super().__init__(f"restriction violated: {restriction}")
        self.restriction = restriction


def _denominator(a, g: GeneratorChange) -> Fraction:
    a1, a2, a3, a4, a5, a6 = a
    return g.p1 * g.qm + a2 * g.pm * g.qm + a3 * g.pm * g.qn + a5 * g.pn * g.qm + a6 * g.pn * g.qn


def violated_restriction(a: Sequence, g: GeneratorChange) -> str | None:
    a1, a2, a3, a4, a5, a6 = a
    if g.q1 or g.r1:
        return RESTRICTIONS[0]
    if g.p1 * g.rm + a2 * g.pm * g.rm + a3 * g.pm * g.rn + a5 * g.pn * g.rm + a6 * g.pn * g.rn:
        return RESTRICTIONS[1]
    if not _denominator(a, g):
        return RESTRICTIONS[2]
    if not g.p1 * (g.qm * g.rn - g.qn * g.rm):
        return RESTRICTIONS[3]
    return None


def kernel_direction(a: Sequence, p1, pm, pn) -> tuple[Fraction, Fraction]:
    """``(R_{n-2}, R_n)`` spanning the solutions of the linear restriction for
    the given first-generator image."""
    a1, a2, a3, a4, a5, a6 = a
    return -(a3 * pm + a6 * pn), p1 + a2 * pm + a5 * pn


def generator_basis(A: StructureAlgebra, g: GeneratorChange) -> Matrix:
    """Full n x n basis built from the generator images."""
    n = A.dim
    m = n - 2

    def combo(c1, cm, cn):
        v = [ZERO] * n
        v[0], v[m - 1], v[n - 1] = c1, cm, cn
        return tuple(v)

    new = {1: combo(g.p1, g.pm, g.pn), m: combo(g.q1, g.qm, g.qn), n: combo(g.r1, g.rm, g.rn)}
    for i in range(1, n - 3):
        new[i + 1] = multiply(A, new[1], new[i])
    new[n - 1] = multiply(A, new[1], new[m])
    return Matrix(tuple(new[i] for i in range(1, n + 1)))


def admissible_generator_change(A: StructureAlgebra, g: GeneratorChange) -> tuple[BasisChange, tuple]:
    """Apply a generator change to a Case I algebra.

    Returns the full basis change and the parameters read off the transported
    table. Raises :class:`Rejected` naming the violated restriction.
    """
    a = case1_params(A)
    if a is None:
        raise ValueError("algebra is not a member of the Case I family")
    bad = violated_restriction(a, g)
    if bad:
        raise Rejected(bad)
    try:
        P = BasisChange(generator_basis(A, g))
    except SingularMatrix:
        raise Rejected("extended basis is singular") from None
    B = transport(A, P)
    new = case1_params(B)
    if new is None:
        raise ZinbielError("transported table left the Case I family")
    return P, new


# closed forms of the new parameters, each over the common denominator


def _a1(a, g):
    a1, a2, a3, a4, a5, a6 = a
    return (a1 * g.p1 * g.qm + a2 * g.pm * g.qm + a3 * g.pn * g.qm + a4 * g.p1 * g.qn + a5 * g.pm * g.qn + a6 * g.pn * g.qn)


def _a2(a, g):
    a1, a2, a3, a4, a5, a6 = a
    return a2 * g.qm**2 + a3 * g.qm * g.qn + a5 * g.qm * g.qn + a6 * g.qn**2


def _a3(a, g):
    a1, a2, a3, a4, a5, a6 = a
    return a2 * g.qm * g.rm + a3 * g.qm * g.rn + a5 * g.qn * g.rm + a6 * g.qn * g.rn


def _a4(a, g):
    a1, a2, a3, a4, a5, a6 = a
    return a1 * g.p1 * g.rm + a2 * g.pm * g.rm + a3 * g.pn * g.rm + a4 * g.p1 * g.rn + a5 * g.pm * g.rn + a6 * g.pn * g.rn


def _a5(a, g):
    a1, a2, a3, a4, a5, a6 = a
    return a2 * g.qm * g.rm + a3 * g.qn * g.rm + a5 * g.qm * g.rn + a6 * g.qn * g.rn


def _a6(a, g):
    a1, a2, a3, a4, a5, a6 = a
    return a2 * g.rm**2 + a3 * g.rm * g.rn + a5 * g.rm * g.rn + a6 * g.rn**2


def _over_denominator(num):
    return lambda a, g: num(a, g) / _denominator(a, g)


CASE1_FORMULAS: dict[str, Callable] = {
    "a1'": _over_denominator(_a1),
    "a2'": _over_denominator(_a2),
    "a3'": _over_denominator(_a3),
    "a4'": _over_denominator(_a4),
    "a5'": _over_denominator(_a5),
    "a6'": _over_denominator(_a6),
}


def formula_params(a: Sequence, g: GeneratorChange, formulas: Mapping | None = None) -> tuple:
    formulas = CASE1_FORMULAS if formulas is None else formulas
    return tuple(formulas[k](a, g) for k in CASE1_FORMULAS)


def sample_params(rng, height: int = DEFAULT_HEIGHT) -> tuple:
    return tuple(random_rational(rng, height) for _ in range(6))


def sample_generator_change(rng, a: Sequence, height: int = DEFAULT_HEIGHT) -> GeneratorChange:
    """Random change satisfying the linear restriction; the inequalities may
    still fail and are checked by the caller."""
    p1 = random_nonzero_rational(rng, height)
    pm, pn = random_rational(rng, height), random_rational(rng, height)
    qm, qn = random_rational(rng, height), random_rational(rng, height)
    t = random_nonzero_rational(rng, height)
    km, kn = kernel_direction(a, p1, pm, pn)
    return GeneratorChange(p1, pm, pn, qm, qn, t * km, t * kn)


def _mismatch(lhs: Sequence, rhs: Sequence) -> dict:
    out = {}
    for name, x, y in zip(CASE1_FORMULAS, lhs, rhs):
        if x != y:
            out[name] = {"formula": format_scalar(x), "transport": format_scalar(y)}
    return out


def check_formula_sample(a: Sequence, g: GeneratorChange, n: int = 8, formulas: Mapping | None = None):
    """"skip" for an inadmissible draw, None for agreement, else a
    counterexample record."""
    a = tuple(scalar(x) for x in a)
    if violated_restriction(a, g):
        return "skip"
    A = build_case1_family(n, a)
    try:
        _, via_transport = admissible_generator_change(A, g)
    except Rejected:
        return "skip"
    try:
        via_formula = formula_params(a, g, formulas)
    except ZeroDivisionError:
        return "skip"
    if via_formula == via_transport:
        return None
    return {
        "n": n,
        "a": [format_scalar(x) for x in a],
        "change": g.to_dict(),
        "mismatch": _mismatch(via_formula, via_transport),
    }


def verify_theorem1_formulas(
    samples: int = 100,
    seed: int = 0,
    dims: Sequence[int] = (8,),
    formulas: Mapping | None = None,
    height: int = DEFAULT_HEIGHT,
    max_failures: int = 10,
) -> dict:
    """Compare the closed-form parameters with independent transport on
    ``samples`` admissible random draws. Inadmissible draws are skipped and
    counted, and do not use up the sample budget."""
    rng = rng_for(seed)
    passes, skipped, failures, failed = 0, 0, [], 0
    k = 0
    while passes + failed < samples and skipped < 20 * samples + 100:
        n = dims[k % len(dims)]
        a = sample_params(rng, height)
        g = sample_generator_change(rng, a, height)
        result = check_formula_sample(a, g, n, formulas)
        if result == "skip":
            skipped += 1
            continue
        k += 1
        if result is None:
            passes += 1
        else:
            failed += 1
            if len(failures) < max_failures:
                failures.append(result)
    return {
        "op": "verify-theorem1-formulas",
        "seed": seed,
        "samples": samples,
        "dims": list(dims),
        "passes": passes,
        "failures": failures,
        "failure_count": failed,
        "skipped": skipped,
    }


# --- nullity invariants ------------------------------------------------------


def delta(a: Sequence) -> Fraction:
    a1, a2, a3, a4, a5, a6 = a
    return (
        a3**3 * a4
        + a3**2 * a4 * a5
        - a1 * a3**2 * a4 * a5
        + a2 * a3 * a4**2 * a5
        - a1 * a3 * a4 * a5**2
        - a1 * a3**2 * a6
        - 3 * a2 * a3 * a4 * a6
        + a1 * a2 * a3 * a4 * a6
        - a2**2 * a4**2 * a6
        + a3 * a5 * a6
        + a1**2 * a3 * a5 * a6
        + a2 * a4 * a5 * a6
        + a1 * a2 * a4 * a5 * a6
        - a1 * a5**2 * a6
        - a2 * a6**2
        + 2 * a1 * a2 * a6**2
        - a1**2 * a2 * a6**2
    )


def _h(rng):
    return random_rational(rng)


def _nz(rng):
    return random_nonzero_rational(rng)


def _case1_generic(rng):
    return (_h(rng), _h(rng), ZERO, _h(rng), _h(rng), ZERO)


def _case2_generic(rng):
    return (_h(rng), _h(rng), _nz(rng), _h(rng), _h(rng), _h(rng))


def _zero_a2a4_a1a5(rng):
    a2, a4, a5 = _h(rng), _h(rng), _nz(rng)
    return (a2 * a4 / a5, a2, ZERO, a4, a5, ZERO)


def _zero_a3a5_a2a6(rng):
    a2, a3, a6 = _h(rng), _nz(rng), _h(rng)
    return (_h(rng), a2, a3, _h(rng), a2 * a6 / a3, a6)


def _zero_quadratic(rng):
    a3, a5, a6 = _nz(rng), _h(rng), _nz(rng)
    return (_h(rng), (a3 * a3 - a3 * a5 + a5 * a5) / a6, a3, _h(rng), a5, a6)


def _zero_a3_a5(rng):
    a3 = _nz(rng)
    return (_h(rng), _h(rng), a3, _h(rng), a3, _h(rng))


def _zero_delta(rng):
    a3, a5 = _nz(rng), _h(rng)
    if rng.random() < 0.5:
        # a4 = 0: delta is linear in a2 once a6 != 0 and a1 != 1
        a1 = _h(rng)
        while a1 == 1:
            a1 = _h(rng)
        a6 = _nz(rng)
        a2 = (-a1 * a3**2 + a3 * a5 + a1**2 * a3 * a5 - a1 * a5**2) / (a6 * (1 - a1) ** 2)
        a = (a1, a2, a3, ZERO, a5, a6)
    else:
        # a6 = 0: delta = a3 a4 (a3^2 + a3a5 - a1a3a5 + a2a4a5 - a1a5^2)
        a1, a4, a5 = _h(rng), _nz(rng), _nz(rng)
        a2 = -(a3**2 + a3 * a5 - a1 * a3 * a5 - a1 * a5**2) / (a4 * a5)
        a = (a1, a2, a3, a4, a5, ZERO)
    assert delta(a) == 0
    return a


# scoped families used for separation


def _in_case1(a):
    return a[2] == 0 and a[5] == 0


def _in_case12(a):
    return _in_case1(a) and a[4] == 0


def _in_case12b(a):
    return _in_case12(a) and a[3] == 0


def _in_case22(a):
    a1, a2, a3, a4, a5, a6 = a
    return a3 != 0 and a3 * a5 == a2 * a6


def _in_case22b(a):
    a1, a2, a3, a4, a5, a6 = a
    return a3 != 0 and a2 != 0 and a5 == a3 and a3 * a3 == a2 * a6


def _e22b(a):
    a1, a2, a3, a4, a5, a6 = a
    return a3 - a1 * a3 + a2 * a4


def _in_case22b2(a):
    return _in_case22b(a) and _e22b(a) == 0


def _case12_generic(rng):
    return (_h(rng), _h(rng), ZERO, _h(rng), ZERO, ZERO)


def _case12b_generic(rng):
    return (_h(rng), _h(rng), ZERO, ZERO, ZERO, ZERO)


def _case22_generic(rng):
    a2, a3, a6 = _h(rng), _nz(rng), _h(rng)
    return (_h(rng), a2, a3, _h(rng), a2 * a6 / a3, a6)


def _case22_zero(rng):
    a2, a3, a6, a4 = _h(rng), _nz(rng), _nz(rng), _h(rng)
    return (a3 * a4 / a6, a2, a3, a4, a2 * a6 / a3, a6)


def _case22b_generic(rng):
    a2, a3 = _nz(rng), _nz(rng)
    return (_h(rng), a2, a3, _h(rng), a3, a3 * a3 / a2)


def _case22b_zero(rng):
    a2, a3, a1 = _nz(rng), _nz(rng), _h(rng)
    return (a1, a2, a3, (a1 * a3 - a3) / a2, a3, a3 * a3 / a2)


def _case22b2_generic(rng):
    return _case22b_zero(rng)


def _case22b2_zero(rng):
    a2, a3 = _nz(rng), _nz(rng)
    return (Fraction(1), a2, a3, ZERO, a3, a3 * a3 / a2)


def _always(a):
    return True


@dataclass(frozen=True)
class InvariantExpr:
    """A rational expression in ``a1..a6`` whose vanishing is preserved by
    admissible generator changes between algebras satisfying ``scope``."""

    name: str
    evaluate: Callable
    scope_text: str = "all parameters"
    scope: Callable = _always
    sample: Callable = _case2_generic
    sample_zero: Callable | None = None

    def is_zero(self, a) -> bool:
        return self.evaluate(a) == 0


NULLITY_INVARIANTS: tuple[InvariantExpr, ...] = (
    InvariantExpr(
        "a2a4-a1a5",
        lambda a: a[1] * a[3] - a[0] * a[4],
        "a3=a6=0",
        _in_case1,
        _case1_generic,
        _zero_a2a4_a1a5,
    ),
    InvariantExpr("a3a5-a2a6", lambda a: a[2] * a[4] - a[1] * a[5], sample_zero=_zero_a3a5_a2a6),
    InvariantExpr(
        "a3^2-a3a5+a5^2-a2a6",
        lambda a: a[2] ** 2 - a[2] * a[4] + a[4] ** 2 - a[1] * a[5],
        sample_zero=_zero_quadratic,
    ),
    InvariantExpr("a3-a5", lambda a: a[2] - a[4], sample_zero=_zero_a3_a5),
    InvariantExpr("Delta", delta, sample_zero=_zero_delta),
)

SCOPED_INVARIANTS: tuple[InvariantExpr, ...] = (
    InvariantExpr("a5", lambda a: a[4], "a3=a6=0", _in_case1, _case1_generic, lambda r: _case12_generic(r)),
    InvariantExpr(
        "a2", lambda a: a[1], "a3=a5=a6=0", _in_case12, _case12_generic, lambda r: (_h(r), ZERO, ZERO, _h(r), ZERO, ZERO)
    ),
    InvariantExpr(
        "a4", lambda a: a[3], "a3=a5=a6=0", _in_case12, _case12_generic, lambda r: (_h(r), _h(r), ZERO, ZERO, ZERO, ZERO)
    ),
    InvariantExpr(
        "a1-1",
        lambda a: a[0] - 1,
        "a3=a4=a5=a6=0",
        _in_case12b,
        _case12b_generic,
        lambda r: (Fraction(1), _h(r), ZERO, ZERO, ZERO, ZERO),
    ),
    InvariantExpr("a1a6-a3a4", lambda a: a[0] * a[5] - a[2] * a[3], "a3!=0, a3a5=a2a6", _in_case22, _case22_generic, _case22_zero),
    InvariantExpr(
        "a3-a1a3+a2a4",
        _e22b,
        "a2!=0, a3!=0, a5=a3, a3^2=a2a6",
        _in_case22b,
        _case22b_generic,
        _case22b_zero,
    ),
    InvariantExpr(
        "a1-1 (a5=a3 branch)",
        lambda a: a[0] - 1,
        "a2!=0, a3!=0, a5=a3, a3^2=a2a6, a3-a1a3+a2a4=0",
        _in_case22b2,
        _case22b2_generic,
        _case22b2_zero,
    ),
)

ALL_INVARIANTS = NULLITY_INVARIANTS + SCOPED_INVARIANTS


def check_nullity_sample(expr: InvariantExpr, a: Sequence, g: GeneratorChange, n: int = 8):
    """"skip", "out-of-scope", None (agreement) or a flip record."""
    a = tuple(scalar(x) for x in a)
    if violated_restriction(a, g):
        return "skip"
    try:
        _, new = admissible_generator_change(build_case1_family(n, a), g)
    except Rejected:
        return "skip"
    if not (expr.scope(a) and expr.scope(new)):
        return "out-of-scope"
    if expr.is_zero(a) == expr.is_zero(new):
        return None
    return {
        "expression": expr.name,
        "a": [format_scalar(x) for x in a],
        "a_new": [format_scalar(x) for x in new],
        "change": g.to_dict(),
    }


def verify_nullity_invariants(
    samples: int = 500,
    seed: int = 0,
    n: int = 8,
    expressions: Sequence[InvariantExpr] = NULLITY_INVARIANTS,
) -> dict:
    """For each expression, draw ``samples`` admissible (a, change) pairs in
    the expression's scope, half of them on its zero locus, and check that the
    expression vanishes before the change iff it vanishes after."""
    rng = rng_for(seed)
    per_expr = []
    total_pass = total_skip = 0
    failures = []
    for expr in expressions:
        passes = zeros = skipped = 0
        flips = []
        done = 0
        while done < samples and skipped < 20 * samples + 100:
            on_zero = expr.sample_zero is not None and done % 2 == 0
            a = expr.sample_zero(rng) if on_zero else expr.sample(rng)
            g = sample_generator_change(rng, a)
            result = check_nullity_sample(expr, a, g, n)
            if result in ("skip", "out-of-scope"):
                skipped += 1
                continue
            done += 1
            zeros += expr.is_zero(a)
            if result is None:
                passes += 1
            else:
                flips.append(result)
        per_expr.append(
            {
                "name": expr.name,
                "scope": expr.scope_text,
                "samples": done,
                "zero_samples": zeros,
                "passes": passes,
                "flips": len(flips),
                "skipped": skipped,
            }
        )
        total_pass += passes
        total_skip += skipped
        failures += flips[:5]
    return {
        "op": "verify-nullity-invariants",
        "seed": seed,
        "samples": samples,
        "passes": total_pass,
        "failures": failures,
        "skipped": total_skip,
        "expressions": per_expr,
    }


# --- separation and search ---------------------------------------------------


@dataclass(frozen=True)
class SeparatedBy:
    invariant: str
    values: tuple = ()

    def to_dict(self) -> dict:
        return {"result": "SeparatedBy", "invariant": self.invariant, "values": list(self.values)}


@dataclass(frozen=True)
class NoIsoFound:
    budget: int
    seed: int
    note: str = ""

    def to_dict(self) -> dict:
        out = {"result": "NoIsoFound", "budget": self.budget, "seed": self.seed}
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class IsoFound:
    change: BasisChange
    generators: GeneratorChange | None = field(default=None)

    def to_dict(self) -> dict:
        out = {"result": "IsoFound", "matrix": self.change.to_lists()}
        if self.generators is not None:
            out["generators"] = self.generators.to_dict()
        return out


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    p, q = isqrt(x.numerator), isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


def _scale_candidates(ahat: tuple, b: tuple) -> list[tuple[Fraction, Fraction]]:
    """Scalings (u, v) of (Q, R) that could send ``ahat`` to ``b``.

    Under Q -> uQ and R -> vR the parameters scale as
    (a1, u a2, v a3, (v/u) a4, v a5, (v^2/u) a6).
    """
    h1, h2, h3, h4, h5, h6 = ahat
    b1, b2, b3, b4, b5, b6 = b
    if h1 != b1:
        return []
    us, vs = set(), set()
    if h2:
        us.add(b2 / h2)
    if h3:
        vs.add(b3 / h3)
    if h5:
        vs.add(b5 / h5)
    if us and not vs:
        for u in us:
            if h4:
                vs.add(b4 * u / h4)
            if h6:
                r = _rational_sqrt(b6 * u / h6)
                if r is not None:
                    vs.update({r, -r})
        vs = vs or {Fraction(1)}
    elif vs and not us:
        for v in vs:
            if h4 and b4:
                us.add(v * h4 / b4)
            if h6 and b6:
                us.add(v * v * h6 / b6)
        us = us or {Fraction(1)}
    elif not us and not vs:
        if h4 and b4 and h6 and b6:
            k, m = b4 / h4, b6 / h6
            vs.add(m / k)
            us.add(m / (k * k))
        elif h4 and b4:
            us.add(Fraction(1))
            vs.add(b4 / h4)
        elif h6 and b6:
            us.add(Fraction(1))
            vs.update(r for r in [_rational_sqrt(b6 / h6)] if r is not None)
        else:
            us.add(Fraction(1))
            vs.add(Fraction(1))
    out = []
    for u in sorted(us):
        for v in sorted(vs):
            if u and v and (h1, u * h2, v * h3, v / u * h4, v * h5, v * v / u * h6) == b:
                out.append((u, v))
    return out


def _scoped_separation(a: tuple, b: tuple) -> SeparatedBy | None:
    for expr in ALL_INVARIANTS:
        if expr.scope(a) and expr.scope(b) and expr.is_zero(a) != expr.is_zero(b):
            values = ("0" if expr.is_zero(a) else "nonzero", "0" if expr.is_zero(b) else "nonzero")
            return SeparatedBy(f"nullity of {expr.name} [{expr.scope_text}]", values)
    return None


def separate_or_search(
    A: StructureAlgebra,
    B: StructureAlgebra,
    budget: int = 10000,
    seed: int = 0,
    trials: int = 32,
    height: int = DEFAULT_HEIGHT,
) -> SeparatedBy | NoIsoFound | IsoFound:
    """Try to tell A and B apart by invariants, else search for an
    isomorphism among Case I generator changes.

    NoIsoFound is evidence only; it always carries the budget and seed.
    """
    if A.dim != B.dim:
        return SeparatedBy("dim", (A.dim, B.dim))
    if A == B:
        return IsoFound(BasisChange.identity(A.dim), GeneratorChange.identity() if A.dim >= MIN_TYPE1_DIM else None)
    fa, fb = fingerprint(A, trials, seed), fingerprint(B, trials, seed)
    diff = fa.first_difference(fb)
    if diff:
        return SeparatedBy(diff, (fa.to_dict()[diff], fb.to_dict()[diff]))
    a, b = case1_params(A), case1_params(B)
    if a is None or b is None:
        return NoIsoFound(budget, seed, "fingerprints agree; the search covers only Case I family members")
    sep = _scoped_separation(a, b)
    if sep:
        return sep
    rng = rng_for(seed)
    for _ in range(budget):
        p1 = random_nonzero_rational(rng, height)
        pm, pn = random_rational(rng, height), random_rational(rng, height)
        qm, qn = random_rational(rng, height), random_rational(rng, height)
        rm, rn = kernel_direction(a, p1, pm, pn)
        ghat = GeneratorChange(p1, pm, pn, qm, qn, rm, rn)
        if violated_restriction(a, ghat):
            continue
        ahat = formula_params(a, ghat)
        for u, v in _scale_candidates(ahat, b):
            g = GeneratorChange(p1, pm, pn, u * qm, u * qn, v * rm, v * rn)
            try:
                P, _ = admissible_generator_change(A, g)
            except Rejected:
                continue
            if transport(A, P) == B:
                return IsoFound(P, g)
    return NoIsoFound(budget, seed)
