"""Zinbiel-identity constraints on unknown structure constants of a graded
template, and linear or span-based refutation of templates.

A :class:`GradedTemplate` fixes the layer of every basis vector, some known
products (the action of ``L_{e_1}`` and the binomial core), and one unknown
per slot ``(i, j, k)`` allowed by ``layer(i) + layer(j) == layer(k)``.
Expanding ``Z(e_a, e_b, e_c)`` over the template gives polynomial equations
of degree at most two in those unknowns.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from math import comb, gcd
from typing import Callable, Iterable, Mapping, Sequence

from .algebra import StructureAlgebra
from .errors import RangeError
from .linalg import ONE, ZERO, format_scalar, scalar, subspace_from_spanning, unit_vector

# --- sparse polynomials ------------------------------------------------------


class Poly:
    """Sparse polynomial with Fraction coefficients.

    Monomials are sorted tuples of variable names; ``()`` is the constant.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): scalar(c)})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({(name,): ONE})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return Poly(out)

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, c) -> "Poly":
        return Poly({m: c * x for m, x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(scalar(other))
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2))
                out[m] = out.get(m, ZERO) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def primitive(self) -> "Poly":
        """Integer coefficients with gcd 1, constant (or leading term) positive."""
        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // gcd(den, c.denominator)
        ints = {m: c * den for m, c in self.terms.items()}
        g = 0
        for c in ints.values():
            g = gcd(g, int(c))
        lead = ints.get((), ints[min(ints, key=lambda m: (len(m), m))])
        f = Fraction(1 if lead > 0 else -1, g)
        return self.scale(den * f)

    def is_linear(self) -> bool:
        return self.degree <= 1

    def variables(self) -> set:
        return {v for m in self.terms for v in m}

    def constant(self) -> Fraction:
        return self.terms.get((), ZERO)

    def linear_coefficients(self) -> dict:
        return {m[0]: c for m, c in self.terms.items() if len(m) == 1}

    def substitute(self, values: Mapping) -> "Poly":
        out: dict = {}
        for m, c in self.terms.items():
            rest = []
            for v in m:
                if v in values:
                    c = c * values[v]
                else:
                    rest.append(v)
            if c:
                key = tuple(rest)
                out[key] = out.get(key, ZERO) + c
        return Poly(out)

    def evaluate(self, values: Mapping) -> Fraction:
        p = self.substitute(values)
        if p.variables():
            raise KeyError(f"no value for {sorted(p.variables())}")
        return p.constant()

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (len(m), m)):
            c = self.terms[m]
            mono = "*".join(m)
            if not m:
                s = format_scalar(abs(c))
            elif abs(c) == 1:
                s = mono
            else:
                s = f"{format_scalar(abs(c))}*{mono}"
            parts.append(("-" if c < 0 else "+", s))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            text += f" {sign} {s}"
        return text

    __repr__ = __str__


# --- templates ---------------------------------------------------------------


@dataclass(frozen=True)
class GradedTemplate:
    """Gradation plus known products; everything else is unknown where the
    layer rule allows it and zero elsewhere."""

    name: str
    dim: int
    layer: tuple  # layer[i-1] is the layer of e_i
    fixed: Mapping  # (i, j) -> {k: Fraction}; the whole product is known
    aliases: Mapping = field(default_factory=dict)  # (i, j, k) -> readable name
    note: str = ""

    def __post_init__(self):
        n = self.dim
        if len(self.layer) != n:
            raise ValueError("one layer per basis vector")
        for (i, j), out in self.fixed.items():
            for k, c in out.items():
                if c and self.layer[k - 1] != self.layer[i - 1] + self.layer[j - 1]:
                    raise ValueError(f"fixed product e_{i} o e_{j} -> e_{k} breaks the layer rule")
        slots = {}
        for i, j in iproduct(range(1, n + 1), repeat=2):
            if (i, j) in self.fixed:
                continue
            target = self.layer[i - 1] + self.layer[j - 1]
            ks = [k for k in range(1, n + 1) if self.layer[k - 1] == target]
            if ks:
                slots[(i, j)] = ks
        object.__setattr__(self, "_slots", slots)
        object.__setattr__(self, "_cache", {})

    def slots(self, i: int, j: int) -> list[int]:
        return self._slots.get((i, j), [])

    def var(self, i: int, j: int, k: int) -> str:
        return self.aliases.get((i, j, k), f"c({i},{j},{k})")

    def slot_of(self, name: str) -> tuple:
        for (i, j), ks in self._slots.items():
            for k in ks:
                if self.var(i, j, k) == name:
                    return (i, j, k)
        raise KeyError(name)

    @property
    def unknowns(self) -> list[str]:
        return [self.var(i, j, k) for (i, j), ks in sorted(self._slots.items()) for k in ks]

    def product(self, i: int, j: int) -> dict:
        """``e_i o e_j`` as ``{k: Poly}``."""
        key = (i, j)
        cache = self._cache
        if key not in cache:
            if key in self.fixed:
                cache[key] = {k: Poly.const(c) for k, c in self.fixed[key].items() if c}
            else:
                cache[key] = {k: Poly.var(self.var(i, j, k)) for k in self.slots(i, j)}
        return cache[key]

    def layers(self) -> dict:
        out: dict = {}
        for i, l in enumerate(self.layer, start=1):
            out.setdefault(l, []).append(i)
        return dict(sorted(out.items()))

    def summary(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "layers": {str(l): idx for l, idx in self.layers().items()},
            "fixed_products": [
                [i, j, {str(k): format_scalar(c) for k, c in sorted(out.items()) if c}]
                for (i, j), out in sorted(self.fixed.items())
                if any(out.values())
            ],
            "unknowns": len(self.unknowns),
            "aliases": {name: list(slot) for slot, name in sorted(self.aliases.items())},
            **({"note": self.note} if self.note else {}),
        }

    def assignment_from(self, A: StructureAlgebra) -> dict:
        """Values of the unknowns read from an algebra that fits the template;
        ValueError if the algebra does not fit."""
        if A.dim != self.dim:
            raise ValueError("dimension mismatch")
        values = {}
        for i, j, k, c in A.entries():
            if (i, j) in self.fixed:
                continue
            if k not in self.slots(i, j):
                raise ValueError(f"e_{i} o e_{j} has an e_{k} component outside the template")
        for (i, j), out in self.fixed.items():
            for k in range(1, self.dim + 1):
                if A.coefficient(i, j, k) != out.get(k, ZERO):
                    raise ValueError(f"fixed product e_{i} o e_{j} differs from the algebra")
        for (i, j), ks in self._slots.items():
            for k in ks:
                values[self.var(i, j, k)] = A.coefficient(i, j, k)
        return values


def _binomial_core(top: int) -> dict:
    return {(i, j): {i + j: Fraction(comb(i + j - 1, j))} for i in range(2, top) for j in range(1, top) if i + j <= top}


def _left_action(n: int, images: Mapping[int, int]) -> dict:
    """``e_1 o e_j = e_{images[j]}``; every other ``e_1 o e_j`` is zero."""
    return {(1, j): ({images[j]: ONE} if j in images else {}) for j in range(1, n + 1)}


def type1_template(n: int, r1: int, r2: int) -> GradedTemplate:
    """``e_1 o e_i = e_{i+1}`` (i <= n-4), ``e_1 o e_{n-2} = e_{n-1}``, with
    ``e_{n-2}`` in layer r1 and ``e_n`` in layer r2."""
    layer = [i for i in range(1, n - 2)] + [r1, r1 + 1, r2]
    fixed = _left_action(n, {**{i: i + 1 for i in range(1, n - 3)}, n - 2: n - 1})
    fixed.update(_binomial_core(n - 3))
    aliases = {}
    if (r1, r2) == (1, 2):
        m = n - 2
        aliases = {
            (m, 1, 2): "alpha1",
            (m, 1, n - 1): "beta1",
            (m, 1, n): "gamma1",
            (m, m, 2): "alpha2",
            (m, m, n - 1): "beta2",
            (m, m, n): "gamma2",
            (m, n - 1, 3): "delta1",
            (m, n, 3): "delta2",
            (n, 1, 3): "delta3",
            (n, m, 3): "delta4",
            (n, n - 1, 4): "delta5",
            (n, n, 4): "delta6",
        }
    return GradedTemplate(f"type I, r1={r1}, r2={r2}", n, tuple(layer), fixed, aliases)


def type2_template(n: int, r: int) -> GradedTemplate:
    """``e_1 o e_1 = e_2``, ``e_1 o e_i = e_{i+1}`` for 3 <= i <= n-2, with
    ``e_n`` in layer r."""
    layer = [1, 2] + [i - 2 for i in range(3, n)] + [r]
    layer[2] = 1  # e_3 starts the long chain
    fixed = _left_action(n, {1: 2, **{i: i + 1 for i in range(3, n - 1)}})
    aliases = {(3, 1, 2): "alpha1", (3, 1, 4): "beta1", (3, 2, 5): "beta2"}
    return GradedTemplate(f"type II, e_n in layer {r}", n, tuple(layer), fixed, aliases)


def type3_template(n: int, r: int) -> GradedTemplate:
    """``e_1 o e_i = e_{i+1}`` for 2 <= i <= n-3, ``e_1 o e_{n-1} = e_n``, with
    ``e_{n-1}`` in layer r and ``e_n`` in layer r+1."""
    layer = [1] + [i - 1 for i in range(2, n - 1)] + [r, r + 1]
    fixed = _left_action(n, {**{i: i + 1 for i in range(2, n - 2)}, n - 1: n})
    return GradedTemplate(f"type III, e_(n-1) in layer {r}", n, tuple(layer), fixed)


# --- constraint generation ---------------------------------------------------


@dataclass(frozen=True)
class Equation:
    """``poly = 0``, the e_component coordinate of Z(e_a, e_b, e_c)."""

    poly: Poly
    triple: tuple
    component: int

    def __str__(self):
        return f"{self.poly} = 0"

    def to_dict(self) -> dict:
        out = {"triple": list(self.triple), "component": self.component, "text": str(self)}
        if self.poly.is_linear():
            coeffs = self.poly.linear_coefficients()
            out["coefficients"] = {v: format_scalar(c) for v, c in sorted(coeffs.items())}
            out["constant"] = format_scalar(self.poly.constant())
        return out


@dataclass(frozen=True)
class ConstraintSystem:
    template: GradedTemplate
    triples: tuple
    equations: tuple

    @property
    def unknowns(self) -> list[str]:
        return self.template.unknowns

    def linear(self) -> list[Equation]:
        return [e for e in self.equations if e.poly.is_linear()]

    def nonlinear(self) -> list[Equation]:
        return [e for e in self.equations if not e.poly.is_linear()]


def _vec_add(acc: dict, vec: dict, factor: Poly, sign: int):
    for k, p in vec.items():
        term = p * factor
        if sign < 0:
            term = -term
        acc[k] = acc.get(k, Poly()) + term


def defect_polys(t: GradedTemplate, a: int, b: int, c: int) -> dict:
    """``Z(e_a, e_b, e_c)`` over the template as ``{k: Poly}``."""
    out: dict = {}
    for m, p in t.product(a, b).items():
        _vec_add(out, t.product(m, c), p, 1)
    for m, p in t.product(b, c).items():
        _vec_add(out, t.product(a, m), p, -1)
    for m, p in t.product(c, b).items():
        _vec_add(out, t.product(a, m), p, -1)
    return {k: p for k, p in sorted(out.items()) if p}


def all_triples(n: int) -> list[tuple]:
    return list(iproduct(range(1, n + 1), repeat=3))


def generator_triples(n: int) -> list[tuple]:
    """Triples with e_1 in the first or second position, lexicographic."""
    return sorted({(1, b, c) for b in range(1, n + 1) for c in range(1, n + 1)} | {(b, 1, c) for b in range(1, n + 1) for c in range(1, n + 1)})


def generate_constraints(t: GradedTemplate, triples: Iterable | str = "generators") -> ConstraintSystem:
    """One equation per nonzero coordinate of Z on each selected triple.

    ``triples`` is an explicit list, ``"generators"`` (see
    :func:`generator_triples`) or ``"all"`` (all n^3 triples, n <= 9 only).
    """
    if triples == "all":
        if t.dim > 9:
            raise RangeError("exhaustive triple selection is limited to n <= 9")
        triples = all_triples(t.dim)
    elif triples == "generators":
        triples = generator_triples(t.dim)
    triples = tuple(tuple(x) for x in triples)
    eqs = []
    for tr in triples:
        for k, p in defect_polys(t, *tr).items():
            eqs.append(Equation(p, tr, k))
    return ConstraintSystem(t, triples, tuple(eqs))


# --- sparse linear elimination with provenance -------------------------------


class LinearEliminator:
    """Incremental Gauss-Jordan elimination of ``sum c_v v + const = 0`` rows.

    Rows are kept fully reduced. ``priority`` orders variables for pivoting;
    variables with a smaller key are eliminated first. Every row carries the
    set of input ids it was combined from.
    """

    def __init__(self, priority: Callable[[str], tuple] | None = None):
        self.priority = priority or (lambda v: (0, v))
        self.rows: dict = {}  # pivot -> (coeffs, const, support)
        self.occurs: dict = {}  # var -> pivots of rows containing it
        self.contradiction = None  # (const, support)

    def add(self, coeffs: Mapping, const, support: frozenset):
        coeffs = {v: c for v, c in coeffs.items() if c}
        const = scalar(const)
        for v in [v for v in coeffs if v in self.rows]:
            f = coeffs.get(v)
            if not f:
                continue
            pc, pconst, psup = self.rows[v]
            for w, x in pc.items():
                y = coeffs.get(w, ZERO) - f * x
                if y:
                    coeffs[w] = y
                else:
                    coeffs.pop(w, None)
            coeffs.pop(v, None)
            const -= f * pconst
            support = support | psup
        if not coeffs:
            if const and self.contradiction is None:
                self.contradiction = (const, support)
            return
        p = min(coeffs, key=self.priority)
        inv = 1 / coeffs[p]
        row = {w: x * inv for w, x in coeffs.items() if w != p}
        const *= inv
        for q in list(self.occurs.get(p, ())):
            qc, qconst, qsup = self.rows[q]
            f = qc.pop(p)
            for w, x in row.items():
                y = qc.get(w, ZERO) - f * x
                if y:
                    if w not in qc:
                        self.occurs.setdefault(w, set()).add(q)
                    qc[w] = y
                elif w in qc:
                    del qc[w]
                    self.occurs[w].discard(q)
            self.rows[q] = (qc, qconst - f * const, qsup | support)
        self.occurs.pop(p, None)
        self.rows[p] = (row, const, support)
        for w in row:
            self.occurs.setdefault(w, set()).add(p)

    @property
    def consistent(self) -> bool:
        return self.contradiction is None

    def determined(self) -> dict:
        """Variables fixed to a constant: ``{var: (value, support)}``."""
        return {p: (-const, sup) for p, (row, const, sup) in self.rows.items() if not row}


def _eliminate(lin: Sequence[tuple]) -> LinearEliminator:
    el = LinearEliminator()
    for idx, (coeffs, const) in enumerate(lin):
        el.add(dict(coeffs), const, frozenset([idx]))
        if not el.consistent:
            break
    return el


def _linear_form(p: Poly) -> tuple[dict, Fraction]:
    return p.linear_coefficients(), p.constant()


@dataclass
class Propagation:
    """Fixpoint of linear elimination and substitution of determined values."""

    values: dict  # var -> Fraction
    supports: dict  # var -> frozenset of equation indices
    contradiction: tuple | None  # (nonzero constant, support)
    residual: list  # (Poly, support) still nonlinear

    @property
    def consistent(self) -> bool:
        return self.contradiction is None


def propagate(equations: Sequence[Equation]) -> Propagation:
    """Linear elimination, then substitute every variable fixed to a constant
    into the remaining equations, until nothing new is fixed."""
    el = LinearEliminator()
    pending = [(e.poly, frozenset([i])) for i, e in enumerate(equations)]
    values: dict = {}
    supports: dict = {}
    while True:
        still = []
        for poly, sup in pending:
            used = poly.variables() & values.keys()
            if used:
                poly = poly.substitute(values)
                for v in used:
                    sup = sup | supports[v]
            if poly.is_linear():
                coeffs, const = _linear_form(poly)
                el.add(coeffs, const, sup)
            else:
                still.append((poly, sup))
        pending = still
        if not el.consistent:
            break
        new = {v: vs for v, vs in el.determined().items() if v not in values}
        if not new:
            break
        for v, (val, sup) in new.items():
            values[v] = val
            supports[v] = sup
    return Propagation(values, supports, el.contradiction, pending)


# --- refutation --------------------------------------------------------------


@dataclass(frozen=True)
class Inconsistent:
    """A minimal inconsistent subset of the linear equations."""

    equations: tuple
    triples: tuple

    verdict = "Inconsistent"


@dataclass(frozen=True)
class Undetermined:
    """Linear analysis alone does not refute the system."""

    linear: int
    nonlinear: int
    verdict = "Undetermined"


def _linear_rows(eqs: Sequence[Equation]) -> list[tuple]:
    return [_linear_form(e.poly) for e in eqs]


def minimal_inconsistent(eqs: Sequence[Equation]) -> list[Equation] | None:
    """Greedy deletion: drop equations one at a time while the rest stays
    inconsistent. None if the equations are consistent."""
    el = _eliminate(_linear_rows(eqs))
    if el.consistent:
        return None
    keep = [eqs[i] for i in sorted(el.contradiction[1])]
    i = 0
    while i < len(keep):
        trial = keep[:i] + keep[i + 1:]
        if trial and not _eliminate(_linear_rows(trial)).consistent:
            keep = trial
        else:
            i += 1
    return keep


def refute_linear(cs: ConstraintSystem | Sequence[Equation]) -> Inconsistent | Undetermined:
    eqs = cs.equations if isinstance(cs, ConstraintSystem) else tuple(cs)
    lin = [e for e in eqs if e.poly.is_linear()]
    witness = minimal_inconsistent(lin)
    if witness is None:
        return Undetermined(len(lin), len(eqs) - len(lin))
    return Inconsistent(tuple(witness), tuple(sorted({e.triple for e in witness})))


def project_linear(eqs: Sequence[Equation], keep: Iterable[str]) -> list[tuple[Poly, frozenset]]:
    """Linear consequences of ``eqs`` that only involve the ``keep`` variables.

    Auxiliary variables are pivoted first, so rows whose pivot is a kept
    variable are free of auxiliaries. A contradiction is returned as the
    constant polynomial it reduced to.
    """
    keep = set(keep)
    el = LinearEliminator(lambda v: (v in keep, v))
    for i, e in enumerate(eqs):
        if e.poly.is_linear():
            coeffs, const = _linear_form(e.poly)
            el.add(coeffs, const, frozenset([i]))
    out = []
    for p, (row, const, sup) in sorted(el.rows.items()):
        if p in keep:
            terms = {(p,): ONE, (): const, **{(w,): x for w, x in row.items()}}
            out.append((Poly(terms), sup))
    if el.contradiction:
        out.append((Poly.const(el.contradiction[0]), el.contradiction[1]))
    return out


# --- case studies ------------------------------------------------------------

TYPE2_SUPPORT = ((1, 3, 1), (1, 1, 3), (1, 1, 4), (1, 3, 2), (1, 4, 1), (1, 1, 5), (1, 4, 2))
TYPE2_PRIMARY = ((1, 2, 3), (1, 2, 4), (1, 2, 5))
TYPE3_TRIPLES = ((1, 2, 1), (1, 1, 2), (1, 1, 3))


def case5_triples(n: int) -> tuple:
    """The fourteen triples that settle the Case V unknowns."""
    return (
        (1, n - 2, 1),
        (1, n - 1, 1),
        (1, 1, n - 2),
        (n - 2, 1, 1),
        (n - 2, n - 1, 1),
        (n - 2, n - 2, 1),
        (1, n - 2, n - 2),
        (1, n, 1),
        (n - 2, n, 1),
        (1, n, n - 2),
        (1, n - 2, n - 1),
        (1, n - 2, n),
        (n, n - 1, 1),
        (1, n, n),
    )


CASE_RANGES = {"I-II": 7, "I-III": 8, "I-IV": 8, "II": 9, "III": 7}
CASE_ALIASES = {
    "i-ii": "I-II",
    "typei-ii": "I-II",
    "caseii": "I-II",
    "i-iii": "I-III",
    "typei-iii": "I-III",
    "caseiii": "I-III",
    "i-iv": "I-IV",
    "typei-iv": "I-IV",
    "caseiv": "I-IV",
    "ii": "II",
    "typeii": "II",
    "iii": "III",
    "typeiii": "III",
}


def normalise_case(case_id: str) -> str:
    key = case_id.strip().lower().replace("_", "-").replace(" ", "")
    if key not in CASE_ALIASES:
        raise KeyError(f"unknown case {case_id!r}; expected one of {', '.join(CASE_RANGES)}")
    return CASE_ALIASES[key]


def type2_equations(n: int, r: int) -> list[dict]:
    """For each primary triple (e_1, e_2, e_k), the consequence in
    alpha1, beta1, beta2 of that triple together with the supporting triples
    that evaluate the products it needs."""
    t = type2_template(n, r)
    keep = ("alpha1", "beta1", "beta2")
    out = []
    for primary in TYPE2_PRIMARY:
        cs = generate_constraints(t, TYPE2_SUPPORT + (primary,))
        derived = [(p, sup) for p, sup in project_linear(cs.equations, keep) if p]
        used = [
            (p, sorted({cs.equations[i].triple for i in sup}))
            for p, sup in derived
            if any(cs.equations[i].triple == primary for i in sup)
        ]
        for p, triples in used:
            out.append({"primary": primary, "poly": p.primitive(), "triples": triples})
    return out


def _equation_record(poly: Poly, variables: Sequence[str], primary=None, triples=()) -> dict:
    coeffs = poly.linear_coefficients()
    rec = {
        "text": f"{poly} = 0",
        "coefficients": [format_scalar(coeffs.get(v, ZERO)) for v in variables],
        "constant": format_scalar(poly.constant()),
    }
    if primary is not None:
        rec["primary_triple"] = list(primary)
    if triples:
        rec["triples"] = [list(t) for t in triples]
    return rec


def _refute_type2(n: int) -> dict:
    variants = []
    variables = ["beta1", "beta2"]
    witness_triples = None
    all_refuted = True
    for r in range(1, n - 2):
        derived = type2_equations(n, r)
        eqs = [Equation(d["poly"], d["primary"], 0) for d in derived]
        res = refute_linear(eqs)
        refuted = isinstance(res, Inconsistent)
        all_refuted &= refuted
        rec = {
            "r": r,
            "verdict": res.verdict,
            "equations": [_equation_record(d["poly"], variables, d["primary"], d["triples"]) for d in derived],
        }
        if refuted:
            rec["witness_triples"] = [list(t) for t in res.triples]
            witness_triples = witness_triples or rec["witness_triples"]
        variants.append(rec)
    first = variants[0]
    return {
        "template": type2_template(n, 1).summary(),
        "triple_selection": {
            "primary": [list(t) for t in TYPE2_PRIMARY],
            "support": [list(t) for t in TYPE2_SUPPORT],
        },
        "variables": variables,
        "equations": first["equations"],
        "witness_triples": witness_triples or [],
        "variants": variants,
        "verdict": "Inconsistent" if all_refuted else "Undetermined",
    }


def _refute_type3(n: int) -> dict:
    variants = []
    all_refuted = True
    witness = None
    for r in range(1, n - 3):
        t = type3_template(n, r)
        cs = generate_constraints(t, TYPE3_TRIPLES)
        res = refute_linear(cs)
        refuted = isinstance(res, Inconsistent)
        all_refuted &= refuted
        rec = {"r": r, "verdict": res.verdict}
        if refuted:
            variables = sorted({v for e in res.equations for v in e.poly.variables()})
            rec["variables"] = variables
            rec["equations"] = [
                {**_equation_record(e.poly, variables), "triple": list(e.triple), "component": e.component}
                for e in res.equations
            ]
            rec["witness_triples"] = [list(x) for x in res.triples]
            rec["contradiction"] = explain_contradiction(res.equations)
            witness = witness or rec
        variants.append(rec)
    return {
        "template": type3_template(n, 1).summary(),
        "triple_selection": [list(t) for t in TYPE3_TRIPLES],
        "equations": witness["equations"] if witness else [],
        "witness_triples": witness["witness_triples"] if witness else [],
        "contradiction": witness["contradiction"] if witness else None,
        "variants": variants,
        "verdict": "Inconsistent" if all_refuted else "Undetermined",
    }


def explain_contradiction(eqs: Sequence[Equation]) -> dict | None:
    """The first equation that collapses to ``0 = c`` (c nonzero) once the
    values forced by the earlier ones are substituted."""
    for k in range(1, len(eqs) + 1):
        if not propagate(eqs[:k]).consistent:
            before = propagate(eqs[: k - 1])
            reduced = eqs[k - 1].poly.substitute(before.values)
            return {
                "forced_values": {v: format_scalar(x) for v, x in sorted(before.values.items())},
                "triple": list(eqs[k - 1].triple),
                "component": eqs[k - 1].component,
                "reduces_to": f"{reduced} = 0",
            }
    return None


@dataclass(frozen=True)
class Reachability:
    layer: int
    target: int
    reachable: bool
    span: tuple  # basis indices with a possibly nonzero coefficient
    forced_zero: tuple  # unknown slots of l_1 o l_(L-1) forced to vanish


def layer_reachability(t: GradedTemplate, prop: Propagation, layer: int, target: int) -> Reachability:
    """Can ``e_target`` appear in ``l_1 o l_(layer-1)``?

    The span is over-approximated: every unknown component that propagation
    did not pin to a constant counts as free.
    """
    n = t.dim
    groups = t.layers()
    ones, prev = groups.get(1, []), groups.get(layer - 1, [])
    vecs = []
    forced = []
    for a in ones:
        for b in prev:
            prod = t.product(a, b)
            const = [ZERO] * n
            for k, p in prod.items():
                p = p.substitute(prop.values)
                if p.variables():
                    vecs.append(unit_vector(n, k - 1))
                else:
                    const[k - 1] = p.constant()
                    if (a, b) not in t.fixed and not p.constant():
                        forced.append((a, b, k))
            vecs.append(tuple(const))
    span = subspace_from_spanning(n, vecs)
    support = tuple(k + 1 for k in range(n) if any(v[k] for v in span.vectors))
    return Reachability(layer, target, unit_vector(n, target - 1) in span, support, tuple(forced))


def _type1_variants(case: str, n: int) -> list[tuple[int, int, int, int]]:
    """(r1, r2, target layer, target index) for each placement in the case."""
    if case == "I-II":
        return [(r1, 1, r1, n - 2) for r1 in range(3, n - 3)]
    if case == "I-III":
        return [(2, 1, 2, n - 2)]
    return [(1, r2, r2, n) for r2 in range(4, n - 2)]


def _refute_type1(case: str, n: int) -> dict:
    variants = []
    all_refuted = True
    example = None
    for r1, r2, target_layer, target in _type1_variants(case, n):
        t = type1_template(n, r1, r2)
        cs = generate_constraints(t, "generators")
        prop = propagate(cs.equations)
        rec = {"r1": r1, "r2": r2, "equations": len(cs.equations)}
        if not prop.consistent:
            rec["verdict"] = "Inconsistent"
            rec["witness_triples"] = [list(x) for x in sorted({cs.equations[i].triple for i in prop.contradiction[1]})]
        else:
            reach = layer_reachability(t, prop, target_layer, target)
            rec["target"] = {"layer": target_layer, "element": f"e_{target}"}
            rec["reachable_elements"] = [f"e_{k}" for k in reach.span]
            rec["forced_zero_slots"] = [t.var(*s) for s in reach.forced_zero]
            support = set()
            for s in reach.forced_zero:
                support |= prop.supports.get(t.var(*s), frozenset())
            rec["witness_triples"] = [list(x) for x in sorted({cs.equations[i].triple for i in support})]
            rec["vanishing_products"] = _vanishing_products(t, prop, case, n)
            rec["verdict"] = "Unreachable" if not reach.reachable else "Undetermined"
        all_refuted &= rec["verdict"] in ("Inconsistent", "Unreachable")
        example = example or t
        variants.append(rec)
    out = {
        "template": example.summary() if example else None,
        "triple_selection": "generator triples: (1,b,c) and (b,1,c) for all b, c",
        "variants": variants,
        "witness_triples": variants[0]["witness_triples"] if variants else [],
        "verdict": "Unreachable" if all_refuted and variants else "Undetermined",
    }
    if case == "I-IV":
        out["note"] = "reconstructed by analogy with Cases II and III; no equations are displayed for this case"
    return out


def _vanishing_products(t: GradedTemplate, prop: Propagation, case: str, n: int) -> list[str]:
    """Products with the distinguished generator that propagation forces to 0."""
    g = n if case in ("I-II", "I-III") else n - 2
    out = []
    for i in range(1, n - 2):
        for a, b in ((g, i), (i, g)):
            if (a, b) in t.fixed:
                continue
            if all(not p.substitute(prop.values) for p in t.product(a, b).values()):
                out.append(f"e_{a}*e_{b}=0")
    return out


def refute_case(case_id: str, n: int) -> dict:
    """Mechanised nonexistence argument for a gradation case.

    ``case_id`` is one of I-II, I-III, I-IV (type I with the given placement
    of ``e_{n-2}`` and ``e_n``), II or III.
    """
    case = normalise_case(case_id)
    low = CASE_RANGES[case]
    if n < low:
        raise RangeError(f"case {case} is stated for n >= {low}, got n={n}")
    if case == "II":
        body = _refute_type2(n)
    elif case == "III":
        body = _refute_type3(n)
    else:
        body = _refute_type1(case, n)
    return {"op": "nonexistence", "case": case, "n": n, **body}


def case5_vanishing(n: int = 8, triples: Iterable | None = None) -> dict:
    """Values forced on the Case V unknowns by the listed identities."""
    t = type1_template(n, 1, 2)
    cs = generate_constraints(t, case5_triples(n) if triples is None else triples)
    prop = propagate(cs.equations)
    return {name: prop.values.get(name) for name in t.aliases.values()}
