"""Builders for the classified algebras of nilindex n-3 with characteristic
sequence (n-3, 2, 1), plus the null-filiform algebra.

All Type I algebras share the binomial core ``e_i o e_j = C(i+j-1, j) e_{i+j}``
on ``e_1..e_{n-3}`` and the product ``e_1 o e_{n-2} = e_{n-1}``; they differ in
how ``e_{n-2}`` and ``e_n`` multiply.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Mapping

from .algebra import StructureAlgebra
from .errors import ParameterDomainError
from .linalg import format_scalar, scalar

MIN_TYPE1_DIM = 8

CASE1_PARAMS = ("a1", "a2", "a3", "a4", "a5", "a6")
CASE5_PARAMS = ("beta1", "beta2", "gamma1", "gamma2")


class ProvenanceWarning(UserWarning):
    """A parameter value sits on a boundary where the source classification is
    inconsistent with itself."""


def _binomial_core(n: int, top: int) -> dict:
    return {
        (i, j): {i + j: Fraction(comb(i + j - 1, j))}
        for i in range(1, top + 1)
        for j in range(1, top + 1)
        if i + j <= top
    }


def build_null_filiform(n: int) -> StructureAlgebra:
    """``e_i o e_j = C(i+j-1, j) e_{i+j}`` for ``i + j <= n``."""
    if n < 1:
        raise ParameterDomainError("null-filiform algebra needs n >= 1")
    return StructureAlgebra.from_products(n, _binomial_core(n, n), f"NF@n={n}")


def _require_type1_dim(n: int):
    if n < MIN_TYPE1_DIM:
        raise ParameterDomainError(f"type I algebras are built for n >= {MIN_TYPE1_DIM}, got n={n}")


def _type1_base(n: int) -> dict:
    prods = _binomial_core(n, n - 3)
    prods[(1, n - 2)] = {n - 1: Fraction(1)}
    return prods


def build_case1_family(n: int, a) -> StructureAlgebra:
    """Family with ``e_{n-2}, e_n`` both in the first layer.

    ``a = (a1, ..., a6)`` are the coefficients of ``e_{n-1}`` in
    ``e_{n-2}e_1, e_{n-2}e_{n-2}, e_{n-2}e_n, e_ne_1, e_ne_{n-2}, e_ne_n``.
    """
    _require_type1_dim(n)
    a = tuple(scalar(x) for x in a)
    if len(a) != 6:
        raise ParameterDomainError("the case I family takes six parameters")
    m, last = n - 2, n
    prods = _type1_base(n)
    slots = [(m, 1), (m, m), (m, last), (last, 1), (last, m), (last, last)]
    for key, value in zip(slots, a):
        prods[key] = {n - 1: value}
    label = "Z(" + ",".join(format_scalar(x) for x in a) + f")@n={n}"
    return StructureAlgebra.from_products(n, prods, label)


def build_case5_family(n: int, beta1, beta2, gamma1, gamma2) -> StructureAlgebra:
    """Family with ``e_{n-2}`` in the first layer and ``e_n`` in the second."""
    _require_type1_dim(n)
    beta1, beta2, gamma1, gamma2 = map(scalar, (beta1, beta2, gamma1, gamma2))
    if not gamma1 and not gamma2:
        raise ParameterDomainError("case V family requires (gamma1, gamma2) != (0, 0)")
    m = n - 2
    prods = _type1_base(n)
    prods[(m, 1)] = {n - 1: beta1, n: gamma1}
    prods[(m, m)] = {n - 1: beta2, n: gamma2}
    label = "Z(" + ",".join(format_scalar(x) for x in (beta1, beta2, gamma1, gamma2)) + f")@n={n}"
    return StructureAlgebra.from_products(n, prods, label)


def build_z21(n: int) -> StructureAlgebra:
    _require_type1_dim(n)
    m = n - 2
    prods = _type1_base(n)
    prods[(m, 1)] = {n - 1: Fraction(-1)}
    prods[(m, n - 1)] = {n: Fraction(1)}
    return StructureAlgebra.from_products(n, prods, f"Z_21@n={n}")


# --- manifest --------------------------------------------------------------


def _nonzero(name):
    def check(p):
        if not p[name]:
            raise ParameterDomainError(f"{name} must be nonzero")

    return check


def _alpha_domain(p):
    if p["alpha"] in (0, 1):
        raise ParameterDomainError("alpha must avoid 0 and 1")


def _lambda_one_flag(p):
    if p["lambda"] == 1:
        warnings.warn(
            "Z_14 with lambda=1: the representative list allows it but the derivation "
            "of this case excludes lambda=1",
            ProvenanceWarning,
            stacklevel=4,
        )


def _case5_domain(p):
    if not p["gamma1"] and not p["gamma2"]:
        raise ParameterDomainError("(gamma1, gamma2) must not both vanish")


@dataclass(frozen=True)
class EntrySpec:
    """Static description of one catalog entry."""

    name: str
    kind: str  # "family" or "representative"
    params: tuple[str, ...]
    source: str
    domain: str = "all rationals"
    sample: Mapping = field(default_factory=dict)
    min_dim: int = MIN_TYPE1_DIM
    case: str = ""
    case1_tuple: Callable | None = None
    check: Callable | None = None

    def describe(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "case": self.case,
            "params": list(self.params),
            "domain": self.domain,
            "min_dim": self.min_dim,
            "sample": {k: format_scalar(v) for k, v in self.sample.items()},
            "source": self.source,
        }


def _rep(name, tup, params=(), sample=None, domain="fixed", check=None):
    return EntrySpec(
        name=name,
        kind="representative",
        params=params,
        source=f"Case I classification list, {name}",
        domain=domain,
        sample=sample or {},
        case="I",
        case1_tuple=tup,
        check=check,
    )


def _const(*t):
    return lambda p: t


_Z1_TO_Z16 = [
    _rep("Z1", _const(1, 0, 0, 0, 1, 0)),
    _rep("Z2", _const(0, 0, 0, 0, 1, 0)),
    _rep("Z3", _const(0, 1, 0, 1, 0, 0)),
    _rep("Z4", _const(0, 0, 0, 1, 0, 0)),
    _rep("Z5", _const(0, 1, 0, 0, 0, 0)),
    _rep("Z6", _const(1, 1, 0, 0, 0, 0)),
    _rep("Z7", lambda p: (p["lambda"], 0, 0, 0, 0, 0), ("lambda",), {"lambda": Fraction(2)}, "lambda rational"),
    _rep(
        "Z8",
        lambda p: (0, p["lambda"], 1, 0, 0, 1),
        ("lambda",),
        {"lambda": Fraction(2)},
        "lambda != 0",
        _nonzero("lambda"),
    ),
    _rep(
        "Z9",
        lambda p: (p["alpha"], -p["alpha"] / (p["alpha"] - 1) ** 2, 1, 0, 0, 1),
        ("alpha",),
        {"alpha": Fraction(2)},
        "alpha not in {0, 1}",
        _alpha_domain,
    ),
    _rep("Z10", _const(0, 0, 1, 0, 1, 1)),
    _rep("Z11", _const(1, 0, 1, 0, 1, 1)),
    _rep("Z12", _const(0, 0, 1, 1, 0, 0)),
    _rep("Z13", _const(0, 0, 1, 0, 0, 0)),
    _rep(
        "Z14",
        lambda p: (p["lambda"], 1, 1, 0, 1, 1),
        ("lambda",),
        {"lambda": Fraction(2)},
        "lambda rational (lambda = 1 flagged)",
        _lambda_one_flag,
    ),
    _rep("Z15", _const(0, 1, 1, -1, 1, 1)),
    _rep("Z16", _const(1, 1, 1, 0, 1, 1)),
]


def _rep5(name, tup, params=(), sample=None, domain="fixed"):
    return EntrySpec(
        name=name,
        kind="representative",
        params=params,
        source=f"Case V classification list, {name}",
        domain=domain,
        sample=sample or {},
        case="V",
        case1_tuple=tup,
    )


_Z17_TO_Z20 = [
    _rep5("Z17", lambda p: (p["lambda"], 0, 0, 1), ("lambda",), {"lambda": Fraction(0)}, "lambda rational"),
    _rep5("Z18", _const(1, 0, 1, 1)),
    _rep5("Z19", _const(0, 1, 1, 0)),
    _rep5("Z20", _const(0, 0, 1, 0)),
]

MANIFEST: tuple[EntrySpec, ...] = (
    EntrySpec(
        "NF",
        "family",
        (),
        "null-filiform algebra: e_i o e_j = C(i+j-1, j) e_(i+j)",
        domain="n >= 1",
        min_dim=1,
        case="NF",
    ),
    EntrySpec(
        "ZFamilyCaseI",
        "family",
        CASE1_PARAMS,
        "Case I family Z(a1,...,a6), e_(n-2) and e_n in the first layer",
        sample={k: Fraction(v) for k, v in zip(CASE1_PARAMS, (Fraction(2, 3), -1, 5, 0, Fraction(7, 2), 1))},
        case="I",
    ),
    *_Z1_TO_Z16,
    EntrySpec(
        "ZFamilyCaseV",
        "family",
        CASE5_PARAMS,
        "Case V family Z(beta1,beta2,gamma1,gamma2), e_n in the second layer",
        domain="(gamma1, gamma2) != (0, 0)",
        sample={"beta1": Fraction(1), "beta2": Fraction(-2), "gamma1": Fraction(3), "gamma2": Fraction(1, 2)},
        case="V",
        check=_case5_domain,
    ),
    *_Z17_TO_Z20,
    EntrySpec("Z21", "representative", (), "Case VI classification, unique algebra Z_21", domain="fixed", case="VI"),
)

_BY_NAME = {e.name.lower(): e for e in MANIFEST}


def catalog_manifest() -> list[dict]:
    return [e.describe() for e in MANIFEST]


def entry_spec(name: str) -> EntrySpec:
    key = name.lower().replace("_", "")
    if key not in _BY_NAME:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(e.name for e in MANIFEST)}")
    return _BY_NAME[key]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    dim: int
    params: Mapping = field(default_factory=dict)


def _label(spec: EntrySpec, n: int, p: Mapping) -> str:
    base = spec.name.replace("Z", "Z_", 1) if spec.kind == "representative" else spec.name
    if spec.params:
        base += "(" + ",".join(format_scalar(p[k]) for k in spec.params) + ")"
    return f"{base}@n={n}"


def build_representative(entry: CatalogEntry) -> StructureAlgebra:
    """Build any manifest entry. Missing parameters fall back to the entry's
    sample values; out-of-domain values raise ParameterDomainError."""
    spec = entry_spec(entry.name)
    n = entry.dim
    if n < spec.min_dim:
        raise ParameterDomainError(f"{spec.name} needs n >= {spec.min_dim}, got n={n}")
    unknown = set(entry.params) - set(spec.params)
    if unknown:
        raise ParameterDomainError(f"{spec.name} takes no parameter(s) {', '.join(sorted(unknown))}")
    p = {k: scalar(entry.params.get(k, spec.sample.get(k, 0))) for k in spec.params}
    if spec.check:
        spec.check(p)
    if spec.name == "NF":
        return build_null_filiform(n)
    if spec.name == "ZFamilyCaseI":
        return build_case1_family(n, [p[k] for k in CASE1_PARAMS])
    if spec.name == "ZFamilyCaseV":
        return build_case5_family(n, *(p[k] for k in CASE5_PARAMS))
    if spec.name == "Z21":
        return build_z21(n)
    tup = spec.case1_tuple(p)
    if spec.case == "I":
        A = build_case1_family(n, tup)
    else:
        A = build_case5_family(n, *tup)
    return A.relabel(_label(spec, n, p))


def build(name: str, dim: int, **params) -> StructureAlgebra:
    return build_representative(CatalogEntry(name, dim, params))


def representative_names(case: str | None = None) -> list[str]:
    return [e.name for e in MANIFEST if e.kind == "representative" and (case is None or e.case == case)]


def case1_tuple(name: str, **params) -> tuple:
    """Parameter tuple (a1..a6) of a Case I representative."""
    spec = entry_spec(name)
    if spec.case != "I" or spec.case1_tuple is None:
        raise KeyError(f"{name} is not a Case I representative")
    p = {k: scalar(params.get(k, spec.sample.get(k, 0))) for k in spec.params}
    if spec.check:
        spec.check(p)
    return tuple(scalar(x) for x in spec.case1_tuple(p))
