import json
from fractions import Fraction
from itertools import product

import pytest

from zinbiel.catalog import MANIFEST, build
from zinbiel.constraints import (
    Equation,
    GradedTemplate,
    Inconsistent,
    LinearEliminator,
    Poly,
    Undetermined,
    case5_vanishing,
    generate_constraints,
    propagate,
    refute_case,
    refute_linear,
    type1_template,
    type2_equations,
    type2_template,
    type3_template,
)
from zinbiel.errors import RangeError

x, y = Poly.var("x"), Poly.var("y")


def test_poly_arithmetic():
    p = (x + Poly.const(1)) * (x - Poly.const(1))
    assert p == x * x - Poly.const(1)
    assert p.degree == 2 and not p.is_linear()
    assert p.substitute({"x": Fraction(3)}) == Poly.const(8)
    assert p.evaluate({"x": 2}) == 3
    assert str(Poly.const(3) + x.scale(-2)) == "3 - 2*x"
    assert (x.scale(Fraction(1, 2)) + Poly.const(Fraction(3, 2))).primitive() == x + Poly.const(3)


def test_eliminator_detects_contradiction():
    el = LinearEliminator()
    el.add({"x": 1, "y": 1}, -1, frozenset([0]))
    el.add({"x": 1}, 0, frozenset([1]))
    el.add({"y": 1}, 0, frozenset([2]))
    assert not el.consistent
    assert el.contradiction[1] == frozenset([0, 1, 2])


def test_abelian_template_has_no_equations():
    n = 3
    t = GradedTemplate("abelian", n, (1, 1, 1), {(i, j): {} for i, j in product(range(1, n + 1), repeat=2)})
    assert t.unknowns == []
    assert generate_constraints(t, "all").equations == ()


def test_fixed_entries_respect_layers():
    with pytest.raises(ValueError):
        GradedTemplate("bad", 2, (1, 1), {(1, 1): {2: Fraction(1)}})


def test_unknowns_follow_layer_rule():
    t = type1_template(8, 1, 1)
    layer = t.layer
    for name in t.unknowns:
        i, j, k = t.slot_of(name)
        assert layer[k - 1] == layer[i - 1] + layer[j - 1]


def test_type3_forces_e3_e1_zero():
    t = type3_template(7, 1)
    assert t.slots(3, 1) == [4]
    cs = generate_constraints(t, [(1, 2, 1), (1, 1, 2)])
    prop = propagate(cs.equations)
    assert prop.values["c(3,1,4)"] == 0


def test_every_equation_has_a_triple():
    cs = generate_constraints(type2_template(9, 1), [(1, 2, 3), (1, 1, 3)])
    assert cs.equations
    assert all(e.triple in cs.triples for e in cs.equations)


def test_type2_n9_equations():
    derived = type2_equations(9, 1)
    assert [str(d["poly"]) for d in derived] == [
        "1 + beta1 + beta2",
        "3 + 2*beta1 + beta2",
        "6 + 3*beta1 + beta2",
    ]
    assert [d["primary"] for d in derived] == [(1, 2, 3), (1, 2, 4), (1, 2, 5)]


def test_type2_refutation():
    eqs = [Equation(d["poly"], d["primary"], 0) for d in type2_equations(9, 1)]
    res = refute_linear(eqs)
    assert isinstance(res, Inconsistent)
    assert res.triples == ((1, 2, 3), (1, 2, 4), (1, 2, 5))


def test_type2_exhaustive_n9_also_inconsistent():
    res = refute_linear(generate_constraints(type2_template(9, 1), "all"))
    assert isinstance(res, Inconsistent)


def test_type3_refutation():
    res = refute_linear(generate_constraints(type3_template(7, 1), [(1, 2, 1), (1, 1, 2), (1, 1, 3)]))
    assert isinstance(res, Inconsistent)
    assert {e.component for e in res.equations} == {4, 5}


def test_solvable_toy_is_not_refuted():
    res = refute_linear([Equation(Poly.var("beta1") - Poly.const(1), (1, 1, 1), 1)])
    assert isinstance(res, Undetermined)


def test_exhaustive_limit():
    with pytest.raises(RangeError):
        generate_constraints(type1_template(10, 1, 1), "all")


def test_refute_type2_report():
    r = refute_case("typeII", 9)
    assert r["verdict"] == "Inconsistent"
    assert r["witness_triples"] == [[1, 2, 3], [1, 2, 4], [1, 2, 5]]
    assert [e["coefficients"] for e in r["equations"]] == [["1", "1"], ["2", "1"], ["3", "1"]]
    assert [e["constant"] for e in r["equations"]] == ["1", "3", "6"]
    assert all(v["verdict"] == "Inconsistent" for v in r["variants"])


def test_refute_type3_report():
    r = refute_case("III", 7)
    assert r["verdict"] == "Inconsistent"
    c = r["contradiction"]
    assert c["component"] == 5 and c["triple"] == [1, 1, 3]
    assert c["forced_values"]["c(3,1,4)"] == "0"


def test_case_ii_vanishing_and_unreachable():
    n = 8
    r = refute_case("I-II", n)
    assert r["verdict"] == "Unreachable"
    first = r["variants"][0]
    assert first["target"] == {"layer": 3, "element": "e_6"}
    for i in range(1, n - 2):
        assert f"e_{n}*e_{i}=0" in first["vanishing_products"]
        if i > 1:  # e_1 o e_n is a fixed zero of the template
            assert f"e_{i}*e_{n}=0" in first["vanishing_products"]


@pytest.mark.parametrize("case, target", [("I-III", "e_6"), ("I-IV", "e_8")])
def test_other_cases_unreachable(case, target):
    r = refute_case(case, 8)
    assert r["verdict"] == "Unreachable"
    assert {v["target"]["element"] for v in r["variants"]} == {target}


def test_case_iv_marked_reconstructed():
    assert "reconstructed" in refute_case("I-IV", 8)["note"]


@pytest.mark.parametrize("case, n", [("I-II", 6), ("I-III", 7), ("I-IV", 7), ("II", 8), ("III", 6)])
def test_ranges(case, n):
    with pytest.raises(RangeError):
        refute_case(case, n)


def test_unknown_case():
    with pytest.raises(KeyError):
        refute_case("VII", 9)


@pytest.mark.parametrize("case, n", [("II", 9), ("III", 7), ("I-II", 8), ("I-IV", 9)])
def test_reports_are_stable_json(case, n):
    a, b = refute_case(case, n), refute_case(case, n)
    assert json.dumps(a) == json.dumps(b)


@pytest.mark.parametrize("n", [8, 9, 10])
def test_case5_vanishing_set(n):
    values = case5_vanishing(n)
    for name in ("alpha1", "alpha2", "delta1", "delta2", "delta3", "delta4", "delta5", "delta6"):
        assert values[name] == 0, name
    assert values["beta1"] is None and values["gamma2"] is None


def _compatible_templates(n):
    for r1 in range(1, n - 3):
        for r2 in range(1, n - 2):
            yield type1_template(n, r1, r2)


@pytest.mark.parametrize("spec", [s for s in MANIFEST if s.case != "NF"], ids=lambda s: s.name)
def test_catalog_satisfies_compatible_templates(spec):
    n = 8
    A = build(spec.name, n)
    fitted = 0
    for t in _compatible_templates(n):
        try:
            values = t.assignment_from(A)
        except ValueError:
            continue
        fitted += 1
        for eq in generate_constraints(t, "all").equations:
            assert eq.poly.evaluate(values) == 0, (t.name, eq)
    assert fitted
