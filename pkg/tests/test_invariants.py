"""Invariant engines, weight systems, cup products and certificates."""

import itertools
import random
from fractions import Fraction

import pytest

from vassiliev.caps import DOUBLE_POINT_CAP, ResourceCapExceeded
from vassiliev.diagrams import enumerate_diagrams
from vassiliev.invariants import (CertificationError, ConwayPolynomial,
                                  InvariantSpec, cocycle_check, conway,
                                  conway_skein, conway_weight_system,
                                  cup_eval, cup_expansion, dot_eval,
                                  mirror_sign_check, v2, v2_arrow_count,
                                  vassiliev_eval, verify_wcup, weight_system,
                                  certify_nontrivial)
from vassiliev.knots import (SingularKnotDiagram, realize, v2_power_family,
                             yasuhara_family)

from oracles import CONWAY_TABLE, KNOT_CODES, V2_TABLE


def table_knot(name):
    code = KNOT_CODES[name]
    if code is None:
        return SingularKnotDiagram((), (), 0)
    return SingularKnotDiagram.parse(code)


def full_resolutions(knot):
    """All 2^n nonsingular diagrams obtained by resolving every double
    point, highest label first so the lower labels stay put."""
    n = knot.degree
    out = []
    for signs in itertools.product((1, -1), repeat=n):
        d = knot
        for label in range(n, 0, -1):
            d = d.resolve(label, signs[label - 1])
        out.append(d)
    return out


def generated_knots(max_crossings=10):
    """A small corpus of nonsingular diagrams: the table knots, their
    mirrors, and every full resolution of the realized chord diagrams of
    degree up to 3, kept below a crossing bound so the exponential skein
    engine stays cheap."""
    knots = []
    for name in KNOT_CODES:
        k = table_knot(name)
        knots.append(k)
        knots.append(k.mirror())
    for n in range(4):
        for d in enumerate_diagrams(n, "plain"):
            for k in full_resolutions(realize(d)):
                if k.n_classical <= max_crossings:
                    knots.append(k)
    return knots


# ------------------------------------------------------- conway, v2


def test_conway_oracle_table_both_engines():
    for name, coeffs in CONWAY_TABLE.items():
        k = table_knot(name)
        assert list(conway(k).coeffs) == coeffs, name
        assert list(conway_skein(k).coeffs) == coeffs, name


def test_conway_polynomial_accessors():
    p = conway(table_knot("torus-2-5"))
    assert p.coefficient(0) == 1
    assert p.coefficient(2) == 3
    assert p.coefficient(4) == 1
    assert p.coefficient(17) == 0
    assert "z" in repr(p)


def test_conway_normalization_on_generated_corpus():
    # constant term 1 and no odd-degree terms, whatever the diagram
    for k in generated_knots():
        p = conway(k)
        assert p.coefficient(0) == 1
        assert all(c == 0 for i, c in enumerate(p.coeffs) if i % 2 == 1)


def test_conway_engines_agree_on_generated_corpus():
    # the Wirtinger matrix engine against the skein recursion; the two
    # share no code beyond the polynomial container
    disagreements = []
    total = 0
    for k in generated_knots():
        total += 1
        if conway(k).coeffs != conway_skein(k).coeffs:
            disagreements.append(k)
    assert total > 40
    assert not disagreements


def test_conway_rejects_singular_input():
    with pytest.raises(ValueError):
        conway(realize(next(iter(enumerate_diagrams(1, "plain")))))


def test_v2_engines_agree_on_generated_corpus():
    for k in generated_knots():
        assert conway(k).coefficient(2) == v2_arrow_count(k)
        v2(k)  # raises EngineDisagreement on any mismatch


def test_v2_oracle_table():
    for name, val in V2_TABLE.items():
        assert v2(table_knot(name)) == val, name


def test_v2_is_mirror_invariant():
    tre = table_knot("trefoil")
    assert v2(tre) == v2(tre.mirror()) == 1
    fig = table_knot("figure-eight")
    assert v2(fig) == v2(fig.mirror()) == -1


# --------------------------------------------------- singular evaluation


def test_vassiliev_eval_on_nonsingular_is_plain_value():
    spec = InvariantSpec.v2_spec()
    assert vassiliev_eval(spec, table_knot("trefoil")) == 1


def test_vassiliev_eval_independent_of_expansion_order():
    # expanding the skein relation at label 1 or at label n first must
    # give the same number (the resolutions commute)
    spec = InvariantSpec.v2_spec()
    for d in enumerate_diagrams(2, "plain"):
        k = realize(d)
        top_first = (vassiliev_eval(spec, k.resolve(2, 1))
                     - vassiliev_eval(spec, k.resolve(2, -1)))
        assert vassiliev_eval(spec, k) == top_first


def test_order_vanishing():
    # an order-m invariant kills every knot with more than m double points
    spec2 = InvariantSpec.v2_spec()
    for d in enumerate_diagrams(3, "plain"):
        assert vassiliev_eval(spec2, realize(d)) == 0
    spec0 = InvariantSpec.constant(7)
    for d in enumerate_diagrams(1, "plain"):
        assert vassiliev_eval(spec0, realize(d)) == 0


def test_vassiliev_eval_respects_double_point_cap():
    n = DOUBLE_POINT_CAP + 1
    seq = list(range(n)) + list(range(n - 1, -1, -1))
    verts = [("s", 1, i + 1) for i in range(n)]
    big = SingularKnotDiagram(seq, verts, 0)
    with pytest.raises(ResourceCapExceeded):
        vassiliev_eval(InvariantSpec.v2_spec(), big)


def test_spec_algebra():
    v = InvariantSpec.v2_spec()
    assert InvariantSpec.v2_power(2).order == 4
    prod = InvariantSpec.product(v, v)
    tre = table_knot("trefoil")
    assert prod.order == 4
    assert prod.evaluate(tre) == 1
    assert InvariantSpec.constant(Fraction(3, 2)).evaluate(tre) == Fraction(3, 2)
    assert InvariantSpec.conway_coefficient(4).evaluate(
        table_knot("torus-2-5")) == 1


# -------------------------------------------------------- weight systems


def test_weight_system_degree_guard():
    with pytest.raises(ValueError):
        weight_system(InvariantSpec.v2_spec(),
                      next(iter(enumerate_diagrams(3, "plain"))))


def test_v2_weight_system_values():
    # W_2(v2) is 1 on the interleaved diagram and 0 on the nested one
    vals = {}
    for d in enumerate_diagrams(2, "plain"):
        vals[d.pairing] = weight_system(InvariantSpec.v2_spec(), d)
    assert vals[(2, 3, 0, 1)] == 1
    assert vals[(1, 0, 3, 2)] == 0


def test_conway_weight_system_degree_two():
    for d in enumerate_diagrams(2, "plain"):
        expect = 1 if d.pairing == (2, 3, 0, 1) else 0
        assert conway_weight_system(d) == expect


def test_weight_system_independent_of_representative():
    # the top-order value must not change when classical over/under flags
    # of the chosen representative are flipped
    rng = random.Random(4)
    spec = {2: InvariantSpec.v2_spec(), 3: InvariantSpec.conway_coefficient(3)}
    for m, samples in ((2, None), (3, 6)):
        for d in enumerate_diagrams(m, "plain"):
            k = realize(d)
            base = vassiliev_eval(spec[m], k)
            classical = [v for v, rec in enumerate(k.verts)
                         if rec[0] == "x"]
            if samples is None:
                flips = [[v] for v in classical]
            else:
                flips = [[v for v in classical if rng.random() < 0.5]
                         for _ in range(samples)]
            for flip in flips:
                verts = list(k.verts)
                for v in flip:
                    tag, chir, over = verts[v]
                    verts[v] = (tag, chir, 3 - over)
                other = SingularKnotDiagram(k.seq, verts, k.base)
                assert vassiliev_eval(spec[m], other) == base, (d, flip)


# ------------------------------------------------- mirrors and cocycles


def test_mirror_sign_law():
    spec = InvariantSpec.v2_spec()
    # 0 double points: v2(K*) = v2(K)
    rep = mirror_sign_check(spec, table_knot("trefoil"))
    assert rep["sign_law_ok"] and rep["chain_rule_ok"]
    # 1 double point: v2 changes sign
    one = realize(next(iter(enumerate_diagrams(1, "plain"))))
    rep = mirror_sign_check(spec, one)
    assert rep["sign_law_ok"] and rep["chain_rule_ok"]
    # 2 double points: invariant again, and nonzero on the witness
    rep = mirror_sign_check(spec, v2_power_family(1))
    assert rep["sign_law_ok"] and rep["chain_rule_ok"]
    assert rep["value"] == rep["mirror_value"] != 0


def test_cocycle_check_vanishes():
    spec = InvariantSpec.v2_spec()
    for d in enumerate_diagrams(3, "plain"):
        assert cocycle_check(spec, realize(d)) == 0
    assert cocycle_check(InvariantSpec.conway_coefficient(2),
                         v2_power_family(1)) == 0


# ------------------------------------------------------- cup products


def test_cup_six_term_signs():
    # the middle layer of the expansion on the 4-singular witness: six
    # subsets H of size 2, shuffle signs +, -, +, +, -, +
    K = v2_power_family(2)
    v = InvariantSpec.v2_spec()
    rows = [r for r in cup_expansion(v, v, K) if len(r[0]) == 2]
    assert [r[0] for r in rows] == [(1, 2), (1, 3), (1, 4),
                                    (2, 3), (2, 4), (3, 4)]
    assert [r[2] for r in rows] == [1, -1, 1, 1, -1, 1]


def test_cup_and_dot_on_witness():
    K = v2_power_family(2)
    v = InvariantSpec.v2_spec()
    assert cup_eval(v, v, K) == 2
    assert dot_eval(v, v, K) == 2
    # only the middle layer contributes: elsewhere one factor sees more
    # double points than its order
    for H, _, _, left, right in cup_expansion(v, v, K):
        if len(H) != 2:
            assert left * right == 0


def test_cup_with_constant_is_scaling():
    c = InvariantSpec.constant(Fraction(5, 3))
    v = InvariantSpec.v2_spec()
    K = v2_power_family(1)
    assert cup_eval(c, v, K) == Fraction(5, 3) * vassiliev_eval(v, K)
    assert cup_eval(v, c, K) == Fraction(5, 3) * vassiliev_eval(v, K)


def test_cup_degree_guard():
    with pytest.raises(ValueError):
        cup_eval(InvariantSpec.v2_spec(), InvariantSpec.v2_spec(),
                 v2_power_family(1))


def test_verify_wcup_degenerate_cases():
    # order 0 cup order 2: the identity reduces to W_2 itself
    rep = verify_wcup(InvariantSpec.constant(1), InvariantSpec.v2_spec())
    assert rep["ok"] and rep["p"] == 0 and rep["q"] == 2
    # order 1 factors: both sides vanish identically
    c1 = InvariantSpec.conway_coefficient(1)
    rep = verify_wcup(c1, c1)
    assert rep["ok"] and rep["checked"] > 0


# -------------------------------------------------------- certificates


def test_certify_v2_power():
    cert = certify_nontrivial("v2power", n=1)
    assert cert["nontrivial"] and cert["boundary_zero"]
    assert cert["value"] == "1/1"
    assert len(cert["pairs"]) == 2
    assert all(p["tier"] != "failed" for p in cert["pairs"])
    cert = certify_nontrivial("v2power", n=2)
    assert cert["nontrivial"] and cert["value"] == "2/1"


def test_certify_yasuhara_degree_one():
    d = next(iter(enumerate_diagrams(1, "ordered")))
    cert = certify_nontrivial("yasuhara", diagram=d)
    assert cert["nontrivial"] and cert["value"] == "1/1"
    assert cert["pattern"] == ["crossed"]
    # the witness is serializable as a knot the parser accepts
    again = SingularKnotDiagram.parse(cert["knot"])
    assert again.degree == 2


def test_certify_caps_and_argument_errors():
    with pytest.raises(ResourceCapExceeded):
        certify_nontrivial("v2power", n=DOUBLE_POINT_CAP // 2 + 1)
    with pytest.raises(ValueError):
        certify_nontrivial("v2power", n=0)
    with pytest.raises(ValueError):
        certify_nontrivial("yasuhara")
    with pytest.raises(ValueError):
        certify_nontrivial("nope")
