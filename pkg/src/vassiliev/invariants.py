"""Vassiliev invariant evaluation on (singular) knot diagrams.

The two production engines for the Conway polynomial are:

  * ``conway``: the Alexander matrix of the Wirtinger presentation,
    determinant taken exactly over Z[t] (by integer evaluation and
    Lagrange interpolation), normalized to the symmetric Alexander
    polynomial with Delta(1) = 1 and converted to a polynomial in z via
    z = t^{1/2} - t^{-1/2};
  * ``conway_skein``: a direct recursion on the Conway skein relation
    over multi-component Gauss codes, descending-diagram style.

They share no code and are compared against each other in the tests;
``v2`` likewise runs two independent engines (the Conway coefficient c2
and an arrow-diagram count over the based Gauss code) and refuses to
return a value if they disagree.

``InvariantSpec`` names an invariant together with its order;
``vassiliev_eval`` extends any spec to singular knots by the full signed
resolution of all double points.  On top of that sit weight systems, the
cup and dot products on ordered singular knots, the mirror sign law, and
the cohomology nontriviality certificates.
"""

import itertools
from fractions import Fraction

from .caps import (DOUBLE_POINT_CAP, SKEIN_CROSSING_CAP, ResourceCapExceeded)
from .diagrams import enumerate_diagrams
from .formal import FormalSum
from .hopf import coproduct, rho_sign
from .knots import (SingularKnotDiagram, boundary_chain,
                    boundary_pair_certificate, canonical_form, realize,
                    v2_power_family, yasuhara_family)


class EngineDisagreement(AssertionError):
    """Two independent engines for the same invariant returned different
    values; this always signals an implementation bug."""


# ---------------------------------------------------------------- z-polys
#
# Polynomials in the Conway variable z are plain lists of ints (index =
# power of z); a few tiny helpers keep the skein recursion readable.


def _padd(p, q):
    out = [0] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    while out and out[-1] == 0:
        out.pop()
    return out


def _pneg(p):
    return [-c for c in p]


def _pshift(p):
    """Multiply by z."""
    return [0] + list(p) if p else []


class ConwayPolynomial:
    """The Conway polynomial nabla(z) with arbitrary-precision integer
    coefficients; for knots the odd coefficients vanish and c0 = 1."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = [int(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    def coefficient(self, m):
        return self.coeffs[m] if m < len(self.coeffs) else 0

    def __eq__(self, other):
        return isinstance(other, ConwayPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mag = "" if abs(c) == 1 else str(abs(c)) + "*"
                term = "%sz^%d" % (mag, i) if i > 1 else "%sz" % mag
                parts.append(("-" if c < 0 else "+") + " " + term
                             if parts else ("-" + term if c < 0 else term))
        return " ".join(parts) if parts else "0"


# --------------------------------------------- engine 1: Alexander matrix


def _det_int(rows):
    """Exact determinant of a square matrix of ints, via Fractions."""
    m = [[Fraction(x) for x in row] for row in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def _interpolate(points):
    """Lagrange interpolation through (x, y) pairs, exact Fractions;
    returns the coefficient list lowest power first."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        # numerator polynomial prod_{j != i} (x - xj), built incrementally
        num = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            num = [Fraction(0)] + num
            for k in range(len(num) - 1):
                num[k] -= num[k + 1] * xj
            denom *= xi - xj
        scale = yi / denom
        for k in range(len(num)):
            coeffs[k] += num[k] * scale
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _alexander_entries(knot):
    """Rows of the Wirtinger Alexander matrix over Z[t].

    Arcs are the over-strands between consecutive under-passages along
    the traversal; arc k terminates at the k-th under-passage.  Each
    entry is an (a, b) pair meaning a + b*t.
    """
    pos = knot.passages()
    L = len(knot.seq)
    unders = []
    for v, rec in enumerate(knot.verts):
        p1, p2 = pos[v]
        unders.append(p2 if rec[2] == 1 else p1)
    order = sorted(unders)
    c = len(order)

    def arc(p):
        # index of the arc containing position p (arcs end at their
        # under-passage, the last arc wraps around past position L-1)
        lo, hi = 0, c
        while lo < hi:
            mid = (lo + hi) // 2
            if order[mid] < p:
                lo = mid + 1
            else:
                hi = mid
        return lo % c

    rows = []
    for v, rec in enumerate(knot.verts):
        p1, p2 = pos[v]
        pu = unders[v]
        po = p1 if pu == p2 else p2
        a_in = arc(pu)
        a_out = (arc(pu) + 1) % c
        a_over = arc(po)
        row = [(0, 0)] * c
        s = knot.crossing_sign(v)
        if s == 1:
            contrib = ((a_in, (1, 0)), (a_out, (0, -1)), (a_over, (-1, 1)))
        else:
            contrib = ((a_in, (0, -1)), (a_out, (1, 0)), (a_over, (-1, 1)))
        for col, (a, b) in contrib:
            row[col] = (row[col][0] + a, row[col][1] + b)
        rows.append(row)
    return rows


def conway(knot):
    """The Conway polynomial of a nonsingular diagram, by the Alexander
    matrix of the Wirtinger presentation."""
    if knot.degree != 0:
        raise ValueError("conway needs a nonsingular diagram")
    c = knot.n_classical
    if c == 0:
        return ConwayPolynomial([1])
    rows = _alexander_entries(knot)
    # delete the last row and column; any first minor represents the
    # Alexander polynomial up to a unit +-t^k
    minor = [row[:-1] for row in rows[:-1]]
    size = len(minor)
    if size == 0:
        return ConwayPolynomial([1])
    # determinant degree is at most `size`, so size+1 sample points do
    points = []
    for t in range(2, size + 3):
        val = _det_int([[a + b * t for a, b in row] for row in minor])
        points.append((Fraction(t), val))
    poly = _interpolate(points)
    assert all(q.denominator == 1 for q in poly)
    poly = [int(q) for q in poly]
    # strip the unit t^k and fix the sign so Delta(1) = 1
    lead = next(i for i, a in enumerate(poly) if a)
    poly = poly[lead:]
    at_one = sum(poly)
    if abs(at_one) != 1:
        raise AssertionError("Alexander determinant is not a unit at t=1; "
                             "input is not a knot diagram")
    if at_one < 0:
        poly = [-a for a in poly]
    d = len(poly) - 1
    if d % 2 != 0 or any(poly[i] != poly[d - i] for i in range(d + 1)):
        raise AssertionError("normalized Alexander polynomial of a knot "
                             "must be a symmetric even-span polynomial")
    # Delta = a0 + sum a_k (t^k + t^-k); substitute u = z^2 = t - 2 + 1/t
    # using t^k + t^-k = q_k(u), q_0 = 2, q_1 = u + 2,
    # q_{k+1} = (u+2) q_k - q_{k-1}
    m = d // 2
    in_u = [poly[m]]
    qk_prev = [2]          # q_0
    qk = [2, 1]            # q_1
    for k in range(1, m + 1):
        a = poly[m + k]
        if a:
            in_u = _padd(in_u, [a * col for col in qk])
        nxt = _padd([2 * col for col in qk], _pshift(qk))
        nxt = _padd(nxt, _pneg(qk_prev))
        qk_prev, qk = qk, nxt
    coeffs = []
    for j, b in enumerate(in_u):
        coeffs.extend([0] * (2 * j - len(coeffs)))
        coeffs.append(b)
    return ConwayPolynomial(coeffs)


# ------------------------------------------- engine 2: skein recursion
#
# Works on bare multi-component Gauss codes: a tuple of components, each a
# tuple of (crossing id, "o" or "u") passages, plus a sign per crossing.
# The recursion makes the diagram descending (every crossing is first met
# on its over-strand); a descending knot code is the unknot, a descending
# code with several components is a split stack.


def _code_of(knot):
    if knot.degree != 0:
        raise ValueError("skein engine needs a nonsingular diagram")
    if knot.n_classical > SKEIN_CROSSING_CAP:
        raise ResourceCapExceeded("%d crossings exceed the skein cap %d"
                                  % (knot.n_classical, SKEIN_CROSSING_CAP))
    first_seen = set()
    comp = []
    for p, v in enumerate(knot.seq):
        over_first = knot.verts[v][2] == 1
        mine = "o" if (v not in first_seen) == over_first else "u"
        first_seen.add(v)
        comp.append((v, mine))
    signs = {v: knot.crossing_sign(v) for v in range(len(knot.verts))}
    return (tuple(comp),), signs


def _first_bad(components):
    """First crossing met on its under-strand before its over-strand,
    with the component/position coordinates of both passages."""
    seen = {}
    bad = None
    where = {}
    for ci, comp in enumerate(components):
        for pi, (cid, ou) in enumerate(comp):
            where.setdefault(cid, []).append((ci, pi, ou))
            if cid not in seen:
                seen[cid] = ou
                if ou == "u" and bad is None:
                    bad = cid
    return bad, where


def _switch(components, cid):
    return tuple(tuple((c, ("u" if ou == "o" else "o") if c == cid else ou)
                       for c, ou in comp)
                 for comp in components)


def _smooth(components, cid):
    """Oriented smoothing at cid: join in1->out2 and in2->out1."""
    locs = [(ci, pi) for ci, comp in enumerate(components)
            for pi, (c, _) in enumerate(comp) if c == cid]
    (c1, p1), (c2, p2) = locs
    out = []
    if c1 == c2:
        comp = components[c1]
        inner = comp[p1 + 1:p2]
        outer = comp[:p1] + comp[p2 + 1:]
        for ci, c in enumerate(components):
            if ci == c1:
                out.append(inner)
                out.append(outer)
            else:
                out.append(c)
    else:
        a, b = components[c1], components[c2]
        merged = a[:p1] + b[p2 + 1:] + b[:p2] + a[p1 + 1:]
        for ci, c in enumerate(components):
            if ci == c1:
                out.append(merged)
            elif ci != c2:
                out.append(c)
    return tuple(out)


def _skein(components, signs):
    bad, where = _first_bad(components)
    if bad is None:
        return [1] if len(components) == 1 else []
    s = signs[bad]
    flipped_signs = dict(signs)
    flipped_signs[bad] = -s
    switched = _skein(_switch(components, bad), flipped_signs)
    rest = {c: v for c, v in signs.items() if c != bad}
    smoothed = _skein(_smooth(components, bad), rest)
    # nabla(L+) - nabla(L-) = z nabla(L0); the bad crossing has sign s,
    # switching it gives the other vertical resolution
    if s == 1:
        return _padd(switched, _pshift(smoothed))
    return _padd(switched, _pneg(_pshift(smoothed)))


def conway_skein(knot):
    """The Conway polynomial by direct skein recursion; independent of
    the matrix engine and exponential, so capped at SKEIN_CROSSING_CAP."""
    components, signs = _code_of(knot)
    return ConwayPolynomial(_skein(components, signs))


# ----------------------------------------------------- v2, two engines


def v2_arrow_count(knot):
    """v2 as a signed count of interleaved arrow pairs in the based Gauss
    code (the two oriented patterns whose arrows cross with the base
    point between head and tail)."""
    if knot.degree != 0:
        raise ValueError("v2 needs a nonsingular diagram")
    d = knot.rotate_start(knot.base) if knot.base else knot
    if d.base is None:
        d = d.canonical()
    pos = d.passages()
    arrows = []
    for v, rec in enumerate(d.verts):
        p1, p2 = pos[v]
        over, under = (p1, p2) if rec[2] == 1 else (p2, p1)
        arrows.append((over, under, d.crossing_sign(v)))
    total = 0
    for (a1s, a1e, s1), (a2s, a2e, s2) in itertools.combinations(arrows, 2):
        if a2s > a1s and a2e < a1s and a1e > a2s:
            total += s1 * s2
        elif a1s > a2s and a1e < a2s and a2e > a1s:
            total += s1 * s2
    return total


def v2(knot):
    """The order-2 Vassiliev invariant, computed by both engines; raises
    EngineDisagreement rather than prefer one."""
    from_conway = conway(knot).coefficient(2)
    from_arrows = v2_arrow_count(knot)
    if from_conway != from_arrows:
        raise EngineDisagreement(
            "v2 engines disagree on %r: conway c2 = %d, arrow count = %d"
            % (knot, from_conway, from_arrows))
    return from_conway


# ------------------------------------------------------ invariant specs


class InvariantSpec:
    """A named knot invariant with a declared Vassiliev order.

    kinds: ("conway", m) for the z^m Conway coefficient (order m);
    ("v2",) (order 2); ("v2power", k) for v2^k (order 2k);
    ("const", c) (order 0); ("product", spec, spec, ...) (orders add).
    """

    __slots__ = ("kind", "order")

    def __init__(self, kind, order):
        self.kind = kind
        self.order = order

    @classmethod
    def conway_coefficient(cls, m):
        return cls(("conway", m), m)

    @classmethod
    def v2_spec(cls):
        return cls(("v2",), 2)

    @classmethod
    def v2_power(cls, k):
        return cls(("v2power", k), 2 * k)

    @classmethod
    def constant(cls, c):
        return cls(("const", Fraction(c)), 0)

    @classmethod
    def product(cls, *specs):
        return cls(("product",) + tuple(s.kind for s in specs),
                   sum(s.order for s in specs))

    def __eq__(self, other):
        return isinstance(other, InvariantSpec) and self.kind == other.kind

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return "InvariantSpec%r" % (self.kind,)

    def evaluate(self, knot):
        """Value on a nonsingular diagram, as an exact Fraction."""
        return _eval_kind(self.kind, knot)


def _eval_kind(kind, knot):
    tag = kind[0]
    if tag == "conway":
        return Fraction(conway(knot).coefficient(kind[1]))
    if tag == "v2":
        return Fraction(v2(knot))
    if tag == "v2power":
        return Fraction(v2(knot)) ** kind[1]
    if tag == "const":
        return kind[1]
    if tag == "product":
        val = Fraction(1)
        for sub in kind[1:]:
            val *= _eval_kind(sub, knot)
        return val
    raise ValueError("unknown invariant kind %r" % (kind,))


_EVAL_CACHE = {}


def vassiliev_eval(spec, knot):
    """Extend spec to singular knots by the skein relation: the full 2^n
    signed resolution phi(K) = sum_eps (prod eps_i) phi(K_eps)."""
    n = knot.degree
    if n > DOUBLE_POINT_CAP:
        raise ResourceCapExceeded("%d double points exceed the cap %d"
                                  % (n, DOUBLE_POINT_CAP))
    key = (spec.kind, canonical_form(knot))
    cached = _EVAL_CACHE.get(key)
    if cached is not None:
        return cached
    if n == 0:
        val = spec.evaluate(key[1])
    else:
        val = (vassiliev_eval(spec, knot.resolve(1, 1))
               - vassiliev_eval(spec, knot.resolve(1, -1)))
    _EVAL_CACHE[key] = val
    return val


# -------------------------------------------------------- weight systems


def weight_system(spec, diagram):
    """W_m(v)(D) = v(K_D) on a degree-m diagram for an order-m spec."""
    if spec.order != diagram.degree:
        raise ValueError("order %d spec on degree %d diagram"
                         % (spec.order, diagram.degree))
    return vassiliev_eval(spec, realize(diagram))


def conway_weight_system(diagram):
    """The Conway weight system W_C at the diagram's own degree."""
    return weight_system(InvariantSpec.conway_coefficient(diagram.degree),
                         diagram)


# ------------------------------------------------- cup and dot products


def _resolve_set(knot, labels, eps):
    """Resolve every double point in `labels` with sign eps; the
    surviving labels are renumbered 1..k keeping their relative order."""
    for lab in sorted(labels, reverse=True):
        knot = knot.resolve(lab, eps)
    return knot


def cup_expansion(v1, v2s, knot):
    """Per-subset terms of the cup product: a list of records
    (H, K, rho, left, right) covering every H, in subset order."""
    n = knot.degree
    if n != v1.order + v2s.order:
        raise ValueError("cup product needs degree %d, got %d"
                         % (v1.order + v2s.order, n))
    labels = range(1, n + 1)
    rows = []
    for r in range(n + 1):
        for H in itertools.combinations(labels, r):
            K = tuple(l for l in labels if l not in H)
            left = vassiliev_eval(v1, _resolve_set(knot, K, -1))
            right = vassiliev_eval(v2s, _resolve_set(knot, H, 1))
            rows.append((H, K, rho_sign(H, K), left, right))
    return rows


def cup_eval(v1, v2s, knot):
    """u cup v (K_{1..n}) = sum_H rho_(HK) u(d^-_K K) v(d^+_H K); terms
    with |H| != order(u) die because the complementary factor then sees
    too many double points."""
    return sum((rho * left * right
                for _, _, rho, left, right in cup_expansion(v1, v2s, knot)),
               Fraction(0))


def dot_eval(v1, v2s, knot):
    """Same expansion as cup_eval but without the shuffle signs."""
    return sum((left * right
                for _, _, _, left, right in cup_expansion(v1, v2s, knot)),
               Fraction(0))


def cocycle_check(spec, knot):
    """Evaluate spec on the boundary chain of a (order+1)-singular knot;
    the result must be 0 (delta phi = phi after full expansion in odd
    dimensions, where order vanishing kills it; a telescoping zero in
    even dimensions)."""
    total = Fraction(0)
    for d, c in boundary_chain(knot):
        total += c * vassiliev_eval(spec, d)
    return total


# ------------------------------------------------ structural identities


def verify_wcup(v1, v2s, max_witnesses=5):
    """Check W_{p+q}(v1 cup v2) = (-1)^{pq} (W_p(v1) (x) W_q(v2)) o
    Delta^0 on every ordered diagram of degree p+q."""
    p, q = v1.order, v2s.order
    failures = []
    checked = 0
    for d in enumerate_diagrams(p + q, "ordered"):
        lhs = cup_eval(v1, v2s, realize(d))
        rhs = Fraction(0)
        for (left, right), c in coproduct(d):
            if left.degree == p and right.degree == q:
                rhs += c * weight_system(v1, left) * weight_system(v2s, right)
        rhs *= (-1) ** (p * q)
        checked += 1
        if lhs != rhs and len(failures) < max_witnesses:
            failures.append({"diagram": repr(d), "lhs": str(lhs),
                             "rhs": str(rhs)})
    return {"p": p, "q": q, "checked": checked, "ok": not failures,
            "failures": failures}


def mirror_sign_check(spec, knot):
    """Verify v_n(K*) = (-1)^{n+m} v_n(K) on an m-singular knot, and the
    chain-level bookkeeping d_i(K*, eps) = (d_i(K, -eps))* behind it."""
    n, m = spec.order, knot.degree
    val = vassiliev_eval(spec, knot)
    mval = vassiliev_eval(spec, knot.mirror())
    chain_ok = True
    for i in range(1, m + 1):
        for eps in (1, -1):
            a = canonical_form(knot.mirror().resolve(i, eps))
            b = canonical_form(knot.resolve(i, -eps).mirror())
            if a != b:
                chain_ok = False
    expected = (-1) ** (n + m) * val
    return {"order": n, "double_points": m, "value": val,
            "mirror_value": mval, "expected_mirror": expected,
            "sign_law_ok": mval == expected, "chain_rule_ok": chain_ok}


# -------------------------------------------------------- certificates


class CertificationError(Exception):
    """The boundary chain of a witness could not be certified zero."""


def certify_nontrivial(family, n=None, diagram=None, pattern=None,
                       require=True):
    """Build a not-a-coboundary witness: a 2n-singular knot K with a
    certified boundary_chain(K) = 0 and a nonzero invariant value.

    family "v2power": K = v2_power_family(n), invariant v2^n.
    family "yasuhara": K = yasuhara_family(diagram, pattern), invariant
    the degree-2n Conway coefficient (the Conway weight system).
    """
    if family == "v2power":
        if not isinstance(n, int) or n < 1:
            raise ValueError("v2power needs a positive n")
        if 2 * n > DOUBLE_POINT_CAP:
            raise ResourceCapExceeded("v2power degree %d exceeds the "
                                      "double point cap" % (2 * n))
        knot = v2_power_family(n)
        spec = InvariantSpec.v2_power(n)
        params = {"family": "v2power", "n": n}
    elif family == "yasuhara":
        if diagram is None:
            raise ValueError("yasuhara needs a chord diagram")
        if pattern is None:
            pattern = ["crossed"] * diagram.degree
        if 2 * diagram.degree > DOUBLE_POINT_CAP:
            raise ResourceCapExceeded("perturbed degree %d exceeds the "
                                      "double point cap"
                                      % (2 * diagram.degree))
        knot = yasuhara_family(diagram, pattern)
        spec = InvariantSpec.conway_coefficient(2 * diagram.degree)
        params = {"family": "yasuhara",
                  "diagram": [(i, j, l) for i, j, l in diagram.chords()],
                  "pattern": list(pattern)}
    else:
        raise ValueError("unknown family %r" % (family,))

    pairs = boundary_pair_certificate(knot)
    value = vassiliev_eval(spec, knot)
    boundary_zero = all(rec["tier"] != "failed" for rec in pairs)
    cert = dict(params)
    cert.update({
        "knot": knot.to_gauss_code(),
        "invariant": "%r" % (spec,),
        "value": "%d/%d" % (value.numerator, value.denominator),
        "pairs": [{"pair": list(rec["pair"]), "eps": rec["eps"],
                   "tier": rec["tier"]} for rec in pairs],
        "boundary_zero": boundary_zero,
        "nontrivial": boundary_zero and value != 0,
    })
    if require and not boundary_zero:
        raise CertificationError("boundary chain not certified zero: %r"
                                 % (cert,))
    return cert
