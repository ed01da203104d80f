"""Product, coproducts, boundary and the graded sign bookkeeping on chord
diagram spaces.

Elements are FormalSums of diagrams; tensors are FormalSums keyed by pairs
of diagrams.  The labeled coproduct weights each splitting H|K by the
shuffle sign rho(H, K): the sign of the permutation sorting the
concatenated label sequence (H, K).  The boundary removes one chord at a
time with alternating signs and is a graded derivation for the
concatenation product.

check_axioms() exercises the eight structural identities on bounded
degrees and returns a report dict; the CLI serializes it.
"""

import itertools

from .diagrams import (ChordDiagram, OrderedChordDiagram, concat_product,
                       enumerate_diagrams, orientation_class, perm_sign)
from .formal import FormalSum
from .quotients import build_quotient


def rho_sign(H, K):
    """Sign of the permutation taking the concatenation (H, K) to the
    sorted sequence; H and K are disjoint label tuples."""
    seq = tuple(H) + tuple(K)
    return perm_sign(seq)


def sign_composition_holds(n):
    """The splitting signs compose: splitting 1..n into (H, K) and then
    splitting H into (H1, K1) and K into (H2, K2) matches the sign of the
    one-shot splitting (H1 H2 | K1 K2) corrected by (-1)^{|K1||H2|}."""
    labels = list(range(1, n + 1))
    for r in range(n + 1):
        for H in itertools.combinations(labels, r):
            K = tuple(l for l in labels if l not in H)
            for r1 in range(len(H) + 1):
                for H1 in itertools.combinations(H, r1):
                    K1 = tuple(l for l in H if l not in H1)
                    for r2 in range(len(K) + 1):
                        for H2 in itertools.combinations(K, r2):
                            K2 = tuple(l for l in K if l not in H2)
                            lhs = (rho_sign(H, K) * rho_sign(H1, K1)
                                   * rho_sign(H2, K2)
                                   * (-1) ** (len(K1) * len(H2)))
                            whole_H = tuple(sorted(H1 + H2))
                            whole_K = tuple(sorted(K1 + K2))
                            rhs = (rho_sign(whole_H, whole_K)
                                   * rho_sign(H1, H2) * rho_sign(K1, K2))
                            if lhs != rhs:
                                return False
    return True


# ---------------------------------------------------------------------------
# product and coproducts

def product(x, y):
    """Bilinear extension of the concatenation product."""
    out = FormalSum()
    for d1, c1 in x.terms.items():
        for d2, c2 in y.terms.items():
            out = out + FormalSum.single(concat_product(d1, d2), c1 * c2)
    return out


def diagram_product(d1, d2):
    return concat_product(d1, d2)


def coproduct_plain(d):
    """Split the chord set two ways, no signs: sum of D_K (x) D_H over all
    subsets H, where D_H deletes the chords in H."""
    assert isinstance(d, ChordDiagram)
    chords = range(d.degree)
    out = FormalSum()
    for r in range(d.degree + 1):
        for H in itertools.combinations(chords, r):
            K = tuple(i for i in chords if i not in H)
            left = d.remove_chords(K)
            right = d.remove_chords(H)
            out = out + FormalSum.single((left, right), 1)
    return out


_COPRODUCT_CACHE = {}


def coproduct(d):
    """Labeled coproduct: sum over splittings H|K of rho(H,K) D_K (x) D_H."""
    assert isinstance(d, OrderedChordDiagram)
    cached = _COPRODUCT_CACHE.get(d)
    if cached is not None:
        return cached
    labels = range(1, d.degree + 1)
    out = FormalSum()
    for r in range(d.degree + 1):
        for H in itertools.combinations(labels, r):
            K = tuple(l for l in labels if l not in H)
            left = d.remove_labels(K)    # the chords of H survive
            right = d.remove_labels(H)   # the chords of K survive
            out = out + FormalSum.single((left, right), rho_sign(H, K))
    _COPRODUCT_CACHE[d] = out
    return out


def coproduct_sum(x):
    out = FormalSum()
    for d, c in x.terms.items():
        out = out + coproduct(d).scaled(c)
    return out


def graded_flip(t):
    """T(a (x) b) = (-1)^{|a||b|} b (x) a, extended linearly."""
    out = FormalSum()
    for (a, b), c in t.terms.items():
        out = out + FormalSum.single((b, a), c * (-1) ** (a.degree * b.degree))
    return out


def tensor_product(t1, t2):
    """(a1 (x) a2) (cup) (b1 (x) b2) = (-1)^{|a2||b1|} a1 b1 (x) a2 b2."""
    out = FormalSum()
    for (a1, a2), c1 in t1.terms.items():
        for (b1, b2), c2 in t2.terms.items():
            sign = (-1) ** (a2.degree * b1.degree)
            key = (concat_product(a1, b1), concat_product(a2, b2))
            out = out + FormalSum.single(key, c1 * c2 * sign)
    return out


# ---------------------------------------------------------------------------
# boundary

def boundary(d):
    """d(D) = sum_i (-1)^{i+1} (D with chord i removed, labels renumbered)."""
    assert isinstance(d, OrderedChordDiagram)
    out = FormalSum()
    for i in range(1, d.degree + 1):
        out = out + FormalSum.single(d.remove_chord(i), (-1) ** (i + 1))
    return out


def boundary_sum(x):
    out = FormalSum()
    for d, c in x.terms.items():
        out = out + boundary(d).scaled(c)
    return out


# ---------------------------------------------------------------------------
# orientation normal forms

def omega_normal(x):
    """Project a sum of ordered diagrams to orientation-class normal form."""
    out = FormalSum()
    for d, c in x.terms.items():
        oc = orientation_class(d)
        if oc.is_zero():
            continue
        out = out + FormalSum.single(oc.rep, c * oc.sign)
    return out


def omega_normal_tensor(t):
    out = FormalSum()
    for (a, b), c in t.terms.items():
        oa, ob = orientation_class(a), orientation_class(b)
        if oa.is_zero() or ob.is_zero():
            continue
        out = out + FormalSum.single((oa.rep, ob.rep), c * oa.sign * ob.sign)
    return out


# ---------------------------------------------------------------------------
# axiom suite

def check_axioms(max_degree=4, product_degree=2, verbose=False):
    """Run the eight structural identities on all labeled diagrams of
    degree <= max_degree (products pair degrees summing to <= max_degree,
    with each factor <= product_degree).  Returns {name: bool} plus totals.
    """
    report = {}

    diagrams_by_degree = {n: enumerate_diagrams(n, "ordered")
                          for n in range(max_degree + 1)}

    # (i) the boundary squares to zero
    ok = True
    for n in range(max_degree + 1):
        for d in diagrams_by_degree[n]:
            if not boundary_sum(boundary(d)).is_zero():
                ok = False
    report["boundary_squares_to_zero"] = ok

    # (ii) the boundary kills every labeled four-term relation modulo the
    # four-term relations one degree down, so it descends to the quotient
    from .quotients import generate_four_term
    ok = True
    for n in range(2, max_degree + 1):
        lower = build_quotient(n - 1, "A0")
        for rel in generate_four_term(n, "ordered").as_sums():
            if not lower.is_zero(boundary_sum(rel)):
                ok = False
    report["boundary_kills_four_term"] = ok

    # (iii) the boundary is a derivation for the product
    ok = True
    for p in range(product_degree + 1):
        for q in range(product_degree + 1):
            if p + q > max_degree:
                continue
            for d1 in diagrams_by_degree[p]:
                for d2 in diagrams_by_degree[q]:
                    lhs = boundary(concat_product(d1, d2))
                    rhs = (product(boundary(d1), FormalSum.single(d2))
                           + product(FormalSum.single(d1), boundary(d2))
                           .scaled((-1) ** p))
                    if lhs != rhs:
                        ok = False
    report["boundary_is_derivation"] = ok

    # (iv) cocommutativity: the graded flip fixes the labeled coproduct
    ok = True
    for n in range(max_degree + 1):
        for d in diagrams_by_degree[n]:
            cp = coproduct(d)
            if graded_flip(cp) != cp:
                ok = False
    report["coproduct_cocommutative"] = ok

    # (v) coassociativity of the labeled coproduct
    ok = True
    for n in range(max_degree + 1):
        for d in diagrams_by_degree[n]:
            left = FormalSum()
            right = FormalSum()
            for (a, b), c in coproduct(d).terms.items():
                for (a1, a2), c2 in coproduct(a).terms.items():
                    left = left + FormalSum.single((a1, a2, b), c * c2)
                for (b1, b2), c2 in coproduct(b).terms.items():
                    right = right + FormalSum.single((a, b1, b2), c * c2)
            if left != right:
                ok = False
    report["coproduct_coassociative"] = ok

    # (vi) multiplicativity: coproduct of a product is the product of
    # coproducts with the graded tensor sign
    ok = True
    for p in range(product_degree + 1):
        for q in range(product_degree + 1):
            if p + q > max_degree:
                continue
            for d1 in diagrams_by_degree[p]:
                for d2 in diagrams_by_degree[q]:
                    lhs = coproduct(concat_product(d1, d2))
                    rhs = tensor_product(coproduct(d1), coproduct(d2))
                    if lhs != rhs:
                        ok = False
    report["coproduct_multiplicative"] = ok

    # (vii) relabeling acts on the coproduct by the sign of the permutation,
    # up to orientation classes
    ok = True
    for n in range(1, max_degree + 1):
        for d in diagrams_by_degree[n]:
            for sigma in itertools.permutations(range(1, n + 1)):
                s = perm_sign(sigma)
                lhs = omega_normal_tensor(coproduct(d.relabel(sigma)))
                rhs = omega_normal_tensor(coproduct(d).scaled(s))
                if lhs != rhs:
                    ok = False
    report["coproduct_relabeling_sign"] = ok

    # (viii) graded commutativity of the product in the oriented quotient
    ok = True
    for p in range(1, product_degree + 1):
        for q in range(1, product_degree + 1):
            if p + q > max_degree:
                continue
            quotient = build_quotient(p + q, "Aw")
            for d1 in diagrams_by_degree[p]:
                for d2 in diagrams_by_degree[q]:
                    diff = (FormalSum.single(concat_product(d1, d2))
                            - FormalSum.single(concat_product(d2, d1))
                            .scaled((-1) ** (p * q)))
                    if not quotient.is_zero(diff):
                        ok = False
    report["product_graded_commutative_oriented"] = ok

    report["sign_composition"] = all(sign_composition_holds(n)
                                     for n in range(min(max_degree, 4) + 1))
    report["all_passed"] = all(v for k, v in report.items())
    return report
