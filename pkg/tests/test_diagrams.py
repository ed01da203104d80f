"""Chord diagram types, enumeration and sign bookkeeping."""

import itertools
import random

import pytest

from vassiliev.caps import ResourceCapExceeded
from vassiliev.diagrams import (ChordDiagram, LinearChordDiagram,
                                OrderedChordDiagram, concat_product,
                                enumerate_diagrams, from_json,
                                has_isolated_chord, orientation_class,
                                perm_sign, to_json)

from oracles import (COUNT_LINEAR, COUNT_PLAIN, count_circular_diagrams,
                     count_linear_diagrams, perm_sign_oracle)


def test_enumeration_counts_frozen_and_oracle():
    for n in range(5):
        plain = enumerate_diagrams(n, "plain")
        linear = enumerate_diagrams(n, "linear")
        assert len(plain) == COUNT_PLAIN[n] == count_circular_diagrams(n)
        assert len(linear) == COUNT_LINEAR[n] == count_linear_diagrams(n)
        assert len(set(plain)) == len(plain)
        assert len(set(linear)) == len(linear)


def test_ordered_enumeration_consistent_with_plain():
    # forgetting labels maps the ordered enumeration onto the plain one
    for n in range(4):
        ordered = enumerate_diagrams(n, "ordered")
        assert len(set(ordered)) == len(ordered)
        assert set(d.forget() for d in ordered) == set(
            enumerate_diagrams(n, "plain"))


def test_rotation_invariance_of_circular_diagrams():
    rng = random.Random(3)
    for d in enumerate_diagrams(3, "plain") + enumerate_diagrams(4, "plain"):
        m = 2 * d.degree
        r = rng.randrange(m)
        rotated = ChordDiagram(tuple((d.pairing[(i + r) % m] - r) % m
                                     for i in range(m)))
        assert rotated == d
    # linear diagrams are *not* rotation invariant in general
    lin = LinearChordDiagram((2, 3, 0, 1))
    rolled = LinearChordDiagram((1, 0, 3, 2))
    assert lin != rolled


def test_perm_sign_matches_inversion_oracle():
    for n in range(1, 6):
        for perm in itertools.permutations(range(1, n + 1)):
            assert perm_sign(perm) == perm_sign_oracle(perm)


def test_ordered_diagram_label_validation():
    with pytest.raises(AssertionError):
        OrderedChordDiagram((2, 3, 0, 1), (1, 3, 1, 3))   # labels not 1..n
    with pytest.raises(AssertionError):
        OrderedChordDiagram((2, 3, 0, 1), (1, 2, 2, 1))   # endpoints disagree


def test_remove_chord_slides_labels():
    d = OrderedChordDiagram((2, 3, 0, 1), (1, 2, 1, 2))
    down = d.remove_chord(1)
    assert down.degree == 1
    assert down.labels == (1, 1)
    # removing both in either order gives the empty diagram
    assert d.remove_labels([1, 2]).degree == 0


def test_concat_product_degree_and_order():
    d1 = OrderedChordDiagram((1, 0), (1, 1))
    d2 = OrderedChordDiagram((2, 3, 0, 1), (1, 2, 1, 2))
    prod = concat_product(d1, d2)
    assert prod.degree == 3
    # the second factor's chords are relabeled by +degree(d1)
    assert sorted(set(prod.labels)) == [1, 2, 3]


def test_orientation_class_sign_under_relabeling():
    for d in enumerate_diagrams(3, "ordered")[:20]:
        base = orientation_class(d)
        for sigma in itertools.permutations((1, 2, 3)):
            image = orientation_class(d.relabel(sigma))
            if base.is_zero():
                assert image.is_zero()
            else:
                assert image.rep == base.rep
                assert image.sign == base.sign * perm_sign(sigma)


def test_isolated_chord_detection():
    isolated = ChordDiagram((1, 0, 3, 2))        # two parallel chords
    crossed = ChordDiagram((2, 3, 0, 1))
    assert has_isolated_chord(isolated)
    assert not has_isolated_chord(crossed)


def test_json_round_trip():
    for n in range(4):
        for flavor in ("plain", "ordered", "linear"):
            for d in enumerate_diagrams(n, flavor):
                assert from_json(to_json(d)) == d


def test_enumeration_respects_degree_cap():
    with pytest.raises(ResourceCapExceeded):
        enumerate_diagrams(7, "plain")
