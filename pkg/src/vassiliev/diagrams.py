"""Chord diagrams in three shapes: circular, circular with labeled chords,
and linear (based).

A degree-n circular diagram lives on 2n points placed counterclockwise
around a circle; a chord pairs two points.  Circular diagrams are taken up
to rotation only -- reflections are never quotiented.  The labeled
("ordered") flavor attaches a bijective label 1..n to the chords, and
equality still means rotation, with labels carried along.  Linear diagrams
put the 2n points on a directed line and have no rotation at all.

Canonical form: among the 2n rotations, pick the one whose "gap word" is
lexicographically least.  The gap word lists, for each point in order, the
cyclic distance to its partner (and the chord label, in the ordered
flavor).  The degree-0 diagram (a bare circle) is a legal basis element.

Orientation classes: an ordered diagram D is identified with sign(s) times
its relabelings D^sigma.  If an odd relabeling fixes D, the class is zero.
"""

import itertools
import json

from .caps import DEGREE_CAP, ResourceCapExceeded


def _canonical_rotation(pairing, labels):
    """Best rotation of a circular diagram.

    Returns (pairing, labels, shift) for the rotation whose gap word is
    smallest.  labels may be None (plain flavor).
    """
    m = len(pairing)
    if m == 0:
        return (), None if labels is None else (), 0

    def word(shift):
        out = []
        for i in range(m):
            j = (i + shift) % m
            gap = (pairing[j] - j) % m
            out.append(gap if labels is None else (gap, labels[j]))
        return tuple(out)

    best_shift = min(range(m), key=lambda s: word(s))
    shift = best_shift
    new_pairing = tuple((pairing[(i + shift) % m] - shift) % m for i in range(m))
    new_labels = None
    if labels is not None:
        new_labels = tuple(labels[(i + shift) % m] for i in range(m))
    return new_pairing, new_labels, shift


def _check_pairing(pairing):
    m = len(pairing)
    assert m % 2 == 0, "odd number of endpoints"
    for i, j in enumerate(pairing):
        assert 0 <= j < m and j != i and pairing[j] == i, "not an involution"


class ChordDiagram:
    """Circular chord diagram, no labels, up to rotation."""

    __slots__ = ("pairing",)
    flavor = "plain"

    def __init__(self, pairing):
        pairing = tuple(pairing)
        _check_pairing(pairing)
        self.pairing, _, _ = _canonical_rotation(pairing, None)

    @property
    def degree(self):
        return len(self.pairing) // 2

    def chords(self):
        """Chords as (i, j) pairs with i < j, sorted by first endpoint."""
        return tuple(sorted((i, j) for i, j in enumerate(self.pairing) if i < j))

    def __eq__(self, other):
        return type(other) is ChordDiagram and self.pairing == other.pairing

    def __hash__(self):
        return hash((ChordDiagram, self.pairing))

    def __lt__(self, other):
        return self.pairing < other.pairing

    def __repr__(self):
        return "CD%s" % (list(self.chords()),)

    def remove_chords(self, which):
        """Delete the chords at the given positions of self.chords()."""
        ch = self.chords()
        gone = set()
        for w in which:
            gone.update(ch[w])
        keep = [p for p in range(len(self.pairing)) if p not in gone]
        newidx = {p: t for t, p in enumerate(keep)}
        return ChordDiagram(
            tuple(newidx[self.pairing[p]] for p in keep))


class OrderedChordDiagram:
    """Circular diagram with chords labeled bijectively 1..n."""

    __slots__ = ("pairing", "labels")
    flavor = "ordered"

    def __init__(self, pairing, labels):
        pairing = tuple(pairing)
        labels = tuple(labels)
        _check_pairing(pairing)
        assert len(labels) == len(pairing)
        n = len(pairing) // 2
        seen = {}
        for i, lab in enumerate(labels):
            assert labels[pairing[i]] == lab, "endpoint labels disagree"
            seen.setdefault(lab, set()).add(i)
        assert sorted(seen) == list(range(1, n + 1)), "labels must be 1..n"
        self.pairing, self.labels, _ = _canonical_rotation(pairing, labels)

    @property
    def degree(self):
        return len(self.pairing) // 2

    def chords(self):
        """(i, j, label) with i < j, sorted by first endpoint."""
        return tuple(sorted((i, j, self.labels[i])
                            for i, j in enumerate(self.pairing) if i < j))

    def chord_of_label(self, lab):
        for i, j, l in self.chords():
            if l == lab:
                return (i, j)
        raise KeyError(lab)

    def __eq__(self, other):
        return (type(other) is OrderedChordDiagram
                and self.pairing == other.pairing and self.labels == other.labels)

    def __hash__(self):
        return hash((OrderedChordDiagram, self.pairing, self.labels))

    def __lt__(self, other):
        return (self.pairing, self.labels) < (other.pairing, other.labels)

    def __repr__(self):
        return "OCD%s" % ([(i, j, l) for i, j, l in self.chords()],)

    def forget(self):
        return ChordDiagram(self.pairing)

    def relabel(self, sigma):
        """sigma maps old label -> new label (dict or 1-indexed sequence)."""
        if not isinstance(sigma, dict):
            sigma = {i + 1: s for i, s in enumerate(sigma)}
        return OrderedChordDiagram(self.pairing,
                                   tuple(sigma[l] for l in self.labels))

    def remove_chord(self, lab):
        """Delete the chord labeled lab; higher labels slide down by one."""
        i, j = self.chord_of_label(lab)
        keep = [p for p in range(len(self.pairing)) if p not in (i, j)]
        newidx = {p: t for t, p in enumerate(keep)}
        return OrderedChordDiagram(
            tuple(newidx[self.pairing[p]] for p in keep),
            tuple(self.labels[p] - (1 if self.labels[p] > lab else 0) for p in keep))

    def remove_labels(self, labs):
        d = self
        for lab in sorted(labs, reverse=True):
            d = d.remove_chord(lab)
        return d


class LinearChordDiagram:
    """Chord diagram on a directed line; nothing is quotiented.

    labels is None for the unlabeled flavor, else a per-point label tuple
    as in OrderedChordDiagram.
    """

    __slots__ = ("pairing", "labels")
    flavor = "linear"

    def __init__(self, pairing, labels=None):
        pairing = tuple(pairing)
        _check_pairing(pairing)
        if labels is not None:
            labels = tuple(labels)
            assert len(labels) == len(pairing)
            for i in range(len(pairing)):
                assert labels[pairing[i]] == labels[i]
        self.pairing = pairing
        self.labels = labels

    @property
    def degree(self):
        return len(self.pairing) // 2

    def chords(self):
        """Chords ordered by left endpoint."""
        if self.labels is None:
            return tuple(sorted((i, j) for i, j in enumerate(self.pairing) if i < j))
        return tuple(sorted((i, j, self.labels[i])
                            for i, j in enumerate(self.pairing) if i < j))

    def close_up(self):
        """Join the two ends of the line: the circular diagram."""
        if self.labels is None:
            return ChordDiagram(self.pairing)
        return OrderedChordDiagram(self.pairing, self.labels)

    def __eq__(self, other):
        return (type(other) is LinearChordDiagram
                and self.pairing == other.pairing and self.labels == other.labels)

    def __hash__(self):
        return hash((LinearChordDiagram, self.pairing, self.labels))

    def __lt__(self, other):
        mine = (self.pairing, self.labels or ())
        return mine < (other.pairing, other.labels or ())

    def __repr__(self):
        return "LCD%s" % (list(self.chords()),)


# ---------------------------------------------------------------------------
# enumeration

def _matchings(points):
    """All perfect matchings of the list of points, as pairing dicts."""
    if not points:
        yield {}
        return
    first = points[0]
    for k in range(1, len(points)):
        rest = points[1:k] + points[k + 1:]
        for sub in _matchings(rest):
            sub[first] = points[k]
            sub[points[k]] = first
            yield sub


def _pairing_tuples(n):
    for match in _matchings(list(range(2 * n))):
        yield tuple(match[i] for i in range(2 * n))


def enumerate_diagrams(n, flavor="plain"):
    """All diagrams of degree n of the given flavor, sorted canonically."""
    if n > DEGREE_CAP:
        raise ResourceCapExceeded("degree %d above cap %d" % (n, DEGREE_CAP))
    out = set()
    if flavor == "plain":
        for pairing in _pairing_tuples(n):
            out.add(ChordDiagram(pairing))
    elif flavor == "ordered":
        for pairing in _pairing_tuples(n):
            chord_starts = sorted(i for i, j in enumerate(pairing) if i < j)
            for perm in itertools.permutations(range(1, n + 1)):
                labels = [0] * (2 * n)
                for lab, i in zip(perm, chord_starts):
                    labels[i] = labels[pairing[i]] = lab
                out.add(OrderedChordDiagram(pairing, labels))
    elif flavor == "linear":
        for pairing in _pairing_tuples(n):
            out.add(LinearChordDiagram(pairing))
    elif flavor == "linear-ordered":
        for pairing in _pairing_tuples(n):
            chord_starts = sorted(i for i, j in enumerate(pairing) if i < j)
            for perm in itertools.permutations(range(1, n + 1)):
                labels = [0] * (2 * n)
                for lab, i in zip(perm, chord_starts):
                    labels[i] = labels[pairing[i]] = lab
                out.add(LinearChordDiagram(pairing, labels))
    else:
        raise ValueError("unknown flavor %r" % (flavor,))
    return sorted(out)


def has_isolated_chord(diagram):
    """True if some chord joins neighbouring points (the one-term relation
    kills such diagrams when enabled)."""
    m = len(diagram.pairing)
    for i, j in enumerate(diagram.pairing):
        if (i + 1) % m == j:
            return True
    return False


# ---------------------------------------------------------------------------
# orientation classes

class OrientationClass:
    """An ordered diagram up to even relabelings: a signed representative,
    or zero when an odd relabeling fixes the diagram."""

    __slots__ = ("rep", "sign")

    def __init__(self, rep, sign):
        self.rep = rep      # OrderedChordDiagram or None for the zero class
        self.sign = sign    # +1/-1, or 0 for the zero class

    def is_zero(self):
        return self.rep is None

    def __eq__(self, other):
        return (isinstance(other, OrientationClass)
                and self.rep == other.rep and self.sign == other.sign)

    def __hash__(self):
        return hash((OrientationClass, self.rep, self.sign))

    def __repr__(self):
        if self.is_zero():
            return "OrientationClass(0)"
        return "OrientationClass(%+d, %r)" % (self.sign, self.rep)


def perm_sign(perm):
    """Sign of a permutation given as a sequence of values."""
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


_ORIENTATION_CACHE = {}


def orientation_class(diagram):
    """Normal form of an ordered diagram modulo signed relabelings.

    Scans all n! relabelings; n is capped at DEGREE_CAP so this stays small.
    """
    cached = _ORIENTATION_CACHE.get(diagram)
    if cached is not None:
        return cached
    n = diagram.degree
    best = None
    best_sign = None
    for perm in itertools.permutations(range(1, n + 1)):
        sign = perm_sign(perm)
        image = diagram.relabel(perm)
        if image == diagram and sign < 0:
            result = OrientationClass(None, 0)
            _ORIENTATION_CACHE[diagram] = result
            return result
        if best is None or image < best:
            best, best_sign = image, sign
    result = OrientationClass(best, best_sign)
    _ORIENTATION_CACHE[diagram] = result
    return result


# ---------------------------------------------------------------------------
# product (the coproduct lives with the rest of the bialgebra structure)

def concat_product(d1, d2):
    """Concatenation product: cut each circle at its canonical point 0 and
    splice.  For ordered diagrams the second factor's labels shift up."""
    m1 = len(d1.pairing)
    pairing = tuple(d1.pairing) + tuple(p + m1 for p in d2.pairing)
    if isinstance(d1, OrderedChordDiagram) or isinstance(d2, OrderedChordDiagram):
        assert type(d1) is type(d2)
        labels = tuple(d1.labels) + tuple(l + d1.degree for l in d2.labels)
        return OrderedChordDiagram(pairing, labels)
    assert type(d1) is ChordDiagram and type(d2) is ChordDiagram
    return ChordDiagram(pairing)


# ---------------------------------------------------------------------------
# serialization

def to_json(diagram):
    doc = {"n": diagram.degree,
           "pairs": [[i, j] for i, j in enumerate(diagram.pairing) if i < j],
           "flavor": diagram.flavor}
    if getattr(diagram, "labels", None) is not None:
        doc["labels"] = [diagram.labels[i]
                         for i, j in enumerate(diagram.pairing) if i < j]
    return json.dumps(doc, sort_keys=True)


def from_json(text):
    doc = json.loads(text)
    n = doc["n"]
    pairing = [None] * (2 * n)
    for i, j in doc["pairs"]:
        pairing[i], pairing[j] = j, i
    labels = None
    if "labels" in doc:
        labels = [0] * (2 * n)
        starts = [min(i, j) for i, j in doc["pairs"]]
        for lab, (i, j) in zip(doc["labels"], doc["pairs"]):
            labels[i] = labels[j] = lab
        del starts
    flavor = doc.get("flavor", "plain")
    if flavor == "plain":
        return ChordDiagram(pairing)
    if flavor == "ordered":
        return OrderedChordDiagram(pairing, labels)
    if flavor == "linear":
        return LinearChordDiagram(pairing, labels)
    raise ValueError("unknown flavor %r" % (flavor,))
