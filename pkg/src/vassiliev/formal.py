"""Formal rational linear combinations of hashable basis elements.

FormalSum is the workhorse for everything downstream: chord diagram sums,
tensors, knot chains.  Keys can be any hashable objects; coefficients are
Fractions and zero coefficients are never stored.
"""

from fractions import Fraction


class FormalSum:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        data = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for key, c in items:
                c = Fraction(c)
                if not c:
                    continue
                c = data.get(key, Fraction(0)) + c
                if c:
                    data[key] = c
                else:
                    del data[key]
        self.terms = data

    @classmethod
    def single(cls, key, coeff=1):
        return cls([(key, coeff)])

    @classmethod
    def zero(cls):
        return cls()

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        # deterministic order: sorted by repr of the key, which all our
        # basis objects make canonical
        return iter(sorted(self.terms.items(), key=lambda kv: repr(kv[0])))

    def __getitem__(self, key):
        return self.terms.get(key, Fraction(0))

    def __eq__(self, other):
        return isinstance(other, FormalSum) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        data = dict(self.terms)
        for k, v in other.terms.items():
            w = data.get(k, Fraction(0)) + v
            if w:
                data[k] = w
            else:
                del data[k]
        out = FormalSum()
        out.terms = data
        return out

    def __sub__(self, other):
        return self + other.scaled(-1)

    def __neg__(self):
        return self.scaled(-1)

    def scaled(self, c):
        c = Fraction(c)
        if not c:
            return FormalSum()
        out = FormalSum()
        out.terms = {k: v * c for k, v in self.terms.items()}
        return out

    def map_keys(self, fn):
        """Apply fn to every key; fn returns a key, or a FormalSum to expand
        a basis element into a combination (or None to kill the term)."""
        total = FormalSum()
        for k, v in self.terms.items():
            image = fn(k)
            if image is None:
                continue
            if isinstance(image, FormalSum):
                total = total + image.scaled(v)
            else:
                total = total + FormalSum.single(image, v)
        return total

    def support(self):
        return set(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for k, v in self:
            bits.append("%s*%r" % (v, k))
        return " + ".join(bits)
