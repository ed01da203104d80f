"""Exact sparse linear algebra over the rationals.

Everything here works with fractions.Fraction coefficients, so ranks and
quotient dimensions are exact.  The central object is RowEchelonBasis, an
incrementally maintained reduced row echelon form: rows are kept with
strictly increasing pivot columns, every pivot coefficient is 1, and pivot
columns are eliminated from all other rows.  Inserting the same vectors in
any order yields the same basis, which is what makes dimension reports
reproducible byte for byte.
"""

from fractions import Fraction


class SparseVector:
    """A sparse vector: mapping from column index to a nonzero Fraction."""

    __slots__ = ("entries",)

    def __init__(self, entries=None):
        # entries may be any iterable of (index, coefficient) pairs or a dict.
        # Zero coefficients are dropped so that "no explicit zeros" is an
        # invariant rather than a convention.
        data = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for idx, c in items:
                c = Fraction(c)
                if c:
                    data[idx] = data.get(idx, Fraction(0)) + c
                    if not data[idx]:
                        del data[idx]
        self.entries = data

    def is_zero(self):
        return not self.entries

    def pivot(self):
        """Smallest index with a nonzero coefficient, or None."""
        if not self.entries:
            return None
        return min(self.entries)

    def __getitem__(self, idx):
        return self.entries.get(idx, Fraction(0))

    def __eq__(self, other):
        return isinstance(other, SparseVector) and self.entries == other.entries

    def __hash__(self):
        return hash(frozenset(self.entries.items()))

    def scaled(self, c):
        c = Fraction(c)
        if not c:
            return SparseVector()
        return SparseVector({i: v * c for i, v in self.entries.items()})

    def plus(self, other, c=1):
        """self + c * other, as a new vector."""
        c = Fraction(c)
        data = dict(self.entries)
        for i, v in other.entries.items():
            w = data.get(i, Fraction(0)) + c * v
            if w:
                data[i] = w
            else:
                data.pop(i, None)
        out = SparseVector()
        out.entries = data
        return out

    def __repr__(self):
        terms = ", ".join("%d: %s" % (i, self.entries[i]) for i in sorted(self.entries))
        return "SparseVector({%s})" % terms


class RowEchelonBasis:
    """Incremental reduced row echelon basis for a span of sparse vectors."""

    def __init__(self):
        self.rows = {}  # pivot column -> SparseVector with that pivot, coeff 1

    @property
    def rank(self):
        return len(self.rows)

    def reduce_against(self, vec):
        """Return the residual of vec after eliminating all current pivots.

        The residual has no support on any pivot column; it is zero exactly
        when vec lies in the current span.
        """
        residual = vec
        while True:
            p = residual.pivot()
            if p is None or p not in self.rows:
                # Leading coefficient survives all pivots; remaining pivot
                # columns deeper in the vector still need clearing.
                changed = False
                for col in list(residual.entries):
                    if col in self.rows and residual.entries.get(col):
                        residual = residual.plus(self.rows[col], -residual.entries[col])
                        changed = True
                if not changed:
                    return residual
            else:
                residual = residual.plus(self.rows[p], -residual.entries[p])

    def insert(self, vec):
        """Insert vec; return True if the rank grew."""
        residual = self.reduce_against(vec)
        p = residual.pivot()
        if p is None:
            return False
        row = residual.scaled(Fraction(1, 1) / residual.entries[p])
        # Keep the basis reduced: clear the new pivot from existing rows.
        for col, existing in list(self.rows.items()):
            c = existing[p]
            if c:
                self.rows[col] = existing.plus(row, -c)
        self.rows[p] = row
        return True

    def insert_all(self, vecs):
        """Insert vectors one by one, in the given order.  Returns the rank."""
        for v in vecs:
            self.insert(v)
        return self.rank

    def contains(self, vec):
        return self.reduce_against(vec).is_zero()

    def quotient_dim(self, ambient_dim):
        assert ambient_dim >= self.rank, (ambient_dim, self.rank)
        return ambient_dim - self.rank

    def pivot_columns(self):
        return sorted(self.rows)

    def __repr__(self):
        return "RowEchelonBasis(rank=%d, pivots=%s)" % (self.rank, self.pivot_columns())
