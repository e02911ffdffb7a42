"""Exact array types and scalar functionals used by every formula here.

Partitions, Young-shaped index sets, polygonal arrays and (symplectic)
Gelfand-Tsetlin patterns, plus the functionals defined on them: type
vectors, diagonal sums/products, the array energy, the triangular and
half-triangular energies, and the geometric type.

Two scalar instantiations are supported throughout: exact rationals
(int / fractions.Fraction) for discrete identities, and floats for the
analytic formulas.  Conversion is explicit (`to_float`).  Empty sums are
0 and empty products 1 everywhere.  All types are immutable values and
all operations are pure, so everything is safe to share across threads.

Indices are 1-based, matching the row/column conventions of the lattice
models the arrays come from.
"""

from __future__ import annotations

from fractions import Fraction


# ---------------------------------------------------------------------------
# scalars


def parse_scalar(tok):
    """Parse "p/q" as an exact Fraction, an integer literal as int,
    anything else as float."""
    tok = tok.strip()
    if "/" in tok:
        num, den = tok.split("/")
        return Fraction(int(num), int(den))
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def format_scalar(x):
    """Inverse of parse_scalar: Fractions as "p/q", ints bare, floats repr."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return "%d/%d" % (x.numerator, x.denominator)
    if isinstance(x, bool):
        raise TypeError("bool is not an array scalar")
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def format_rows(rows):
    """Rows on lines, entries space-separated."""
    return "\n".join(" ".join(format_scalar(x) for x in row) for row in rows)


def parse_rows(text):
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        rows.append([parse_scalar(tok) for tok in line.split()])
    return rows


# ---------------------------------------------------------------------------
# partitions


class Partition:
    """Weakly decreasing nonnegative integer parts; trailing zeros are
    normalized away.  Iterating yields the positive parts."""

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        parts = tuple(int(p) for p in parts)
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError("parts must be weakly decreasing: %r" % (parts,))
        if parts and parts[-1] < 0:
            raise ValueError("parts must be nonnegative: %r" % (parts,))
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, name, value):
        raise AttributeError("Partition is immutable")

    @property
    def length(self):
        return len(self.parts)

    @property
    def size(self):
        return sum(self.parts)

    def part(self, i):
        """1-based part access; parts beyond the length are 0."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def padded(self, n):
        """First n parts, zero padded."""
        if n < len(self.parts):
            raise ValueError("cannot pad to fewer than %d parts" % len(self.parts))
        return self.parts + (0,) * (n - len(self.parts))

    def conjugate(self):
        if not self.parts:
            return Partition()
        return Partition(
            tuple(
                sum(1 for p in self.parts if p >= j)
                for j in range(1, self.parts[0] + 1)
            )
        )

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __eq__(self, other):
        if isinstance(other, Partition):
            return self.parts == other.parts
        return NotImplemented

    def __hash__(self):
        return hash(("Partition", self.parts))

    def __repr__(self):
        return "Partition(%r)" % (self.parts,)


def partitions_in_box(max_part, max_length):
    """All partitions with lambda_1 <= max_part and length <= max_length.
    The count is binomial(max_part + max_length, max_length)."""
    res = []

    def go(prefix):
        res.append(Partition(prefix))
        if len(prefix) == max_length:
            return
        hi = prefix[-1] if prefix else max_part
        for p in range(1, hi + 1):
            go(prefix + [p])

    go([])
    return res


# ---------------------------------------------------------------------------
# Young-shaped index sets


class YoungIndexSet:
    """Index set of a Young diagram: weakly decreasing positive row
    lengths.  Membership, border and outer predicates use 1-based (i, j)."""

    __slots__ = ("row_lengths",)

    def __init__(self, row_lengths):
        row_lengths = tuple(int(r) for r in row_lengths)
        for r in row_lengths:
            if r <= 0:
                raise ValueError("row lengths must be positive: %r" % (row_lengths,))
        for a, b in zip(row_lengths, row_lengths[1:]):
            if a < b:
                raise ValueError(
                    "row lengths must be weakly decreasing: %r" % (row_lengths,)
                )
        object.__setattr__(self, "row_lengths", row_lengths)

    def __setattr__(self, name, value):
        raise AttributeError("YoungIndexSet is immutable")

    @property
    def n_rows(self):
        return len(self.row_lengths)

    @property
    def size(self):
        return sum(self.row_lengths)

    def row_length(self, i):
        return self.row_lengths[i - 1] if 1 <= i <= len(self.row_lengths) else 0

    def col_length(self, j):
        return sum(1 for r in self.row_lengths if r >= j)

    def __contains__(self, ij):
        i, j = ij
        return 1 <= i <= len(self.row_lengths) and 1 <= j <= self.row_lengths[i - 1]

    def indices(self):
        """Row-major iteration over all (i, j)."""
        for i, r in enumerate(self.row_lengths, start=1):
            for j in range(1, r + 1):
                yield (i, j)

    def is_border(self, i, j):
        """Last index of its diagonal: (i+1, j+1) is outside."""
        if (i, j) not in self:
            raise ValueError("(%d, %d) not in shape" % (i, j))
        return (i + 1, j + 1) not in self

    def is_outer(self, i, j):
        """None of (i, j+1), (i+1, j), (i+1, j+1) is inside; removing an
        outer index leaves a valid Young shape."""
        if (i, j) not in self:
            raise ValueError("(%d, %d) not in shape" % (i, j))
        return (
            (i, j + 1) not in self
            and (i + 1, j) not in self
            and (i + 1, j + 1) not in self
        )

    def border_indices(self):
        return [(i, j) for (i, j) in self.indices() if self.is_border(i, j)]

    def outer_indices(self):
        return [(i, j) for (i, j) in self.indices() if self.is_outer(i, j)]

    def remove_outer(self, i, j):
        if not self.is_outer(i, j):
            raise ValueError("(%d, %d) is not an outer index" % (i, j))
        rows = list(self.row_lengths)
        rows[i - 1] -= 1
        if rows[i - 1] == 0:
            rows.pop(i - 1)
        return YoungIndexSet(rows)

    def transpose(self):
        if not self.row_lengths:
            raise ValueError("empty shape")
        return YoungIndexSet(
            tuple(self.col_length(j) for j in range(1, self.row_lengths[0] + 1))
        )

    def is_symmetric(self):
        return self.row_lengths == self.transpose().row_lengths

    def __eq__(self, other):
        if isinstance(other, YoungIndexSet):
            return self.row_lengths == other.row_lengths
        return NotImplemented

    def __hash__(self):
        return hash(("YoungIndexSet", self.row_lengths))

    def __repr__(self):
        return "YoungIndexSet(%r)" % (self.row_lengths,)


# ---------------------------------------------------------------------------
# polygonal arrays


class PolygonalArray:
    """A Young diagram filled with numbers.  Entries are exact rationals or
    floats; the domain of the entries is exactly the shape."""

    __slots__ = ("shape", "_rows")

    def __init__(self, rows, shape=None):
        rows = tuple(tuple(r) for r in rows)
        if shape is None:
            shape = YoungIndexSet([len(r) for r in rows])
        if tuple(len(r) for r in rows) != shape.row_lengths:
            raise ValueError("entry rows do not match shape %r" % (shape,))
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "_rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("PolygonalArray is immutable")

    @classmethod
    def from_entries(cls, shape, entries):
        """entries: mapping (i, j) -> scalar with domain exactly the shape."""
        if set(entries) != set(shape.indices()):
            raise ValueError("entry domain does not equal the shape")
        rows = [
            [entries[(i, j)] for j in range(1, shape.row_length(i) + 1)]
            for i in range(1, shape.n_rows + 1)
        ]
        return cls(rows, shape)

    @property
    def rows(self):
        return self._rows

    def entries(self):
        return {(i, j): self._rows[i - 1][j - 1] for (i, j) in self.shape.indices()}

    def __getitem__(self, ij):
        i, j = ij
        if (i, j) not in self.shape:
            raise KeyError("(%d, %d) not in shape" % (i, j))
        return self._rows[i - 1][j - 1]

    def get(self, i, j, default=0):
        """Entry at (i, j), or `default` outside the shape."""
        if (i, j) in self.shape:
            return self._rows[i - 1][j - 1]
        return default

    def with_entry(self, i, j, value):
        if (i, j) not in self.shape:
            raise KeyError("(%d, %d) not in shape" % (i, j))
        rows = [list(r) for r in self._rows]
        rows[i - 1][j - 1] = value
        return PolygonalArray(rows, self.shape)

    def map(self, fn):
        return PolygonalArray([[fn(x) for x in row] for row in self._rows], self.shape)

    def to_float(self):
        return self.map(float)

    def transpose(self):
        shape_t = self.shape.transpose()
        rows_t = [
            [self._rows[i - 1][j - 1] for i in range(1, shape_t.row_length(j) + 1)]
            for j in range(1, shape_t.n_rows + 1)
        ]
        return PolygonalArray(rows_t, shape_t)

    def is_symmetric(self):
        return self.shape.is_symmetric() and self.transpose()._rows == self._rows

    def to_text(self):
        return format_rows(self._rows)

    @classmethod
    def from_text(cls, text):
        return cls(parse_rows(text))

    def __eq__(self, other):
        if isinstance(other, PolygonalArray):
            return self.shape == other.shape and self._rows == other._rows
        return NotImplemented

    def __hash__(self):
        return hash(("PolygonalArray", self.shape.row_lengths, self._rows))

    def __repr__(self):
        return "PolygonalArray(%r)" % ([list(r) for r in self._rows],)


# ---------------------------------------------------------------------------
# Gelfand-Tsetlin patterns


def _weakly_le(a, b):
    return a <= b


class GTPattern:
    """Triangular array z_{i,1..i}, 1 <= i <= n, with interlacing rows
    z_{i+1,j+1} <= z_{i,j} <= z_{i+1,j}.  Row n (the bottom row) is the
    shape.  Entries may be integers, Fractions or floats; interlacing is
    checked with weak inequalities in all instantiations."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        for i, row in enumerate(rows, start=1):
            if len(row) != i:
                raise ValueError("row %d must have length %d" % (i, i))
        for i in range(len(rows) - 1):
            hi = rows[i]
            lo = rows[i + 1]
            for j in range(len(hi)):
                if not (_weakly_le(lo[j + 1], hi[j]) and _weakly_le(hi[j], lo[j])):
                    raise ValueError(
                        "interlacing fails between rows %d and %d" % (i + 1, i + 2)
                    )
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("GTPattern is immutable")

    @property
    def height(self):
        return len(self.rows)

    @property
    def shape(self):
        return self.rows[-1]

    def entry(self, i, j):
        return self.rows[i - 1][j - 1]

    def to_text(self):
        return format_rows(self.rows)

    @classmethod
    def from_text(cls, text):
        return cls(parse_rows(text))

    def __eq__(self, other):
        if isinstance(other, GTPattern):
            return self.rows == other.rows
        return NotImplemented

    def __hash__(self):
        return hash(("GTPattern", self.rows))

    def __repr__(self):
        return "GTPattern(%r)" % ([list(r) for r in self.rows],)


class SpGTPattern:
    """Symplectic (half-triangular) pattern of even height 2n: row i has
    ceil(i/2) entries, all nonnegative, interlacing with the wall
    convention z_{i,j} = 0 for j > ceil(i/2).  The shape is the bottom
    row (z_{2n,1}, ..., z_{2n,n})."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        if len(rows) % 2 != 0 or not rows:
            raise ValueError("height must be a positive even number")
        trimmed = []
        for i, row in enumerate(rows, start=1):
            width = (i + 1) // 2
            # explicit wall zeros beyond the nominal width are accepted
            if len(row) > width:
                if any(x != 0 for x in row[width:]):
                    raise ValueError(
                        "row %d exceeds length %d with nonzero entries" % (i, width)
                    )
                row = row[:width]
            if len(row) != width:
                raise ValueError("row %d must have length %d" % (i, width))
            for x in row:
                if x < 0:
                    raise ValueError("entries must be nonnegative")
            trimmed.append(row)
        rows = tuple(trimmed)
        for i in range(1, len(rows)):  # between rows i and i+1 (1-based)
            hi = rows[i - 1]
            lo = rows[i]

            def at(row, j):
                return row[j - 1] if j <= len(row) else 0

            for j in range(1, len(hi) + 1):
                if not (at(lo, j + 1) <= hi[j - 1] <= at(lo, j)):
                    raise ValueError(
                        "interlacing fails between rows %d and %d" % (i, i + 1)
                    )
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("SpGTPattern is immutable")

    @property
    def height(self):
        return len(self.rows)

    @property
    def half_height(self):
        return len(self.rows) // 2

    @property
    def shape(self):
        return self.rows[-1]

    def entry(self, i, j):
        """Wall convention: 0 beyond the row length."""
        row = self.rows[i - 1]
        return row[j - 1] if j <= len(row) else 0

    def to_text(self):
        return format_rows(self.rows)

    @classmethod
    def from_text(cls, text):
        return cls(parse_rows(text))

    def __eq__(self, other):
        if isinstance(other, SpGTPattern):
            return self.rows == other.rows
        return NotImplemented

    def __hash__(self):
        return hash(("SpGTPattern", self.rows))

    def __repr__(self):
        return "SpGTPattern(%r)" % ([list(r) for r in self.rows],)


# ---------------------------------------------------------------------------
# functionals


def _rows_of(z):
    if isinstance(z, (GTPattern, SpGTPattern)):
        return z.rows
    if isinstance(z, PolygonalArray):
        return z.rows
    return tuple(tuple(r) for r in z)


def type_of(p):
    """Type vector of a GT pattern: (sum of row i) - (sum of row i-1)."""
    rows = _rows_of(p)
    out = []
    prev = 0
    for row in rows:
        cur = sum(row)
        out.append(cur - prev)
        prev = cur
    return out


def sp_type_of(p):
    """Type vector of a symplectic GT pattern (length 2n); same row-sum
    differences as type_of, on the half-triangular rows."""
    rows = _rows_of(p)
    if len(rows) % 2 != 0:
        raise ValueError("symplectic pattern must have even height")
    return type_of(rows)


def diag_sum(t, k):
    """Sum over the k-th diagonal {(i, j) in shape : j - i = k}; empty sum 0."""
    total = 0
    for (i, j) in t.shape.indices():
        if j - i == k:
            total = total + t[(i, j)]
    return total


def diag_prod(t, k):
    """Product over the k-th diagonal; empty product 1."""
    total = 1
    for (i, j) in t.shape.indices():
        if j - i == k:
            total = total * t[(i, j)]
    return total


def energy(t):
    """1/t_{1,1} + sum over (i,j) of (t_{i-1,j} + t_{i,j-1}) / t_{i,j},
    entries outside the shape counting as 0.  Requires positive entries."""
    first = t[(1, 1)]
    total = _invert(first)
    for (i, j) in t.shape.indices():
        num = t.get(i - 1, j, 0) + t.get(i, j - 1, 0)
        if num != 0:
            total = total + num / _nonint(t[(i, j)])
    return total


def _invert(x):
    # keep exactness for rational inputs: 1/Fraction stays a Fraction
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


def _nonint(x):
    # Fraction-preserving division: int/int would floor under //, and
    # plain / on ints yields floats; promote ints to Fraction instead.
    if isinstance(x, int):
        return Fraction(x)
    return x


def triangle_energy(z):
    """Interlacement penalty of a triangular array:
    sum over 1 <= j <= i < n of z_{i+1,j+1}/z_{i,j} + z_{i,j}/z_{i+1,j}."""
    rows = _rows_of(z)
    total = 0
    for i in range(len(rows) - 1):
        hi = rows[i]
        lo = rows[i + 1]
        for j in range(len(hi)):
            total = total + lo[j + 1] / _nonint(hi[j]) + hi[j] / _nonint(lo[j])
    return total


def half_triangle_energy(z):
    """Interlacement penalty of a half-triangular array of even height:
    the same ratio sum with the wall convention that entries beyond a
    row's length equal 1, producing the terms 1/z_{2k-1,k}."""
    rows = _rows_of(z)
    if len(rows) % 2 != 0:
        raise ValueError("half-triangular arrays have even height")

    def at(row, j, wall):
        return row[j - 1] if j <= len(row) else wall

    total = 0
    for i in range(len(rows) - 1):
        hi = rows[i]
        lo = rows[i + 1]
        for j in range(1, len(hi) + 1):
            total = total + at(lo, j + 1, 1) / _nonint(hi[j - 1]) + hi[j - 1] / _nonint(
                at(lo, j, 1)
            )
    return total


def gtype(z):
    """Geometric type: component i is (product of row i)/(product of row i-1);
    works for triangular and half-triangular arrays alike."""
    rows = _rows_of(z)
    out = []
    prev = 1
    for row in rows:
        cur = 1
        for x in row:
            cur = cur * x
        out.append(cur / _nonint(prev))
        prev = cur
    return out
