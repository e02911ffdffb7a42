"""Three RSK engines on Young-shaped arrays.

* classical_rsk: word-insertion RSK on nonnegative-integer matrices,
  returning the pair of Gelfand-Tsetlin patterns of the insertion and
  recording tableaux, plus the glued-matrix form.
* grsk: geometric (birational) RSK on positive arrays, built from local
  moves; exact on rationals.
* rsk_pl: the piecewise-linear (max-plus) RSK on real arrays, the
  tropicalization of grsk.

Boundary conventions differ between the engines and are implemented
exactly as stated: the geometric moves take w_{0,j} = w_{i,0} = 0
except w_{1,0} + w_{0,1} = 1, while the piecewise-linear moves take
w_{0,j} = w_{i,0} = -inf except max(w_{1,0}, w_{0,1}) = 0.

Each output entry is produced by a sequence of local moves; the applied
sequence is available as a LocalMoveTrace, and the engines are inverted
by replaying the trace backwards (the b move is an involution, the a
move divides/subtracts off the corner term).
"""

from __future__ import annotations

import math
from bisect import bisect_right
from fractions import Fraction

from .arrays import GTPattern, PolygonalArray, YoungIndexSet

NEG_INF = float("-inf")


def _as_array(w):
    if isinstance(w, PolygonalArray):
        return w
    return PolygonalArray(w)


def _promote(x):
    # ints are promoted so that the birational moves stay exact
    return Fraction(x) if isinstance(x, int) else x


# ---------------------------------------------------------------------------
# classical RSK


def word_of_matrix(w):
    """Reading word: for each row i, the letter j repeated w[i][j] times."""
    word = []
    for row in w:
        for j, count in enumerate(row, start=1):
            word.extend([j] * count)
    return word


def _row_insert(rows, k):
    """Insert k into a semistandard tableau (list of weakly increasing
    rows); returns the 1-based (row, col) of the box added."""
    i = 0
    while True:
        if i == len(rows):
            rows.append([k])
            return (i + 1, 1)
        row = rows[i]
        j = bisect_right(row, k)  # first entry strictly larger than k
        if j == len(row):
            row.append(k)
            return (i + 1, j + 1)
        row[j], k = k, row[j]
        i += 1


def rsk_tableaux(w):
    """Insertion and recording tableaux of a nonnegative-integer matrix,
    as lists of rows.  Inserting the letters of row block i appends
    boxes labelled i to the recording tableau."""
    p, q = [], []
    for i, row in enumerate(w, start=1):
        for j, count in enumerate(row, start=1):
            for _ in range(count):
                r, c = _row_insert(p, j)
                if r > len(q):
                    q.append([])
                if c != len(q[r - 1]) + 1:
                    raise AssertionError("recording box not at row end")
                q[r - 1].append(i)
    return p, q


def gt_from_tableau(rows, height):
    """Pattern whose row i is the shape of the tableau restricted to
    entries <= i; height must be at least the largest entry."""
    if any(x > height for row in rows for x in row):
        raise ValueError("tableau entry exceeds height %d" % height)
    pattern = []
    for i in range(1, height + 1):
        pattern.append(
            [
                sum(1 for x in (rows[j - 1] if j <= len(rows) else ()) if x <= i)
                for j in range(1, i + 1)
            ]
        )
    return GTPattern(pattern)


def classical_rsk(w):
    """Word-insertion RSK of an m x n matrix of nonnegative integers,
    as the pair (pattern of the insertion tableau, height n;
    pattern of the recording tableau, height m)."""
    rows = [list(r) for r in w]
    if not rows or not rows[0]:
        raise ValueError("matrix must be nonempty")
    n = len(rows[0])
    m = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix rows must have equal length")
    if any((not isinstance(x, int)) or x < 0 for r in rows for x in r):
        raise ValueError("entries must be nonnegative integers")
    p, q = rsk_tableaux(rows)
    return gt_from_tableau(p, n), gt_from_tableau(q, m)


def glue_patterns(z, zp):
    """Glue the height-n and height-m patterns of an m x n RSK pair into
    one m x n matrix: z_{i,j} lands at (m-j+1, i-j+1) and z'_{i,j} at
    (i-j+1, n-j+1).  The two fillings agree on the shared antidiagonal
    (both equal the common shape there)."""
    n, m = z.height, zp.height
    cells = {}

    def put(r, c, v):
        if not (1 <= r <= m and 1 <= c <= n):
            return
        if (r, c) in cells and cells[(r, c)] != v:
            raise ValueError("patterns do not glue: mismatch at (%d,%d)" % (r, c))
        cells[(r, c)] = v

    for i in range(1, n + 1):
        for j in range(1, i + 1):
            put(m - j + 1, i - j + 1, z.entry(i, j))
    for i in range(1, m + 1):
        for j in range(1, i + 1):
            put(i - j + 1, n - j + 1, zp.entry(i, j))
    if len(cells) != m * n:
        raise ValueError("patterns do not glue: uncovered cells")
    return PolygonalArray(
        [[cells[(r, c)] for c in range(1, n + 1)] for r in range(1, m + 1)]
    )


# ---------------------------------------------------------------------------
# local moves

# b acts only at non-border indices, where both (i+1,j) and (i,j+1) lie
# in the shape, so the bare dict lookups below cannot miss.


def _geo_corner(e, i, j):
    if i == 1 and j == 1:
        return 1
    return e.get((i - 1, j), 0) + e.get((i, j - 1), 0)


def _apply_geo(e, kind, i, j):
    if kind == "a":
        e[(i, j)] = e[(i, j)] * _geo_corner(e, i, j)
    else:
        harm = 1 / (1 / e[(i + 1, j)] + 1 / e[(i, j + 1)])
        e[(i, j)] = _geo_corner(e, i, j) * harm / e[(i, j)]


def _undo_geo(e, kind, i, j):
    if kind == "a":
        e[(i, j)] = e[(i, j)] / _geo_corner(e, i, j)
    else:
        _apply_geo(e, "b", i, j)  # involution


def _pl_corner(e, i, j):
    if i == 1 and j == 1:
        return 0
    return max(e.get((i - 1, j), NEG_INF), e.get((i, j - 1), NEG_INF))


def _apply_pl(e, kind, i, j):
    if kind == "a":
        e[(i, j)] = e[(i, j)] + _pl_corner(e, i, j)
    else:
        low = min(e[(i + 1, j)], e[(i, j + 1)])
        e[(i, j)] = _pl_corner(e, i, j) + low - e[(i, j)]


def _undo_pl(e, kind, i, j):
    if kind == "a":
        e[(i, j)] = e[(i, j)] - _pl_corner(e, i, j)
    else:
        _apply_pl(e, "b", i, j)


def _logaddexp(x, y):
    if x < y:
        x, y = y, x
    if y == NEG_INF:
        return x
    return x + math.log1p(math.exp(y - x))


def _log_corner(e, i, j):
    if i == 1 and j == 1:
        return 0.0
    return _logaddexp(e.get((i - 1, j), NEG_INF), e.get((i, j - 1), NEG_INF))


def _apply_geo_log(e, kind, i, j):
    # the geometric moves on logarithms of the entries; used to evaluate
    # the conjugated map at small epsilon without overflowing exp
    if kind == "a":
        e[(i, j)] = e[(i, j)] + _log_corner(e, i, j)
    else:
        harm = -_logaddexp(-e[(i + 1, j)], -e[(i, j + 1)])
        e[(i, j)] = _log_corner(e, i, j) + harm - e[(i, j)]


_APPLY = {"geometric": _apply_geo, "pl": _apply_pl, "log": _apply_geo_log}
_UNDO = {"geometric": _undo_geo, "pl": _undo_pl}


class LocalMoveTrace:
    """Ordered record of applied local moves: pairs (kind, (i, j)) with
    kind 'a' or 'b', in application order, for one engine flavor."""

    __slots__ = ("flavor", "moves")

    def __init__(self, flavor, moves):
        if flavor not in ("geometric", "pl"):
            raise ValueError("flavor must be 'geometric' or 'pl'")
        self.flavor = flavor
        self.moves = tuple((kind, (i, j)) for kind, (i, j) in moves)

    def replay(self, w):
        """Apply the recorded moves to a fresh copy of w."""
        w = _as_array(w)
        e = {ij: _promote(x) for ij, x in w.entries().items()}
        apply_move = _APPLY[self.flavor]
        for kind, (i, j) in self.moves:
            apply_move(e, kind, i, j)
        return PolygonalArray.from_entries(w.shape, e)

    def __len__(self):
        return len(self.moves)

    def __repr__(self):
        return "LocalMoveTrace(%r, %d moves)" % (self.flavor, len(self.moves))


def _check_growth_order(shape, order):
    """order must list all indices of shape so that every prefix is a
    Young shape grown one outer index at a time."""
    order = [tuple(ij) for ij in order]
    if sorted(order) != sorted(shape.indices()):
        raise ValueError("order must enumerate the shape exactly once")
    counts = {}
    for (i, j) in order:
        if j != counts.get(i, 0) + 1:
            raise ValueError("index (%d,%d) added out of row order" % (i, j))
        if i > 1 and counts.get(i - 1, 0) < j:
            raise ValueError("index (%d,%d) breaks the staircase" % (i, j))
        counts[i] = j
    return order


def insertion_moves(shape, order=None):
    """The full move sequence of the inductive construction: for each
    inserted index (m, n), an a move there followed by b moves at its
    diagonal predecessors (all automatically non-border at that stage)."""
    if order is None:
        order = list(shape.indices())
    else:
        order = _check_growth_order(shape, order)
    moves = []
    for (i, j) in order:
        moves.append(("a", (i, j)))
        k = 1
        while i - k >= 1 and j - k >= 1:
            moves.append(("b", (i - k, j - k)))
            k += 1
    return moves


# ---------------------------------------------------------------------------
# engines


def grsk(w, order=None, with_trace=False):
    """Geometric RSK of a positive array.  Insertion order is row-major
    by default; any growth order gives the same image (the moves
    commute), which the test suite checks rather than assumes."""
    w = _as_array(w)
    if any(x <= 0 for row in w.rows for x in row):
        raise ValueError("grsk requires positive entries")
    e = {ij: _promote(x) for ij, x in w.entries().items()}
    moves = insertion_moves(w.shape, order)
    for kind, (i, j) in moves:
        _apply_geo(e, kind, i, j)
    t = PolygonalArray.from_entries(w.shape, e)
    if with_trace:
        return t, LocalMoveTrace("geometric", moves)
    return t


def grsk_inverse(t):
    """Inverse of grsk: undo the row-major move sequence in reverse."""
    t = _as_array(t)
    if any(x <= 0 for row in t.rows for x in row):
        raise ValueError("grsk images have positive entries")
    e = {ij: _promote(x) for ij, x in t.entries().items()}
    for kind, (i, j) in reversed(insertion_moves(t.shape)):
        _undo_geo(e, kind, i, j)
    return PolygonalArray.from_entries(t.shape, e)


def rsk_pl(w, order=None, with_trace=False):
    """Piecewise-linear RSK of a real array (exact on integer entries)."""
    w = _as_array(w)
    e = dict(w.entries())
    moves = insertion_moves(w.shape, order)
    for kind, (i, j) in moves:
        _apply_pl(e, kind, i, j)
    t = PolygonalArray.from_entries(w.shape, e)
    if with_trace:
        return t, LocalMoveTrace("pl", moves)
    return t


def rsk_pl_inverse(t):
    t = _as_array(t)
    e = dict(t.entries())
    for kind, (i, j) in reversed(insertion_moves(t.shape)):
        _undo_pl(e, kind, i, j)
    return PolygonalArray.from_entries(t.shape, e)


def grsk_symmetric(w):
    """grsk restricted to symmetric arrays; the image is symmetric and
    the induced map on the upper triangle preserves log volume."""
    w = _as_array(w)
    if not w.is_symmetric():
        raise ValueError("input array must be symmetric")
    t = grsk(w)
    if not t.is_symmetric():
        raise AssertionError("grsk image of a symmetric array must be symmetric")
    return t


def rsk_pl_symmetric(w):
    w = _as_array(w)
    if not w.is_symmetric():
        raise ValueError("input array must be symmetric")
    t = rsk_pl(w)
    if not t.is_symmetric():
        raise AssertionError("rsk_pl image of a symmetric array must be symmetric")
    return t


# ---------------------------------------------------------------------------
# tropicalization


def tropicalization_check(w, eps_list):
    """Deviation of the conjugated geometric map from the piecewise-linear
    one: sup-norm of eps*log(grsk(exp(w/eps))) - rsk_pl(w) for each eps.

    The conjugation is evaluated on logarithms directly (the geometric
    moves commute with log), so small eps cannot overflow exp."""
    w = _as_array(w)
    target = rsk_pl(w.to_float())
    moves = insertion_moves(w.shape)
    devs = []
    for eps in eps_list:
        eps = float(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        e = {ij: float(x) / eps for ij, x in w.entries().items()}
        for kind, (i, j) in moves:
            _apply_geo_log(e, kind, i, j)
        devs.append(
            max(abs(eps * e[ij] - target[ij]) for ij in w.shape.indices())
        )
    return devs
