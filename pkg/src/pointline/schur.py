"""Standard and symplectic Schur functions, discrete and continuous.

Discrete evaluators come in two independent routes: a sum over
(symplectic) Gelfand-Tsetlin patterns with fixed bottom row, exact on
rationals and intended as an oracle at small scale, and the Weyl
determinant ratio, which is the production route.

The determinant route is evaluated through one divided-difference core:
the ratio det(f_j(a_i)) / prod_{i<j}(a_i - a_j) equals
(-1)^{n(n-1)/2} det([a_1..a_i] f_j) for any column functions f_j, where
[a_1..a_i] denotes divided differences with the Hermite rule
[a,..,a] f = f^(r)(a)/r! on repeated nodes.  Coalescing parameters are
therefore not special: nearly equal parameters are snapped to their
group mean and the derivative rule takes over.  This confluent path is
exactly what the equal-parameter exponential models need downstream.

The continuous functions restrict the spectral parameters to reals
(all downstream formulas evaluate them on real vectors only).

Empty products are 1; an overlong partition evaluates to 0.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .arrays import Partition, partitions_in_box

__all__ = [
    "schur_gt",
    "sp_gt",
    "schur_det",
    "sp_det",
    "schur_cont",
    "sp_cont",
    "CauchyCheckResult",
    "cauchy_check",
]


# ---------------------------------------------------------------------------
# generic exact determinant


def det(matrix):
    """Determinant by Gaussian elimination with abs-max pivoting; exact
    on Fractions, standard floating behavior on floats."""
    m = [list(row) for row in matrix]
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    sign = 1
    result = 1
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(m[r][col]))
        if m[pivot][col] == 0:
            return 0 * result
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        pval = m[col][col]
        result = result * pval
        for r in range(col + 1, n):
            factor = m[r][col] / pval
            for c in range(col, n):
                m[r][c] = m[r][c] - factor * m[col][c]
    return sign * result


# ---------------------------------------------------------------------------
# divided-difference column functions


def _falling_over_factorial(m, r):
    """m(m-1)...(m-r+1)/r! for integer m of any sign, exact."""
    num = 1
    for t in range(r):
        num *= m - t
    return Fraction(num, math.factorial(r))


class _PowerColumn:
    """f(a) = a^m for integer m (Laurent allowed)."""

    def __init__(self, m):
        self.m = m

    def val(self, a):
        return a**self.m

    def dd_at(self, a, r):
        # f^(r)(a)/r!
        c = _falling_over_factorial(self.m, r)
        if isinstance(a, Fraction):
            return c * a ** (self.m - r)
        return float(c) * a ** (self.m - r)


class _PowerDiffColumn:
    """f(a) = a^m - a^(-m)."""

    def __init__(self, m):
        self.m = m

    def val(self, a):
        return a**self.m - a ** (-self.m)

    def dd_at(self, a, r):
        cp = _falling_over_factorial(self.m, r)
        cm = _falling_over_factorial(-self.m, r)
        if isinstance(a, Fraction):
            return cp * a ** (self.m - r) - cm * a ** (-self.m - r)
        return float(cp) * a ** (self.m - r) - float(cm) * a ** (-self.m - r)


class _ExpColumn:
    """f(alpha) = exp(alpha x)."""

    def __init__(self, x):
        self.x = x

    def val(self, a):
        return math.exp(a * self.x)

    def dd_at(self, a, r):
        return self.x**r / math.factorial(r) * math.exp(a * self.x)


class _ExpDiffColumn:
    """f(alpha) = exp(alpha x) - exp(-alpha x)."""

    def __init__(self, x):
        self.x = x

    def val(self, a):
        return math.exp(a * self.x) - math.exp(-a * self.x)

    def dd_at(self, a, r):
        k = math.factorial(r)
        return (
            self.x**r * math.exp(a * self.x)
            - (-self.x) ** r * math.exp(-a * self.x)
        ) / k


def _snap_nodes(a, rel_tol=1e-6):
    """Sort parameters and merge groups closer than rel_tol * scale to
    their mean; exact inputs only merge on exact ties."""
    vals = sorted(a)
    exact = all(isinstance(v, (int, Fraction)) for v in vals)
    scale = max(abs(v) for v in vals) if vals else 0
    tol = 0 if exact else rel_tol * (scale if scale else 1)
    groups = []
    for v in vals:
        if groups and abs(v - groups[-1][-1]) <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    nodes = []
    for g in groups:
        center = g[0] if exact or len(g) == 1 else sum(g) / len(g)
        nodes.extend([center] * len(g))
    return nodes


def _dd_top_edge(nodes, fn):
    """[x_1..x_i] fn for i = 1..n, with the Hermite rule on ties
    (nodes must be sorted so that equal nodes are adjacent)."""
    n = len(nodes)
    prev = [fn.val(x) for x in nodes]
    edge = [prev[0]]
    for order in range(1, n):
        cur = []
        for i in range(n - order):
            if nodes[i + order] == nodes[i]:
                cur.append(fn.dd_at(nodes[i], order))
            else:
                cur.append(
                    (prev[i + 1] - prev[i]) / (nodes[i + order] - nodes[i])
                )
        edge.append(cur[0])
        prev = cur
    return edge


def _dd_ratio(a, columns):
    """det(f_j(a_i)) / prod_{i<j}(a_i - a_j), confluent-safe."""
    nodes = _snap_nodes(a)
    n = len(nodes)
    cols = [_dd_top_edge(nodes, fn) for fn in columns]
    matrix = [[cols[j][i] for j in range(n)] for i in range(n)]
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * det(matrix), nodes


# ---------------------------------------------------------------------------
# discrete Schur functions


def _rows_above(row):
    """All integer rows interlacing below `row` (one entry shorter)."""
    ranges = [range(row[j + 1], row[j] + 1) for j in range(len(row) - 1)]
    return itertools.product(*ranges)


def _exactify(a):
    # ints would fall back to float on negative powers
    return [Fraction(v) if isinstance(v, int) else v for v in a]


def schur_gt(lam, a):
    """Sum over integer patterns with bottom row lam of the product of
    a_k^(type_k).  Oracle route; exact on rational variables."""
    lam = lam if isinstance(lam, Partition) else Partition(lam)
    n = len(a)
    if lam.length > n:
        return 0
    bottom = lam.padded(n)

    memo = {}

    def rec(row, k):
        if k == 1:
            return a[0] ** row[0]
        key = (row, k)
        if key not in memo:
            total = 0
            s_row = sum(row)
            for above in _rows_above(row):
                total = total + rec(above, k - 1) * a[k - 1] ** (
                    s_row - sum(above)
                )
            memo[key] = total
        return memo[key]

    return rec(bottom, n)


def sp_gt(lam, a):
    """Sum over symplectic patterns of height 2n with bottom row lam of
    the product of a_k^(type_{2k-1} - type_{2k})."""
    lam = lam if isinstance(lam, Partition) else Partition(lam)
    n = len(a)
    if lam.length > n:
        return 0
    if any(v == 0 for v in a):
        raise ValueError("symplectic variables must be nonzero")
    a = _exactify(a)
    bottom = lam.padded(n)

    def step_up(row, width):
        # rows interlacing `row` from above with the zero wall
        def bound_low(j):
            return row[j] if j < len(row) else 0

        ranges = [range(bound_low(j + 1), row[j] + 1) for j in range(width)]
        return itertools.product(*ranges)

    memo = {}

    def rec(k, row):
        # sum over rows 1..2k-1 of patterns whose row 2k equals `row`
        if k == 0:
            return 1
        key = (k, row)
        if key not in memo:
            total = 0
            s2k = sum(row)
            for odd_row in step_up(row, (2 * k - 1 + 1) // 2):
                s_odd = sum(odd_row)
                for even_below in step_up(odd_row, (2 * k - 2 + 1) // 2):
                    s_even = sum(even_below)
                    weight = a[k - 1] ** (2 * s_odd - s_even - s2k)
                    total = total + weight * rec(k - 1, even_below)
            memo[key] = total
        return memo[key]

    return rec(n, bottom)


def _weakly_decreasing_vector(lam, n):
    """Accept a Partition (padded) or an explicit weakly decreasing
    integer vector of length n, which may have negative entries."""
    if isinstance(lam, Partition):
        if lam.length > n:
            return None
        return list(lam.padded(n))
    vec = []
    for v in lam:
        if v != int(v):
            raise ValueError("exponent vector must be integer")
        vec.append(int(v))
    if len(vec) > n and any(v != 0 for v in vec[n:]):
        return None
    vec = vec[:n] + [0] * (n - len(vec))
    if any(x < y for x, y in zip(vec, vec[1:])):
        raise ValueError("exponent vector must be weakly decreasing")
    return vec


def schur_det(lam, a):
    """Weyl determinant form det(a_i^(lam_j + n - j)) / Vandermonde.
    Defined for any weakly decreasing integer vector (Laurent case
    included); equal variables are handled by the confluent path."""
    n = len(a)
    lam = _weakly_decreasing_vector(lam, n)
    if lam is None:
        return 0
    if any(v == 0 for v in a) and min(lam) + 1 - n < 0:
        raise ValueError("Laurent exponents need nonzero variables")
    columns = [_PowerColumn(lam[j] + n - (j + 1)) for j in range(n)]
    value, _ = _dd_ratio(_exactify(a), columns)
    return value


def sp_det(lam, a):
    """Symplectic Weyl ratio det(a_i^m_j - a_i^(-m_j)) over its
    lam = 0 specialization, m_j = lam_j + n - j + 1, in product form.
    Requires nonzero variables with a_i * a_j != 1 for all i, j
    (equal variables go through the confluent path)."""
    n = len(a)
    lam = _weakly_decreasing_vector(lam, n)
    if lam is None:
        return 0
    if any(v == 0 for v in a):
        raise ValueError("symplectic variables must be nonzero")
    a = _exactify(a)
    nodes = _snap_nodes(a)
    for i in range(n):
        for j in range(i, n):
            if nodes[i] * nodes[j] == 1:
                raise ValueError(
                    "reciprocal variable pair makes the Weyl ratio singular"
                )
    columns = [_PowerDiffColumn(lam[j] + n - (j + 1) + 1) for j in range(n)]
    value, nodes = _dd_ratio(a, columns)
    denom = 1
    for i in range(n):
        for j in range(i + 1, n):
            denom = denom * (nodes[i] * nodes[j] - 1)
    for v in nodes:
        denom = denom * (v * v - 1)
        value = value * v**n
    return value / denom


# ---------------------------------------------------------------------------
# continuous Schur functions


def _ordered_strictly(x):
    return all(a > b for a, b in zip(x, x[1:]))


def schur_cont(alpha, x):
    """det(exp(alpha_j x_i)) / prod_{i<j}(alpha_i - alpha_j) for
    strictly decreasing x; 0 on non-ordered x (degenerate region)."""
    if len(alpha) != len(x):
        raise ValueError("alpha and x must have equal length")
    x = [float(v) for v in x]
    if not _ordered_strictly(x):
        return 0.0
    columns = [_ExpColumn(xi) for xi in x]
    value, _ = _dd_ratio([float(v) for v in alpha], columns)
    return value


def sp_cont(alpha, x):
    """det(exp(alpha_j x_i) - exp(-alpha_j x_i)) divided by
    prod_{i<j}(alpha_i - alpha_j)(alpha_i + alpha_j) * prod_k 2 alpha_k,
    for strictly decreasing positive x; 0 on non-ordered x."""
    if len(alpha) != len(x):
        raise ValueError("alpha and x must have equal length")
    x = [float(v) for v in x]
    if not _ordered_strictly(x) or x[-1] <= 0:
        return 0.0
    alpha = [float(v) for v in alpha]
    if any(v == 0 for v in alpha):
        raise ValueError("spectral parameters must be nonzero")
    for i in range(len(alpha)):
        for j in range(i + 1, len(alpha)):
            if abs(alpha[i] + alpha[j]) < 1e-12 * max(abs(alpha[i]), abs(alpha[j])):
                raise ValueError("opposite spectral parameter pair is singular")
    columns = [_ExpDiffColumn(xi) for xi in x]
    value, nodes = _dd_ratio(alpha, columns)
    denom = 1.0
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            denom *= nodes[i] + nodes[j]
        denom *= 2 * nodes[i]
    return value / denom


# ---------------------------------------------------------------------------
# Cauchy identities


class CauchyCheckResult:
    """Truncated/quadrature left side, closed-form right side, their
    absolute difference, and (discrete kinds) a rigorous tail bound."""

    __slots__ = ("kind", "lhs", "rhs", "residual", "tail_bound")

    def __init__(self, kind, lhs, rhs, tail_bound=None):
        self.kind = kind
        self.lhs = lhs
        self.rhs = rhs
        self.residual = abs(lhs - rhs)
        self.tail_bound = tail_bound

    def __repr__(self):
        return "CauchyCheckResult(%s, residual=%.3e)" % (
            self.kind,
            float(self.residual),
        )


def _poly_geom_tail(degree, ratio, start):
    """Rigorous upper bound for sum_{k >= start} (k+1)^degree ratio^k."""
    ratio = float(ratio)
    if not 0 <= ratio < 1:
        return math.inf
    close = (1 + ratio) / 2
    total = 0.0
    k = start
    term = (k + 1) ** degree * ratio**k
    while True:
        q = ((k + 2) / (k + 1)) ** degree * ratio
        if q <= close:
            return total + term / (1 - q)
        total += term
        k += 1
        term = (k + 1) ** degree * ratio**k


def _require(cond, message):
    if not cond:
        raise ValueError(message)


def cauchy_check(kind, p=None, q=None, alpha=None, beta=None, truncation=40):
    """Evaluate one of the four Cauchy identities and report the
    discrepancy between the two sides.

    discrete-std: sum over partitions of schur(p) schur(q) against
      prod 1/(1 - p_i q_j); requires positive variables, p_i q_j < 1.
    discrete-sp: sum of sp(p) schur(q) against
      prod_{i<j}(1 - q_i q_j) / prod_{i,j}(1 - q_i p_j)(1 - q_i/p_j);
      requires q_i p_j < 1 and q_i / p_j < 1.
    cont-std: integral of schur_cont(-alpha) schur_cont(-beta) over
      decreasing positive vectors against prod 1/(alpha_i + beta_j).
    cont-sp: integral of sp_cont(alpha) schur_cont(-beta) against
      prod_{i<j}(beta_i + beta_j) / prod_{i,j}(beta_i^2 - alpha_j^2).

    Discrete sums are truncated at lam_1 <= truncation and come with a
    rigorous geometric tail bound; continuous kinds use adaptive
    quadrature (rank <= 2)."""
    if kind == "discrete-std":
        _require(p and q, "p and q required")
        _require(all(v > 0 for v in p + q), "variables must be positive")
        _require(
            max(p) * max(q) < 1, "need p_i q_j < 1 for absolute convergence"
        )
        ell = min(len(p), len(q))
        lhs = 0
        for lam in partitions_in_box(truncation, ell):
            lhs = lhs + schur_det(lam, p) * schur_det(lam, q)
        rhs = 1
        for pi in p:
            for qj in q:
                rhs = rhs * (1 - pi * qj)
        rhs = 1 / rhs
        degree = (
            len(p) * (len(p) - 1) // 2 + len(q) * (len(q) - 1) // 2 + (ell - 1)
        )
        tail = _poly_geom_tail(degree, max(p) * max(q), truncation + 1)
        return CauchyCheckResult(kind, lhs, rhs, tail)

    if kind == "discrete-sp":
        _require(p and q, "p (symplectic) and q (standard) required")
        _require(all(v > 0 for v in p + q), "variables must be positive")
        _require(
            all(qi * pj < 1 and qi / pj < 1 for qi in q for pj in p),
            "need q_i p_j^{+-1} < 1 for absolute convergence",
        )
        _require(len(p) == len(q), "equal ranks required")
        n = len(p)
        lhs = 0
        for lam in partitions_in_box(truncation, n):
            lhs = lhs + sp_det(lam, p) * schur_det(lam, q)
        rhs = 1
        for i in range(n):
            for j in range(i + 1, n):
                rhs = rhs * (1 - q[i] * q[j])
        for qi in q:
            for pj in p:
                rhs = rhs / ((1 - qi * pj) * (1 - qi / pj))
        degree = n * n + n * (n - 1) // 2 + (n - 1)
        ratio = max(q) * max(max(p), 1 / min(p))
        tail = _poly_geom_tail(degree, ratio, truncation + 1)
        return CauchyCheckResult(kind, lhs, rhs, tail)

    if kind == "cont-std":
        _require(alpha and beta, "alpha and beta required")
        _require(
            all(ai + bj > 0 for ai in alpha for bj in beta),
            "need alpha_i + beta_j > 0",
        )
        n = len(alpha)
        _require(len(beta) == n and n <= 2, "rank <= 2 with equal lengths")
        from scipy import integrate

        # integrand decays like exp(-(min alpha + min beta) x1)
        cutoff = 50.0 / (min(alpha) + min(beta))
        if n == 1:
            lhs, _ = integrate.quad(
                lambda t: schur_cont([-alpha[0]], [t])
                * schur_cont([-beta[0]], [t]),
                0,
                cutoff,
            )
        else:
            lhs, _ = integrate.dblquad(
                lambda x2, x1: schur_cont([-a for a in alpha], [x1, x2])
                * schur_cont([-b for b in beta], [x1, x2]),
                0,
                cutoff,
                0,
                lambda x1: x1,
            )
        rhs = 1.0
        for ai in alpha:
            for bj in beta:
                rhs /= ai + bj
        return CauchyCheckResult(kind, lhs, rhs)

    if kind == "cont-sp":
        _require(alpha and beta, "alpha and beta required")
        _require(
            all(bi + aj > 0 and bi - aj > 0 for bi in beta for aj in alpha),
            "need beta_i > |alpha_j|",
        )
        n = len(alpha)
        _require(len(beta) == n and n <= 2, "rank <= 2 with equal lengths")
        from scipy import integrate

        # net decay rate of the paired integrand
        cutoff = 50.0 / (min(beta) - max(abs(v) for v in alpha))
        if n == 1:
            lhs, _ = integrate.quad(
                lambda t: sp_cont([alpha[0]], [t]) * schur_cont([-beta[0]], [t]),
                0,
                cutoff,
            )
        else:
            lhs, _ = integrate.dblquad(
                lambda x2, x1: sp_cont(alpha, [x1, x2])
                * schur_cont([-b for b in beta], [x1, x2]),
                0,
                cutoff,
                0,
                lambda x1: x1,
            )
        rhs = 1.0
        for i in range(n):
            for j in range(i + 1, n):
                rhs *= beta[i] + beta[j]
        for bi in beta:
            for aj in alpha:
                rhs /= (bi + aj) * (bi - aj)
        return CauchyCheckResult(kind, lhs, rhs)

    raise ValueError("unknown kind %r" % (kind,))
