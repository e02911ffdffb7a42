"""Whittaker functions of type gl_n (n <= 3) and so_{2n+1} (n <= 2).

Each function is defined by a recursive kernel integral over triangular
(respectively half-triangular) arrays with positive entries.  Unfolding
the recursion gives a single multi-axis integral whose integrand is a
product of per-axis power factors and pairwise exponential couplings
exp(-a/b); we evaluate it by putting a logarithmic Gauss-Legendre grid
on every axis (windows from the joint log-density peak, see
quadrature.py) and contracting the coupling matrices with numpy.  Every
public evaluation runs twice, the second time on a refined grid, and
raises QuadratureError if the two passes disagree beyond the configured
tolerance.

The rank caps are hard errors: one level deeper the axis count (and the
cost of honest windows) grows quadratically, and nothing downstream
needs it.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .quadrature import LogIntegrand, QuadratureConfig, self_checked

__all__ = [
    "WhittakerSpec",
    "gl_whittaker",
    "so_whittaker",
    "macdonald_k",
    "bump_stade_check",
    "ishii_stade_check",
    "sklyanin_density",
]

_DEFAULT = QuadratureConfig()


@dataclasses.dataclass(frozen=True)
class WhittakerSpec:
    """Which Whittaker function: algebra family, rank, spectral vector."""

    algebra: str
    rank: int
    alpha: tuple

    def __post_init__(self):
        if self.algebra not in ("gl", "so_odd"):
            raise ValueError("algebra must be 'gl' or 'so_odd'")
        cap = 3 if self.algebra == "gl" else 2
        if not 1 <= self.rank <= cap:
            raise ValueError(
                "rank %d outside quadrature range 1..%d for %s"
                % (self.rank, cap, self.algebra)
            )
        if len(self.alpha) != self.rank:
            raise ValueError("alpha must have length equal to the rank")
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))

    def evaluate(self, x, config=None):
        if self.algebra == "gl":
            return gl_whittaker(self.alpha, x, config)
        return so_whittaker(self.alpha, x, config)


def _check_arg(alpha, x, cap, name):
    if len(alpha) != len(x):
        raise ValueError("alpha and x must have equal length")
    if not 1 <= len(x) <= cap:
        raise ValueError("%s rank %d unsupported (max %d)" % (name, len(x), cap))
    if any(v <= 0 for v in x):
        raise ValueError("argument entries must be positive")
    return [float(a) for a in alpha], [float(v) for v in x]


# ---------------------------------------------------------------------------
# gl_n


def _gl2_value(a1, a2, x1, x2, config):
    grid = LogIntegrand(
        [a1 - a2], [(x2, (-1,)), (1.0 / x1, (1,))]
    ).grids(config)
    z, wz = grid[0]
    vals = wz * z ** (a1 - a2) * np.exp(-x2 / z - z / x1)
    return (x1 * x2) ** a2 * float(vals.sum())


def _gl3_value(a, x, config):
    a1, a2, a3 = a
    x1, x2, x3 = x
    # axes: u1, u2, z (z is the inner rank-two integration variable)
    grids = LogIntegrand(
        [a2 - a3, a2 - a3, a1 - a2],
        [
            (x2, (-1, 0, 0)),
            (1.0 / x1, (1, 0, 0)),
            (x3, (0, -1, 0)),
            (1.0 / x2, (0, 1, 0)),
            (1.0, (0, 1, -1)),   # u2 / z
            (1.0, (-1, 0, 1)),   # z / u1
        ],
    ).grids(config)
    (u1, w1), (u2, w2), (z, wz) = grids
    f1 = w1 * u1 ** (a2 - a3) * np.exp(-x2 / u1 - u1 / x1)
    f2 = w2 * u2 ** (a2 - a3) * np.exp(-x3 / u2 - u2 / x2)
    m1 = np.exp(-np.outer(z, 1.0 / u1)) @ f1        # sum over u1
    m2 = np.exp(-np.outer(1.0 / z, u2)) @ f2        # sum over u2
    inner = float((wz * z ** (a1 - a2) * m1 * m2).sum())
    return (x1 * x2 * x3) ** a3 * inner


def gl_whittaker(alpha, x, config=None):
    """Quadrature value of the rank <= 3 gl-type Whittaker function."""
    config = config or _DEFAULT
    alpha, x = _check_arg(alpha, x, 3, "gl")
    n = len(x)
    if n == 1:
        return x[0] ** alpha[0]
    if n == 2:
        return self_checked(
            lambda c: _gl2_value(alpha[0], alpha[1], x[0], x[1], c), config
        )
    return self_checked(lambda c: _gl3_value(alpha, x, c), config)


# ---------------------------------------------------------------------------
# so_{2n+1}


def _so3_value(a, x, config):
    grid = LogIntegrand([2 * a], [(1.0, (-1,)), (1.0 / x, (1,))]).grids(config)
    z, wz = grid[0]
    vals = wz * z ** (2 * a) * np.exp(-1.0 / z - z / x)
    return x ** (-a) * float(vals.sum())


def _so5_value(a, x, config):
    a1, a2 = a
    x1, x2 = x
    # axes: v1, v2, u, z; u is the rank-one argument, z its inner variable
    grids = LogIntegrand(
        [2 * a2, 2 * a2, -a1 - a2, 2 * a1],
        [
            (x2, (-1, 0, 0, 0)),
            (1.0 / x1, (1, 0, 0, 0)),
            (1.0, (0, -1, 0, 0)),     # 1 / v2
            (1.0 / x2, (0, 1, 0, 0)),
            (1.0, (0, 1, -1, 0)),     # v2 / u
            (1.0, (-1, 0, 1, 0)),     # u / v1
            (1.0, (0, 0, 0, -1)),     # 1 / z
            (1.0, (0, 0, -1, 1)),     # z / u
        ],
    ).grids(config)
    (v1, w1), (v2, w2), (u, wu), (z, wz) = grids
    fz = wz * z ** (2 * a1) * np.exp(-1.0 / z)
    f2 = w2 * v2 ** (2 * a2) * np.exp(-1.0 / v2 - v2 / x2)
    f1 = w1 * v1 ** (2 * a2) * np.exp(-x2 / v1 - v1 / x1)
    zu = np.exp(-np.outer(1.0 / u, z)) @ fz         # rank-one value factor
    v2u = np.exp(-np.outer(1.0 / u, v2)) @ f2
    v1u = np.exp(-np.outer(u, 1.0 / v1)) @ f1
    total = float((wu * u ** (-a1 - a2) * zu * v2u * v1u).sum())
    return (x1 * x2) ** (-a2) * total


def so_whittaker(alpha, x, config=None):
    """Quadrature value of the rank <= 2 odd-orthogonal Whittaker
    function."""
    config = config or _DEFAULT
    alpha, x = _check_arg(alpha, x, 2, "so_odd")
    if len(x) == 1:
        return self_checked(
            lambda c: _so3_value(alpha[0], x[0], c), config
        )
    return self_checked(lambda c: _so5_value(alpha, x, c), config)


# ---------------------------------------------------------------------------
# Macdonald function (modified Bessel of the second kind), own quadrature


def _macdonald_value(nu, x, config):
    grid = LogIntegrand(
        [nu], [(x / 2.0, (1,)), (x / 2.0, (-1,))]
    ).grids(config)
    t, wt = grid[0]
    return 0.5 * float((wt * t**nu * np.exp(-(x / 2.0) * (t + 1.0 / t))).sum())


def macdonald_k(nu, x, config=None):
    """K_nu(x) for x > 0 via its symmetric integral representation."""
    if x <= 0:
        raise ValueError("argument must be positive")
    config = config or _DEFAULT
    return self_checked(lambda c: _macdonald_value(float(nu), float(x), c), config)


# ---------------------------------------------------------------------------
# integral identities


def bump_stade_check(alpha, beta, r=1.0, config=None):
    """Relative discrepancy between the paired gl-Whittaker integral
    with exponential weight e^{-r x_1} and its Gamma-product closed
    form, at rank 1 or 2."""
    config = config or _DEFAULT
    n = len(alpha)
    if len(beta) != n or n > 2:
        raise ValueError("equal ranks, at most 2")
    alpha = [float(v) for v in alpha]
    beta = [float(v) for v in beta]
    if r <= 0:
        raise ValueError("r must be positive")
    if min(alpha) + min(beta) <= 0:
        raise ValueError("need alpha_i + beta_j > 0 for all pairs")

    rhs = r ** (-sum(alpha) - sum(beta))
    for ai in alpha:
        for bj in beta:
            rhs *= math.gamma(ai + bj)

    if n == 1:
        def lhs_eval(c):
            grid = LogIntegrand(
                [alpha[0] + beta[0]], [(r, (1,))]
            ).grids(c)
            xg, wx = grid[0]
            return float((wx * xg ** (alpha[0] + beta[0]) * np.exp(-r * xg)).sum())
    else:
        a1, a2 = alpha
        b1, b2 = beta

        def lhs_eval(c):
            # axes: x1, x2, z, w (z, w inner variables of the two factors)
            grids = LogIntegrand(
                [a2 + b2, a2 + b2, a1 - a2, b1 - b2],
                [
                    (r, (1, 0, 0, 0)),
                    (1.0, (0, 1, -1, 0)),   # x2 / z
                    (1.0, (-1, 0, 1, 0)),   # z / x1
                    (1.0, (0, 1, 0, -1)),   # x2 / w
                    (1.0, (-1, 0, 0, 1)),   # w / x1
                ],
            ).grids(c)
            (x1, w1), (x2, w2), (z, wz), (wg, ww) = grids
            zmat = np.exp(-np.outer(1.0 / x1, z)) * (wz * z ** (a1 - a2))
            zval = zmat @ np.exp(-np.outer(1.0 / z, x2))    # [x1, x2]
            wmat = np.exp(-np.outer(1.0 / x1, wg)) * (ww * wg ** (b1 - b2))
            wval = wmat @ np.exp(-np.outer(1.0 / wg, x2))   # [x1, x2]
            g1 = w1 * x1 ** (a2 + b2) * np.exp(-r * x1)
            g2 = w2 * x2 ** (a2 + b2)
            return float(g1 @ (zval * wval) @ g2)

    lhs = self_checked(lhs_eval, config)
    return abs(lhs - rhs) / abs(rhs)


def ishii_stade_check(alpha, beta, config=None):
    """Relative discrepancy between the rank-one odd-orthogonal
    Whittaker Mellin-type integral and Gamma(beta+alpha) Gamma(beta-alpha).
    Requires beta > |alpha|."""
    config = config or _DEFAULT
    alpha = float(alpha)
    beta = float(beta)
    if beta - abs(alpha) <= 0:
        raise ValueError("need beta > |alpha|")
    rhs = math.gamma(beta + alpha) * math.gamma(beta - alpha)

    def lhs_eval(c):
        # axes: x, z
        grids = LogIntegrand(
            [-alpha - beta, 2 * alpha],
            [
                (1.0, (0, -1)),   # 1 / z
                (1.0, (-1, 1)),   # z / x
            ],
        ).grids(c)
        (xg, wx), (z, wz) = grids
        fz = wz * z ** (2 * alpha) * np.exp(-1.0 / z)
        m = np.exp(-np.outer(1.0 / xg, z)) @ fz
        return float((wx * xg ** (-alpha - beta) * m).sum())

    lhs = self_checked(lhs_eval, config)
    return abs(lhs - rhs) / abs(rhs)


def sklyanin_density(lam):
    """Positive spectral density (2 pi)^{-n} / n! * prod_{i != j}
    |Gamma(lam_i - lam_j)|^{-1} for points on a vertical line."""
    from scipy.special import gamma as cgamma

    n = len(lam)
    value = (2 * math.pi) ** (-n) / math.factorial(n)
    for i in range(n):
        for j in range(n):
            if i != j:
                value /= abs(cgamma(complex(lam[i]) - complex(lam[j])))
    return value
