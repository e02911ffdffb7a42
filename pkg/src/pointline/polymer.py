"""Log-gamma polymer measures on point-to-line lattices.

Directed paths start at (1, 1), take unit steps down or right, and end
anywhere on the anti-diagonal line i + j = 2N + 1.  Three lattice
geometries carry exactly solvable inverse-gamma weight measures:

* ``flat``: the full staircase with rows 2N, 2N-1, ..., 1.  Inside the
  top-left N x N square the reciprocal weight at (i, j) is
  Gamma(alpha_i + beta_j + gamma); the right wing couples alpha to
  itself, the lower wing beta to itself.
* ``half-flat``: only the first N rows of the staircase, so paths end on
  the half-line {i + j = 2N + 1, i <= N}.  No gamma parameter.
* ``restricted``: the first N rows with the sites i > j removed; paths
  may touch but never cross the diagonal.  Weights depend on alpha and
  gamma alone.

``partition_function`` runs the path-sum recursion exactly (Fractions
in, Fractions out).  At N = 1 the Laplace transform E[exp(-r Z)] has
two deterministic routes, ``laplace_whittaker`` (an integral over
positive axes) and ``laplace_contour`` (vertical complex lines, flat
and half-flat only), plus seeded Monte Carlo via ``laplace_mc``.
Beyond N = 1 only Monte Carlo is offered, deliberately: the quadrature
dimension grows with N and honest error control goes first.

``zero_temp_check`` couples the polymer at temperature eps to the
exponential corner-growth law: E[exp(-exp(-u/eps) Z)] evaluated for the
eps-scaled parameter set approaches the exact point-to-line passage
time CDF at u as eps decreases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma

from .arrays import PolygonalArray
from .lpp import ExpEnvSpec, cdf_exp
from .quadrature import LogIntegrand, QuadratureConfig, QuadratureError, self_checked

__all__ = [
    "LogGammaSpec",
    "lattice_indices",
    "site_shapes",
    "partition_function",
    "sample_weights",
    "laplace_whittaker",
    "laplace_contour",
    "laplace_mc",
    "zero_temp_check",
]

_GEOMETRIES = ("flat", "half-flat", "restricted")

# Contour tails are truncated once a Stirling-type bound on the remaining
# mass drops below this fraction of the accumulated integral.
_TAIL_FRACTION = 1e-14

_MC_CHUNK = 200_000


@dataclass(frozen=True)
class LogGammaSpec:
    """Parameter set for one polymer measure.

    alpha (and beta, where the geometry uses it) must hold N positive
    reals.  gamma >= 0 is required for flat and restricted and must be
    left as None for half-flat, which has no such parameter.
    """

    geometry: str
    N: int
    alpha: tuple
    beta: tuple = ()
    gamma: float | None = None

    def __post_init__(self):
        if self.geometry not in _GEOMETRIES:
            raise ValueError(f"unknown geometry {self.geometry!r}")
        if not isinstance(self.N, int) or self.N < 1:
            raise ValueError("N must be a positive integer")
        alpha = tuple(float(a) for a in self.alpha)
        beta = tuple(float(b) for b in self.beta)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        if len(alpha) != self.N or not all(
            a > 0 and math.isfinite(a) for a in alpha
        ):
            raise ValueError("alpha must hold N positive finite entries")
        if self.geometry == "restricted":
            if beta:
                raise ValueError("restricted weights take no beta parameters")
        elif len(beta) != self.N or not all(
            b > 0 and math.isfinite(b) for b in beta
        ):
            raise ValueError("beta must hold N positive finite entries")
        if self.geometry == "half-flat":
            if self.gamma is not None:
                raise ValueError("half-flat weights take no gamma parameter")
        else:
            if self.gamma is None:
                raise ValueError(f"{self.geometry} weights need gamma >= 0")
            g = float(self.gamma)
            if not (g >= 0 and math.isfinite(g)):
                raise ValueError("gamma must be finite and >= 0")
            object.__setattr__(self, "gamma", g)


def lattice_indices(geometry, N):
    """Lattice sites (i, j) of the geometry, row-major.

    Every site satisfies i + j <= 2N + 1; half-flat keeps i <= N and
    restricted additionally drops i > j.
    """
    if geometry not in _GEOMETRIES:
        raise ValueError(f"unknown geometry {geometry!r}")
    rows = 2 * N if geometry == "flat" else N
    out = []
    for i in range(1, rows + 1):
        first = i if geometry == "restricted" else 1
        out.extend((i, j) for j in range(first, 2 * N + 2 - i))
    return out


def _row_lengths(geometry, N):
    if geometry == "flat":
        return tuple(range(2 * N, 0, -1))
    if geometry == "half-flat":
        return tuple(range(2 * N, N, -1))
    return tuple(range(2 * N, 0, -2))


def _infer_size(geometry, shape):
    rows = shape.row_lengths
    N = len(rows) // 2 if geometry == "flat" else len(rows)
    if N >= 1 and rows == _row_lengths(geometry, N):
        return N
    raise ValueError(f"array shape {rows} does not fill a {geometry} lattice")


def _array_column(geometry, i, j):
    # Restricted rows are stored left-aligned, so lattice column j sits at
    # array column j - i + 1.
    return j - i + 1 if geometry == "restricted" else j


def site_shapes(spec):
    """Gamma shape parameter of the reciprocal weight at each site.

    Returns a dict keyed by lattice (i, j).  Wing sites pair an alpha
    (or beta) with its mirror image across the terminal line; gamma only
    enters where both coordinates stay within the first N.
    """
    N, al, be, g = spec.N, spec.alpha, spec.beta, spec.gamma
    shapes = {}
    for i, j in lattice_indices(spec.geometry, N):
        if spec.geometry == "flat":
            if i <= N and j <= N:
                s = al[i - 1] + be[j - 1] + g
            elif i <= N:
                s = al[i - 1] + al[2 * N - j]
            else:
                s = be[2 * N - i] + be[j - 1]
        elif spec.geometry == "half-flat":
            s = al[i - 1] + (be[j - 1] if j <= N else al[2 * N - j])
        else:
            if j > N:
                s = al[i - 1] + al[2 * N - j]
            elif i == j:
                s = al[i - 1] + g
            else:
                s = al[i - 1] + al[j - 1] + 2 * g
        shapes[(i, j)] = s
    return shapes


def partition_function(weights, geometry):
    """Point-to-line partition function of a weight array.

    Sums, over all down/right paths from (1, 1) to the terminal line
    i + j = 2N + 1 inside the geometry's lattice, the product of weights
    along the path.  The recursion is exact when entries are Fractions.
    N is inferred from the array shape; restricted arrays list each
    row's surviving sites left-aligned (row i starts at lattice column
    i).
    """
    w = weights if isinstance(weights, PolygonalArray) else PolygonalArray(weights)
    if geometry not in _GEOMETRIES:
        raise ValueError(f"unknown geometry {geometry!r}")
    N = _infer_size(geometry, w.shape)
    z = {}
    for i, j in lattice_indices(geometry, N):
        entry = w[i, _array_column(geometry, i, j)]
        if not entry > 0:
            raise ValueError("weights must be positive")
        inc = z.get((i - 1, j), 0) + z.get((i, j - 1), 0)
        if (i, j) == (1, 1):
            inc = 1
        z[(i, j)] = entry * inc
    return sum(v for (i, j), v in z.items() if i + j == 2 * N + 1)


# ---------------------------------------------------------------------------
# Sampling.  Reciprocal weights are Gamma draws; each site owns a seeded
# substream so results are reproducible and independent of chunking order.


def _site_rng(seed, i, j):
    return np.random.default_rng([seed, i, j])


def sample_weights(spec, size, seed=0):
    """Draw ``size`` weights per site; dict of (i, j) -> float array."""
    if not isinstance(seed, int) or seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    shapes = site_shapes(spec)
    return {
        (i, j): 1.0 / _site_rng(seed, i, j).gamma(shapes[i, j], size=size)
        for (i, j) in shapes
    }


def laplace_mc(spec, r, samples=10**6, seed=0):
    """Monte Carlo estimate of E[exp(-r Z)] with its standard error.

    Works for any N.  Weights are drawn in fixed-size chunks and the
    partition function recursion is vectorised across the chunk, so the
    estimate for a given seed does not depend on ``samples`` except
    through how many draws are kept.
    """
    if not r > 0:
        raise ValueError("r must be positive")
    if not isinstance(seed, int) or seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    shapes = site_shapes(spec)
    sites = lattice_indices(spec.geometry, spec.N)
    rngs = {ij: _site_rng(seed, *ij) for ij in sites}
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        k = min(_MC_CHUNK, samples - done)
        z = {}
        for ij in sites:
            i, j = ij
            w = 1.0 / rngs[ij].gamma(shapes[ij], size=k)
            inc = z.get((i - 1, j), 0.0) + z.get((i, j - 1), 0.0)
            z[ij] = w if ij == (1, 1) else w * inc
        line = sum(v for (i, j), v in z.items() if i + j == 2 * spec.N + 1)
        vals = np.exp(-r * line)
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
        done += k
    mean = total / samples
    var = max(total_sq - samples * mean * mean, 0.0) / (samples - 1)
    return mean, math.sqrt(var / samples)


# ---------------------------------------------------------------------------
# N = 1 Laplace transform, positive-axis route.  The integrals pair the
# terminal-site variable x with one Bessel-type inner variable per
# alpha/beta axis; gamma appears only as a power of x.


def _paired_axis_value(a, s, r, config):
    # integral over x, z > 0 of x^(s-a) e^(-r x) z^(2a) e^(-1/z - z/x)
    # against dx/x dz/z, normalised later.
    def evaluate(cfg):
        (x, wx), (z, wz) = LogIntegrand(
            [s - a, 2 * a],
            [(r, (1, 0)), (1.0, (0, -1)), (1.0, (-1, 1))],
        ).grids(cfg)
        fz = wz * z ** (2 * a) * np.exp(-1.0 / z)
        inner = np.exp(-np.outer(1.0 / x, z)) @ fz
        return float((wx * x ** (s - a) * np.exp(-r * x) * inner).sum())

    return self_checked(evaluate, config)


def _double_axis_value(a, b, g, r, config):
    def evaluate(cfg):
        (x, wx), (z1, w1), (z2, w2) = LogIntegrand(
            [g - a - b, 2 * a, 2 * b],
            [
                (r, (1, 0, 0)),
                (1.0, (0, -1, 0)),
                (1.0, (-1, 1, 0)),
                (1.0, (0, 0, -1)),
                (1.0, (-1, 0, 1)),
            ],
        ).grids(cfg)
        f1 = w1 * z1 ** (2 * a) * np.exp(-1.0 / z1)
        f2 = w2 * z2 ** (2 * b) * np.exp(-1.0 / z2)
        inner1 = np.exp(-np.outer(1.0 / x, z1)) @ f1
        inner2 = np.exp(-np.outer(1.0 / x, z2)) @ f2
        core = wx * x ** (g - a - b) * np.exp(-r * x)
        return float((core * inner1 * inner2).sum())

    return self_checked(evaluate, config)


def laplace_whittaker(spec, r, config=None):
    """E[exp(-r Z)] at N = 1 by quadrature on the positive axes.

    Only N = 1 is evaluated; beyond that Monte Carlo is the only
    supported route.  The value decreases in r and tends to 1 as
    r -> 0+.
    """
    if spec.N != 1:
        raise ValueError(
            "laplace_whittaker handles N = 1 only; use laplace_mc beyond that"
        )
    if not (r > 0 and math.isfinite(r)):
        raise ValueError("r must be positive and finite")
    if config is None:
        config = QuadratureConfig()
    a = spec.alpha[0]
    if spec.geometry == "flat":
        b, g = spec.beta[0], spec.gamma
        total = _double_axis_value(a, b, g, r, config)
        log_norm = (a + b + g) * math.log(r) - (
            math.lgamma(a + b + g) + math.lgamma(2 * a) + math.lgamma(2 * b)
        )
    elif spec.geometry == "half-flat":
        b = spec.beta[0]
        total = _paired_axis_value(a, b, r, config)
        log_norm = (a + b) * math.log(r) - (math.lgamma(a + b) + math.lgamma(2 * a))
    else:
        g = spec.gamma
        total = _paired_axis_value(a, g, r, config)
        log_norm = (a + g) * math.log(r) - (math.lgamma(a + g) + math.lgamma(2 * a))
    return math.exp(log_norm + math.log(total))


# ---------------------------------------------------------------------------
# N = 1 Laplace transform, vertical-line route.  Integrands decay like
# exp(-c |Im|) times a power, so panels march outward until a Stirling
# bound certifies the discarded tail.


def _panel_nodes(lo, hi, width, order):
    """Gauss-Legendre nodes and weights on [lo, hi] split into panels."""
    base, base_w = np.polynomial.legendre.leggauss(order)
    count = max(1, int(math.ceil((hi - lo) / width)))
    edges = np.linspace(lo, hi, count + 1)
    nodes, weights = [], []
    for left, right in zip(edges[:-1], edges[1:]):
        half = 0.5 * (right - left)
        nodes.append(0.5 * (left + right) + half * base)
        weights.append(half * base_w)
    return np.concatenate(nodes), np.concatenate(weights)


def _half_flat_contour(a, b, logr, delta, height, order, width):
    # One vertical line at Re = delta; the integrand is conjugate-symmetric
    # so twice the real part over [0, height] suffices.
    t, wt = _panel_nodes(0.0, height, width, order)
    lam = delta + 1j * t
    vals = np.exp(
        loggamma(lam + a) + loggamma(lam - a) + loggamma(lam + b) - (lam - a) * logr
    )
    return 2.0 * float((wt * vals.real).sum())


def _half_flat_tail_bound(a, b, logr, delta, height):
    # |Gamma(x+iy)| <= sqrt(2 pi) |y|^(x-1/2) e^(-pi |y| / 2) for large |y|,
    # applied to each of the three factors, integrated past the cutoff.
    power = 2 * delta + b - 1.5
    return math.exp(
        1.5 * math.log(2 * math.pi)
        + power * math.log(height)
        - 1.5 * math.pi * height
        - (delta - a) * logr
    ) * (2.0 * height)


def _flat_contour(a, b, g, logr, delta, eps, height, order, width):
    s, ws = _panel_nodes(-height, height, width, order)
    lam = delta + 1j * s
    rho = eps + 1j * s
    va = ws * np.exp(loggamma(lam + a) + loggamma(lam - a) - lam * logr)
    vb = ws * np.exp(loggamma(rho + b) + loggamma(rho - b) - rho * logr)
    coupling = np.exp(loggamma(lam[:, None] + rho[None, :] + g))
    return float((va @ coupling @ vb).real)


def _flat_tail_bound(a, b, g, logr, delta, eps, height):
    # Worst-case decay along either edge of the truncated square: the
    # coupling factor decays like e^(-pi |s+t| / 2), which on the edge
    # |s| = height can cancel against one line's own decay, leaving a
    # single e^(-pi height) overall.
    power = max(
        2 * delta + (eps + g) - 2.0,
        2 * eps + (delta + g) - 2.0,
    )
    return math.exp(
        2.5 * math.log(2 * math.pi)
        + power * math.log(height)
        - math.pi * height
        - (delta + eps) * logr
    ) * (4.0 * height**2)


def laplace_contour(spec, r, delta=None, eps=None, config=None):
    """E[exp(-r Z)] at N = 1 via integrals over vertical complex lines.

    Available for the flat and half-flat measures.  The lines sit at
    Re = delta (alpha side) and, for flat, Re = eps (beta side); they
    default to alpha + 1/2 and beta + 1/2 and must stay strictly to the
    right of alpha and beta respectively.  Truncation height adapts
    until a tail bound is below 1e-14 of the accumulated value, and the
    node count is self-checked like the positive-axis route.
    """
    if spec.N != 1:
        raise ValueError(
            "laplace_contour handles N = 1 only; use laplace_mc beyond that"
        )
    if spec.geometry == "restricted":
        raise ValueError(
            "no contour route for restricted weights; use laplace_whittaker"
        )
    if not (r > 0 and math.isfinite(r)):
        raise ValueError("r must be positive and finite")
    if config is None:
        config = QuadratureConfig(panel_width=1.0)
    a, b = spec.alpha[0], spec.beta[0]
    if delta is None:
        delta = a + 0.5
    if delta <= a:
        raise ValueError("delta must exceed alpha to clear the integrand poles")
    logr = math.log(r)

    if spec.geometry == "half-flat":
        if eps is not None:
            raise ValueError("half-flat contour uses the single line delta")

        def raw(height, order):
            return _half_flat_contour(a, b, logr, delta, height, order, config.panel_width)

        def bound(height):
            return _half_flat_tail_bound(a, b, logr, delta, height)

        log_norm = -math.log(2 * math.pi) - (math.lgamma(a + b) + math.lgamma(2 * a))
    else:
        g = spec.gamma
        if eps is None:
            eps = b + 0.5
        if eps <= b:
            raise ValueError("eps must exceed beta to clear the integrand poles")

        def raw(height, order):
            return _flat_contour(a, b, g, logr, delta, eps, height, order, config.panel_width)

        def bound(height):
            return _flat_tail_bound(a, b, g, logr, delta, eps, height)

        log_norm = (
            (a + b) * logr
            - 2.0 * math.log(2 * math.pi)
            - (math.lgamma(a + b + g) + math.lgamma(2 * a) + math.lgamma(2 * b))
        )

    height = 12.0
    coarse = raw(height, config.nodes)
    while bound(height) > _TAIL_FRACTION * abs(coarse):
        height *= 1.5
        if height > 1e4:
            raise QuadratureError(bound(height) / max(abs(coarse), 1e-300), _TAIL_FRACTION)
        coarse = raw(height, config.nodes)
    fine = raw(height, config.nodes + config.nodes // 2)
    scale = max(abs(coarse), abs(fine), 1e-300)
    if abs(fine - coarse) > config.tol * scale:
        raise QuadratureError(abs(fine - coarse) / scale, config.tol)
    return math.exp(log_norm) * fine


def _contour_integrand_magnitude(spec, r, delta=None, eps=None, im_a=0.0, im_b=0.0):
    """|integrand| of laplace_contour at given imaginary parts, including
    the constant prefactor.  Testing hook for tail-decay claims."""
    a, b = spec.alpha[0], spec.beta[0]
    if delta is None:
        delta = a + 0.5
    logr = math.log(r)
    if spec.geometry == "half-flat":
        lam = delta + 1j * im_a
        val = np.exp(
            loggamma(lam + a) + loggamma(lam - a) + loggamma(lam + b) - (lam - a) * logr
        )
        norm = math.exp(
            -math.log(2 * math.pi) - (math.lgamma(a + b) + math.lgamma(2 * a))
        )
        return abs(complex(val)) * norm
    g = spec.gamma
    if eps is None:
        eps = b + 0.5
    lam = delta + 1j * im_a
    rho = eps + 1j * im_b
    val = np.exp(
        loggamma(lam + a)
        + loggamma(lam - a)
        + loggamma(rho + b)
        + loggamma(rho - b)
        + loggamma(lam + rho + g)
        - (lam + rho) * logr
    )
    norm = math.exp(
        (a + b) * logr
        - 2.0 * math.log(2 * math.pi)
        - (math.lgamma(a + b + g) + math.lgamma(2 * a) + math.lgamma(2 * b))
    )
    return abs(complex(val)) * norm


# ---------------------------------------------------------------------------
# Zero-temperature coupling to exponential last passage times.


def zero_temp_check(exp_spec, eps_list, u, method="quadrature", samples=10**6, seed=0):
    """Deviation of the cooled polymer Laplace value from the exact CDF.

    For each eps, scales the exponential-environment rates down by eps
    to build a polymer measure, evaluates E[exp(-exp(-u/eps) Z)] by
    quadrature (or Monte Carlo), and returns |value - P(T <= u)| where
    T is the exact point-to-line passage time.  The deviations shrink
    as eps -> 0; they need not be monotone at large eps.
    """
    if not isinstance(exp_spec, ExpEnvSpec):
        raise TypeError("exp_spec must be an ExpEnvSpec")
    if exp_spec.N != 1 and method == "quadrature":
        raise ValueError("quadrature route needs N = 1; pass method='mc'")
    if method not in ("quadrature", "mc"):
        raise ValueError("method must be 'quadrature' or 'mc'")
    if not u > 0:
        raise ValueError("u must be positive")
    exact = cdf_exp(exp_spec, u)
    deviations = []
    for k, eps in enumerate(eps_list):
        if not 0 < eps:
            raise ValueError("eps values must be positive")
        r = math.exp(-u / eps) if u / eps < 700 else 0.0
        if r == 0.0:
            raise ValueError("u/eps too large: exp(-u/eps) underflows")
        alpha = tuple(eps * x for x in exp_spec.alpha)
        beta = tuple(eps * x for x in exp_spec.beta)
        gamma = None if exp_spec.geometry == "half-flat" else 0.0
        cooled = LogGammaSpec(exp_spec.geometry, exp_spec.N, alpha, beta, gamma)
        if method == "quadrature":
            value = laplace_whittaker(cooled, r)
        else:
            value = laplace_mc(cooled, r, samples, seed + k)[0]
        deviations.append(abs(value - exact))
    return deviations
