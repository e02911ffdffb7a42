"""Seedable Monte Carlo oracle for passage times and partition functions.

Every random weight is a pure function of (seed, site, sample index):
uniforms come from a SplitMix64 finalizer applied to a per-site key plus
a per-sample counter, so chunk sizes, iteration order, and parallel
splits cannot change a single draw.  Geometric variables use the
P(W = k) = (1 - p) p^k, k >= 0 parametrization, which puts mass at
zero, and are sampled by inversion as floor(log U / log p).
Exponentials are sampled by inversion, Gamma variables by the
Marsaglia-Tsang rejection method driven by the same counter stream
(reciprocals give the inverse-gamma polymer weights).

``lpp_dp`` computes last passage times by dynamic programming on any of
the path geometries (plus plain point-to-point rectangles), and
``tasep_oracle`` reproduces them through the jump-time recurrences of
the corresponding interacting particle system, which serves as an
independent check of the lattice conventions.  ``estimate`` ties the
samplers to the statistics the exact formulas predict: CDF values,
Laplace transforms, and rescaled CDFs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arrays import PolygonalArray
from .lpp import ExpEnvSpec, GeomEnvSpec
from .polymer import LogGammaSpec, _array_column, _infer_size, lattice_indices, site_shapes

__all__ = [
    "SimConfig",
    "lpp_dp",
    "tasep_oracle",
    "estimate",
]

_CHUNK = 200_000

# Counter slots reserved per (site, sample): slot 0 feeds single-uniform
# samplers and the small-shape Gamma boost, later slots feed rejection
# attempts in groups of three.
_STRIDE = 256

_STATISTICS = ("cdf-at-u", "laplace-at-r", "rescaled-cdf")
_VARIANTS = ("step", "alternating", "half-alternating", "absorbing")

_MASK = (1 << 64) - 1
_GOLD = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _mix_scalar(z):
    z = (z + _GOLD) & _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def _site_key(seed, i, j):
    z = _mix_scalar(seed)
    z = _mix_scalar(z ^ (i & _MASK))
    return _mix_scalar(z ^ (j & _MASK))


def _splitmix(z):
    # uint64 vector version of _mix_scalar; the dtype wraps like C.
    z = z + np.uint64(_GOLD)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def _uniforms(key, slots):
    """Uniform [0, 1) floats at the given counter slots (uint64 array)."""
    bits = _splitmix(np.uint64(key) + slots)
    return (bits >> np.uint64(11)) * 2.0**-53


def _gamma_rejection(key, shape, slots):
    """Marsaglia-Tsang Gamma(shape, 1) draws, one per base slot.

    Each attempt consumes three uniforms (two feed a Box-Muller normal);
    shapes below one are boosted via Gamma(shape + 1) * U^(1/shape)
    using the slot-0 uniform.
    """
    boosted = shape if shape >= 1.0 else shape + 1.0
    d = boosted - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(len(slots))
    pending = np.arange(len(slots))
    attempt = 0
    while pending.size:
        if attempt > 80:
            raise RuntimeError("gamma rejection failed to terminate")
        base = slots[pending] + np.uint64(1 + 3 * attempt)
        u1 = 1.0 - _uniforms(key, base)
        u2 = _uniforms(key, base + np.uint64(1))
        u3 = 1.0 - _uniforms(key, base + np.uint64(2))
        x = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * math.pi * u2)
        v = (1.0 + c * x) ** 3
        with np.errstate(invalid="ignore"):
            ok = (v > 0.0) & (
                np.log(u3) < 0.5 * x * x + d - d * v + d * np.log(np.where(v > 0.0, v, 1.0))
            )
        out[pending[ok]] = d * v[ok]
        pending = pending[~ok]
        attempt += 1
    if shape < 1.0:
        out *= (1.0 - _uniforms(key, slots)) ** (1.0 / shape)
    return out


def _draw(kind, param, key, start, count):
    slots = np.arange(start, start + count, dtype=np.uint64) * np.uint64(_STRIDE)
    if kind == "geom":
        u = 1.0 - _uniforms(key, slots)
        return np.floor(np.log(u) / math.log(param))
    if kind == "exp":
        return -np.log(1.0 - _uniforms(key, slots)) / param
    return 1.0 / _gamma_rejection(key, param, slots)


def _geom_parameter(env, i, j):
    q, p, N = env.q, env.p, env.N
    if env.geometry == "flat":
        if i <= N and j <= N:
            return q[i - 1] * p[j - 1]
        if i <= N:
            return q[i - 1] * q[2 * N - j]
        return p[2 * N - i] * p[j - 1]
    if env.geometry == "half-flat":
        return q[i - 1] * (p[j - 1] if j <= N else q[2 * N - j])
    if i == j:
        return q[i - 1]
    return q[i - 1] * (q[j - 1] if j <= N else q[2 * N - j])


def _exp_rate(env, i, j):
    a, b, N = env.alpha, env.beta, env.N
    if env.geometry == "flat":
        if i <= N and j <= N:
            return a[i - 1] + b[j - 1]
        if i <= N:
            return a[i - 1] + a[2 * N - j]
        return b[2 * N - i] + b[j - 1]
    if env.geometry == "half-flat":
        return a[i - 1] + (b[j - 1] if j <= N else a[2 * N - j])
    if i == j:
        return a[i - 1]
    return a[i - 1] + (a[j - 1] if j <= N else a[2 * N - j])


def _env_laws(env):
    if isinstance(env, LogGammaSpec):
        return {ij: ("invgamma", s) for ij, s in site_shapes(env).items()}
    sites = lattice_indices(env.geometry, env.N)
    if isinstance(env, ExpEnvSpec):
        return {(i, j): ("exp", _exp_rate(env, i, j)) for i, j in sites}
    return {(i, j): ("geom", float(_geom_parameter(env, i, j))) for i, j in sites}


# ---------------------------------------------------------------------------
# Last passage dynamic programming and the particle-system recurrences.


def lpp_dp(weights, geometry):
    """Last passage time over down/right paths from (1, 1).

    geometry "point" takes a rectangular array and ends at its
    bottom-right corner; "flat", "half-flat" and "restricted" take the
    staircase lattices (restricted rows left-aligned at column i) and
    maximize over the terminal line i + j = 2N + 1.
    """
    w = weights if isinstance(weights, PolygonalArray) else PolygonalArray(weights)
    rows = w.shape.row_lengths
    if geometry == "point":
        if len(set(rows)) != 1:
            raise ValueError("point geometry needs a rectangular array")
        best = {}
        for i in range(1, len(rows) + 1):
            for j in range(1, rows[0] + 1):
                prev = max(best.get((i - 1, j), 0), best.get((i, j - 1), 0))
                best[i, j] = prev + w[i, j]
        return best[len(rows), rows[0]]
    if geometry not in ("flat", "half-flat", "restricted"):
        raise ValueError(f"unknown geometry {geometry!r}")
    N = _infer_size(geometry, w.shape)
    best = {}
    for i, j in lattice_indices(geometry, N):
        prev = max(best.get((i - 1, j), 0), best.get((i, j - 1), 0))
        best[i, j] = prev + w[i, _array_column(geometry, i, j)]
    return max(v for (i, j), v in best.items() if i + j == 2 * N + 1)


def tasep_oracle(weights, variant, target=None):
    """Jump time of a tagged particle from the waiting-time recurrences.

    ``weights`` maps (particle index i, jump number j) to the waiting
    time of particle i's j-th jump.  T(i, j) obeys
    max(T(i, j-1), T(i-1, j)) + W(i, j) for the step start and
    max(T(i, j-1), T(i-1, j-1)) + W(i, j) for the alternating starts,
    with zero base cases at missing particles, jump number zero, and
    (absorbing variant) jumps past a particle's absorption.  Returns
    T(target); by default the corner entry for step and T(N, 2N) for
    the others, matching point-to-point, point-to-line,
    point-to-half-line, and restricted point-to-half-line passage
    times respectively under the environment relabeling.
    """
    if variant not in _VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if variant == "step":
        ti = max(i for i, _ in weights)
        tj = max(j for _, j in weights)
        if target is not None:
            ti, tj = target
        times = {}
        for j in range(1, tj + 1):
            for i in range(1, ti + 1):
                prev = max(times.get((i, j - 1), 0), times.get((i - 1, j), 0))
                times[i, j] = prev + weights[i, j]
        return times[ti, tj]
    if target is None:
        n = max(i for i, _ in weights)
        target = (n, 2 * n)
    ti, tj = target
    times = {}
    for j in range(1, tj + 1):
        lo = ti - (tj - j)
        if variant == "half-alternating":
            lo = max(lo, 1)
        elif variant == "absorbing":
            # particle i is absorbed after its 2i-th jump
            lo = max(lo, 1, (j + 1) // 2)
        for i in range(lo, ti + 1):
            prev = max(times.get((i, j - 1), 0), times.get((i - 1, j - 1), 0))
            times[i, j] = prev + weights[i, j]
    return times[ti, tj]


# ---------------------------------------------------------------------------
# Estimation.


@dataclass(frozen=True)
class SimConfig:
    """One Monte Carlo experiment: an environment, a statistic, a seed.

    statistic "cdf-at-u" estimates P(T <= u) (for polymer environments,
    T is log of the partition function); "laplace-at-r" estimates
    E[exp(-r T)] (for polymers, E[exp(-r Z)]); "rescaled-cdf" estimates
    P((T - center) / scale <= u).
    """

    env: object
    statistic: str
    samples: int
    seed: int = 0
    u: float | None = None
    r: float | None = None
    center: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not isinstance(self.env, (GeomEnvSpec, ExpEnvSpec, LogGammaSpec)):
            raise TypeError("env must be a geometric, exponential, or polymer spec")
        if self.statistic not in _STATISTICS:
            raise ValueError(f"statistic must be one of {_STATISTICS}")
        if not isinstance(self.samples, int) or self.samples < 1:
            raise ValueError("samples must be a positive integer")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        if self.statistic == "laplace-at-r":
            if self.r is None or not self.r > 0:
                raise ValueError("laplace-at-r needs r > 0")
        elif self.u is None:
            raise ValueError(f"{self.statistic} needs a threshold u")
        if not self.scale > 0:
            raise ValueError("scale must be positive")


def estimate(config):
    """Monte Carlo (estimate, standard error) for the configured statistic.

    Deterministic given (env, statistic, samples, seed): the counters
    make the value independent of internal chunking.  Indicator
    statistics carry the binomial standard error, the Laplace statistic
    the sample one; a single-sample run returns NaN as the degenerate
    error flag.
    """
    env = config.env
    polymer = isinstance(env, LogGammaSpec)
    laws = _env_laws(env)
    sites = lattice_indices(env.geometry, env.N)
    keys = {ij: _site_key(config.seed, *ij) for ij in sites}
    line = 2 * env.N + 1
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < config.samples:
        count = min(_CHUNK, config.samples - done)
        acc = {}
        for ij in sites:
            i, j = ij
            kind, param = laws[ij]
            w = _draw(kind, param, keys[ij], done, count)
            if polymer:
                inc = acc.get((i - 1, j), 0.0) + acc.get((i, j - 1), 0.0)
                acc[ij] = w if ij == (1, 1) else w * inc
            else:
                acc[ij] = w + np.maximum(acc.get((i - 1, j), 0.0), acc.get((i, j - 1), 0.0))
        on_line = [v for (i, j), v in acc.items() if i + j == line]
        stat = sum(on_line) if polymer else np.maximum.reduce(on_line)
        if config.statistic == "laplace-at-r":
            vals = np.exp(-config.r * stat)
        else:
            if polymer:
                stat = np.log(stat)
            if config.statistic == "rescaled-cdf":
                stat = (stat - config.center) / config.scale
            vals = (stat <= config.u).astype(float)
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
        done += count
    n = config.samples
    mean = total / n
    if n == 1:
        return mean, math.nan
    if config.statistic == "laplace-at-r":
        var = max(total_sq - n * mean * mean, 0.0) / (n - 1)
        return mean, math.sqrt(var / n)
    return mean, math.sqrt(mean * (1.0 - mean) / n)
