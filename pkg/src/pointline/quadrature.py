"""Composite Gauss-Legendre quadrature on logarithmic axes.

Every semi-infinite integral in this package has the shape

    integral over x in (0, inf)^m of  prod x_i^{P_i} * exp(-sum_j c_j m_j(x))
    with respect to prod dx_i / x_i ,

where each m_j(x) is a monomial with exponents in {-1, 0, +1}, such as
x_2 / z or 1 / v.  Substituting x_i = e^{t_i} turns the log-density into

    phi(t) = sum_i P_i t_i - sum_j c_j exp(<s_j, t>) ,

which has a unique interior peak and doubly exponential (or at worst
geometric, when an axis carries only a power) tail decay.  The peak is
found by coordinate ascent, each coordinate update being the closed-form
maximizer of P t - C+ e^t - C- e^{-t}.  Axis windows are then grown
outward from the peak until the section of phi has dropped by a set
amount below its maximum, and each window is covered by fixed-width
Gauss-Legendre panels.

The axis grids returned here carry plain dt weights; the caller builds
the integrand factors (powers, coupling matrices) and contracts them,
which keeps the tensor structure of each nested integral explicit.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

__all__ = [
    "QuadratureConfig",
    "QuadratureError",
    "LogIntegrand",
    "gauss_panels",
    "self_checked",
]

_MAX_PANELS_PER_AXIS = 320


@dataclasses.dataclass(frozen=True)
class QuadratureConfig:
    """Knobs for the log-axis quadrature scheme.

    nodes: Gauss-Legendre nodes per panel (at least 16).
    panel_width: panel length in log coordinates.
    drop: cut an axis where its log-integrand section has fallen this
        far below the peak (40 corresponds to a 1e-17 relative floor).
    margin: extra log-units added on both sides of every window.
    tol: target relative tolerance for the refinement self-check.
    axis_map: semi-infinite substitution; only "log" (x = e^t) exists.
    """

    nodes: int = 24
    panel_width: float = 2.0
    drop: float = 40.0
    margin: float = 4.0
    tol: float = 1e-7
    axis_map: str = "log"

    def __post_init__(self):
        if self.nodes < 16:
            raise ValueError("at least 16 nodes per panel required")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")
        if self.drop <= 0 or self.panel_width <= 0 or self.margin < 0:
            raise ValueError("invalid window parameters")
        if self.axis_map != "log":
            raise ValueError("only the logarithmic axis map is implemented")

    def refined(self):
        """A strictly finer configuration for the self-check pass."""
        return dataclasses.replace(
            self,
            nodes=self.nodes + self.nodes // 2,
            margin=self.margin + 2.0,
        )


class QuadratureError(ArithmeticError):
    """Raised when the refinement self-check misses the target tolerance."""

    def __init__(self, achieved, tol):
        self.achieved = achieved
        self.tol = tol
        super().__init__(
            "quadrature did not converge: achieved relative error "
            "%.3e exceeds target %.3e" % (achieved, tol)
        )


def _clipped_exp(v):
    return math.exp(min(v, 700.0))


class LogIntegrand:
    """phi(t) = sum_i powers[i] t_i - sum_j c_j exp(<s_j, t>).

    powers: sequence of axis powers P_i.
    terms: sequence of (c, s) with c > 0 and s an integer vector with
        entries in {-1, 0, +1} selecting the monomial of that coupling.
    """

    def __init__(self, powers, terms):
        self.powers = [float(p) for p in powers]
        self.m = len(self.powers)
        self.terms = []
        for c, s in terms:
            if c <= 0:
                raise ValueError("coupling constants must be positive")
            s = tuple(int(v) for v in s)
            if len(s) != self.m or any(v not in (-1, 0, 1) for v in s):
                raise ValueError("bad coupling exponent vector")
            self.terms.append((float(c), s))

    def value(self, t):
        total = sum(p * ti for p, ti in zip(self.powers, t))
        for c, s in self.terms:
            total -= c * _clipped_exp(sum(sk * tk for sk, tk in zip(s, t)))
        return total

    def _axis_update(self, k, t):
        # maximize P tk - C+ e^{tk} - C- e^{-tk} with the other
        # coordinates frozen
        p = self.powers[k]
        c_plus = 0.0
        c_minus = 0.0
        for c, s in self.terms:
            if s[k] == 0:
                continue
            rest = sum(sj * tj for j, (sj, tj) in enumerate(zip(s, t)) if j != k)
            contrib = c * _clipped_exp(rest)
            if s[k] > 0:
                c_plus += contrib
            else:
                c_minus += contrib
        if c_plus > 0 and c_minus > 0:
            disc = math.sqrt(p * p + 4 * c_plus * c_minus)
            if p >= 0:
                return math.log((p + disc) / (2 * c_plus))
            # conjugate form; the direct one cancels to log(0) when
            # 4 c+ c- underflows against p^2
            return math.log(2 * c_minus / (disc - p))
        if c_plus > 0:
            if p <= 0:
                raise ValueError(
                    "axis %d diverges towards -inf (power %g)" % (k, p)
                )
            return math.log(p / c_plus)
        if c_minus > 0:
            if p >= 0:
                raise ValueError(
                    "axis %d diverges towards +inf (power %g)" % (k, p)
                )
            return math.log(c_minus / -p)
        raise ValueError("axis %d has no exponential confinement" % k)

    def peak(self, sweeps=60):
        t = [0.0] * self.m
        for _ in range(sweeps):
            shift = 0.0
            for k in range(self.m):
                new = self._axis_update(k, t)
                shift = max(shift, abs(new - t[k]))
                t[k] = new
            if shift < 1e-13:
                break
        return t

    def _profile(self, k, t, sweeps=40):
        # conditional maximum over every axis but k, warm started from t
        # (mutates t so consecutive window steps reuse the optimum)
        if self.m > 1:
            for _ in range(sweeps):
                shift = 0.0
                for j in range(self.m):
                    if j == k:
                        continue
                    new = self._axis_update(j, t)
                    shift = max(shift, abs(new - t[j]))
                    t[j] = new
                if shift < 1e-10:
                    break
        return self.value(t)

    def axis_window(self, k, t_peak, config):
        """Window along axis k, cut where the profile (conditional
        maximum over the remaining axes) falls `drop` below the peak.

        Sections through the peak are not enough: when axes are
        strongly coupled the mass lies on a ridge whose marginal decays
        slower than any section, and a section-based window truncates
        real mass.  The log-integrand is concave, so the profile is
        concave in t_k and the cut points are well defined.
        """
        target = self.value(t_peak) - config.drop
        edges = []
        for direction in (-1.0, 1.0):
            t = list(t_peak)
            steps = 0
            while self._profile(k, t) > target:
                t[k] += direction
                steps += 1
                if steps > 4000:
                    raise QuadratureError(math.inf, config.tol)
            edges.append(t[k])
        return edges[0] - config.margin, edges[1] + config.margin

    def grids(self, config):
        """Per-axis (x_nodes, dt_weights) numpy arrays, x = e^t."""
        t_peak = self.peak()
        out = []
        for k in range(self.m):
            lo, hi = self.axis_window(k, t_peak, config)
            t, w = gauss_panels(lo, hi, config)
            out.append((np.exp(t), w))
        return out


def gauss_panels(lo, hi, config):
    """Composite Gauss-Legendre nodes/weights on [lo, hi] in t."""
    if not hi > lo:
        raise ValueError("empty window")
    count = max(1, math.ceil((hi - lo) / config.panel_width))
    if count > _MAX_PANELS_PER_AXIS:
        raise QuadratureError(math.inf, config.tol)
    base_t, base_w = np.polynomial.legendre.leggauss(config.nodes)
    edges = np.linspace(lo, hi, count + 1)
    half = np.diff(edges) / 2.0
    mid = (edges[:-1] + edges[1:]) / 2.0
    t = (mid[:, None] + half[:, None] * base_t[None, :]).ravel()
    w = (half[:, None] * base_w[None, :]).ravel()
    return t, w


def self_checked(evaluator, config):
    """Run `evaluator(config)` against a refined pass; return the finer
    value or raise QuadratureError with the achieved discrepancy."""
    coarse = evaluator(config)
    fine = evaluator(config.refined())
    scale = max(abs(fine), 1e-300)
    achieved = abs(coarse - fine) / scale
    if achieved > config.tol:
        raise QuadratureError(achieved, config.tol)
    return fine
