"""Exact laws of point-to-line last passage percolation.

Geometric environments admit closed formulas for the distribution of the
passage time as finite sums of (symplectic) Schur polynomials over
partitions in a box; everything on that route runs in rational
arithmetic, so formulas that are supposed to agree can be compared for
exact equality, not just numerically.  Exponential environments admit
ratios of determinants (a Pfaffian pair in the restricted geometry)
whose entries are closed-form antiderivatives of exponential products.
Repeated rates are removable singularities of those ratios; they are
handled by replacing the rows and columns of coinciding parameters with
Taylor coefficients, which is the limit the divided differences take.

Geometric convention throughout: Geom(t) puts mass (1-t)*t^k on every
integer k >= 0, counting failures rather than trials, so zero weights
occur with positive probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy

from .schur import det, schur_det, sp_det

__all__ = [
    "GeomEnvSpec",
    "ExpEnvSpec",
    "ExactCdf",
    "cdf_geom",
    "cdf_geom_baik_rains",
    "cdf_exp",
    "pfaffian",
    "cauchy_det",
    "schur_pfaffian",
    "cauchy_binet_check",
    "de_bruijn_check",
    "exp_limit_check",
]

_GEOMETRIES = ("flat", "half-flat", "restricted")


@dataclass(frozen=True)
class GeomEnvSpec:
    """Geometric environment on a triangular lattice.

    ``q`` holds the N row parameters.  ``p`` holds the N column
    parameters for the flat and half-flat geometries and must be empty
    for the restricted one, whose environment is built from ``q`` alone.
    All parameters are coerced to exact rationals in (0, 1).
    """

    geometry: str
    N: int
    q: tuple
    p: tuple = ()

    def __post_init__(self):
        if self.geometry not in _GEOMETRIES:
            raise ValueError(f"geometry must be one of {_GEOMETRIES}")
        if not (isinstance(self.N, int) and self.N >= 1):
            raise ValueError("N must be a positive integer")
        q = tuple(Fraction(v) for v in self.q)
        p = tuple(Fraction(v) for v in self.p)
        if len(q) != self.N:
            raise ValueError("q must have length N")
        if self.geometry == "restricted":
            if p:
                raise ValueError("restricted geometry takes no p parameters")
        elif len(p) != self.N:
            raise ValueError("p must have length N")
        for v in q + p:
            if not (0 < v < 1):
                raise ValueError("parameters must lie strictly in (0, 1)")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class ExpEnvSpec:
    """Exponential-rate environment on a triangular lattice.

    ``alpha`` holds the N row rates; ``beta`` the N column rates, empty
    for the restricted geometry.  Rates must be positive reals.
    """

    geometry: str
    N: int
    alpha: tuple
    beta: tuple = ()

    def __post_init__(self):
        if self.geometry not in _GEOMETRIES:
            raise ValueError(f"geometry must be one of {_GEOMETRIES}")
        if not (isinstance(self.N, int) and self.N >= 1):
            raise ValueError("N must be a positive integer")
        alpha = tuple(float(a) for a in self.alpha)
        beta = tuple(float(b) for b in self.beta)
        if len(alpha) != self.N:
            raise ValueError("alpha must have length N")
        if self.geometry == "restricted":
            if beta:
                raise ValueError("restricted geometry takes no beta parameters")
        elif len(beta) != self.N:
            raise ValueError("beta must have length N")
        for v in alpha + beta:
            if not (v > 0 and math.isfinite(v)):
                raise ValueError("rates must be positive and finite")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)


@dataclass(frozen=True)
class ExactCdf:
    """An exactly evaluated probability.

    ``value`` is the probability as a Fraction.  ``normalization`` is the
    product of (1 - site parameter) over the whole environment, which is
    both the reciprocal of the normalization constant of the Schur sum
    and the probability that every weight vanishes.  ``terms`` counts the
    partitions summed.
    """

    value: Fraction
    normalization: Fraction
    terms: int

    def __post_init__(self):
        if not (0 <= self.value <= 1):
            raise ValueError("probability outside [0, 1]")
        if not (0 < self.normalization <= 1):
            raise ValueError("normalization outside (0, 1]")
        if self.terms < 1:
            raise ValueError("terms must be positive")


# ---------------------------------------------------------------------------
# geometric environments: exact rational evaluation


def _box_partitions(bound, max_len):
    """Yield every partition with at most max_len parts, each part at
    most bound, the empty partition included."""

    def rec(prefix, largest, slots):
        yield tuple(prefix)
        if slots == 0:
            return
        for part in range(largest, 0, -1):
            prefix.append(part)
            yield from rec(prefix, part, slots - 1)
            prefix.pop()

    yield from rec([], bound, max_len)


def _int_det(m):
    """Determinant of a square integer matrix by fraction-free
    (Bareiss) elimination.  Exact; every interior division is exact."""
    n = len(m)
    if n == 0:
        return 1
    m = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[-1][-1]


def _schur_rational(lam, xs):
    """Schur polynomial at distinct rationals through an integer
    bialternant.

    Clearing denominators turns det(x_i^{e_j}) into an integer
    determinant: with x_i = a_i / L and e_j = lam_j + n - j,

        s_lam(x) = det(a_i^{e_j}) / (prod_{i<j}(a_i - a_j) * L^{|lam|}).

    Repeated variables fall back to the divided-difference evaluator,
    which handles the confluent limit exactly.
    """
    n = len(xs)
    lam = tuple(lam)
    if len(lam) > n:
        if any(lam[n:]):
            return Fraction(0)
        lam = lam[:n]
    lam = lam + (0,) * (n - len(lam))
    if n == 0:
        return Fraction(1)
    if len(set(xs)) < n or not all(isinstance(x, Fraction) for x in xs):
        return schur_det(lam, xs)
    L = 1
    for x in xs:
        L = L * x.denominator // math.gcd(L, x.denominator)
    a = [int(x * L) for x in xs]
    e = [lam[j] + n - 1 - j for j in range(n)]
    num = _int_det([[ai**ej for ej in e] for ai in a])
    vand = 1
    for i in range(n):
        for j in range(i + 1, n):
            vand *= a[i] - a[j]
    return Fraction(num, vand * L ** sum(lam))


def _atom(spec):
    """Product of (1 - site parameter) over the lattice: the chance that
    every weight is zero, and the constant normalizing the Schur sums."""
    one = Fraction(1)
    q, p, n = spec.q, spec.p, spec.N
    total = one
    if spec.geometry == "restricted":
        # diagonal, strict upper triangle, then the folded wing, which
        # revisits every pair i <= j once more
        for i in range(n):
            total *= one - q[i]
            for j in range(i + 1, n):
                total *= one - q[i] * q[j]
            for j in range(i, n):
                total *= one - q[i] * q[j]
        return total
    for i in range(n):
        for j in range(n):
            total *= one - q[i] * p[j]
    for i in range(n):
        for j in range(i, n):
            total *= one - q[i] * q[j]
            if spec.geometry == "flat":
                total *= one - p[i] * p[j]
    return total


def _check_u(u):
    if u != int(u) or u < 0:
        raise ValueError("u must be a nonnegative integer")
    return int(u)


def cdf_geom(spec: GeomEnvSpec, u) -> ExactCdf:
    """P(point-to-line passage time <= u), exactly.

    Sums products of symplectic and ordinary Schur polynomials over the
    partitions fitting in an N x u box; the half-flat geometry pairs the
    symplectic factor in q with an ordinary Schur factor at the inverted
    column parameters, the restricted one drops the second factor.
    """
    if not isinstance(spec, GeomEnvSpec):
        raise TypeError("spec must be a GeomEnvSpec")
    u = _check_u(u)
    norm = _atom(spec)
    n = spec.N
    total = Fraction(0)
    terms = 0
    if spec.geometry == "flat":
        for lam in _box_partitions(u, n):
            total += sp_det(lam, spec.q) * sp_det(lam, spec.p)
            terms += 1
        drift = _prod(spec.q) * _prod(spec.p)
    elif spec.geometry == "half-flat":
        pinv = tuple(1 / v for v in spec.p)
        for lam in _box_partitions(u, n):
            total += sp_det(lam, spec.q) * _schur_rational(lam, pinv)
            terms += 1
        drift = _prod(spec.q) * _prod(spec.p)
    else:
        for lam in _box_partitions(u, n):
            total += sp_det(lam, spec.q)
            terms += 1
        drift = _prod(spec.q)
    return ExactCdf(drift**u * norm * total, norm, terms)


def cdf_geom_baik_rains(spec: GeomEnvSpec, u) -> ExactCdf:
    """The same law written as a single Schur sum.

    Flat: a sum of Schur polynomials at doubled partitions in the 2N
    variables (q, reversed p).  Restricted: a sum of products
    s_lam(q) * s_lam(q, 1).  No such rewriting is available for the
    half-flat geometry.  Agreement with :func:`cdf_geom` is an exact
    rational identity, checked term count and all in the tests.
    """
    if not isinstance(spec, GeomEnvSpec):
        raise TypeError("spec must be a GeomEnvSpec")
    if spec.geometry == "half-flat":
        raise ValueError("no single-Schur form in the half-flat geometry")
    u = _check_u(u)
    norm = _atom(spec)
    total = Fraction(0)
    terms = 0
    if spec.geometry == "flat":
        xs = spec.q + tuple(reversed(spec.p))
        for lam in _box_partitions(u, 2 * spec.N):
            total += _schur_rational(tuple(2 * v for v in lam), xs)
            terms += 1
    else:
        xs1 = spec.q + (Fraction(1),)
        for lam in _box_partitions(u, spec.N):
            total += _schur_rational(lam, spec.q) * _schur_rational(lam, xs1)
            terms += 1
    return ExactCdf(norm * total, norm, terms)


def _prod(vals):
    out = Fraction(1)
    for v in vals:
        out *= v
    return out


# ---------------------------------------------------------------------------
# exponential environments: determinant and Pfaffian ratios
#
# Entries are built as two-variable Taylor jets around the (grouped)
# rates so that coinciding rates cost nothing extra: the entry for the
# k-th member of a group carries the k-th Taylor coefficient, and the
# determinant ratio is unchanged because numerator and denominator
# undergo the same row and column operations in the limit.


class _Jet:
    """Truncated Taylor expansion in two increments dz, dw.

    Stores coefficients c[r][s] of dz^r dw^s up to a fixed shape.  Only
    ring operations and scaling are needed; composition with smooth
    primitives happens in _jet_of, where the inner argument is always a
    linear form in (dz, dw).
    """

    __slots__ = ("c",)

    def __init__(self, c):
        self.c = c

    def __add__(self, other):
        return _Jet(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.c, other.c)
            ]
        )

    def __sub__(self, other):
        return _Jet(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.c, other.c)
            ]
        )

    def __mul__(self, other):
        if not isinstance(other, _Jet):
            return _Jet([[other * v for v in row] for row in self.c])
        R = len(self.c)
        S = len(self.c[0])
        out = [[0.0] * S for _ in range(R)]
        for r1 in range(R):
            for s1 in range(S):
                a = self.c[r1][s1]
                if a == 0.0:
                    continue
                for r2 in range(R - r1):
                    for s2 in range(S - s1):
                        out[r1 + r2][s1 + s2] += a * other.c[r2][s2]
        return _Jet(out)

    __rmul__ = __mul__


def _jet_linear(v, pz, pw, R, S):
    c = [[0.0] * (S + 1) for _ in range(R + 1)]
    c[0][0] = v
    if R >= 1:
        c[1][0] = pz
    if S >= 1:
        c[0][1] = pw
    return _Jet(c)


def _jet_of(dfun, y, pz, pw, R, S):
    """Jet of f(y + pz*dz + pw*dw) from the derivative provider dfun,
    where dfun(m, y) = f^(m)(y)."""
    c = [[0.0] * (S + 1) for _ in range(R + 1)]
    for r in range(R + 1):
        for s in range(S + 1):
            c[r][s] = (
                dfun(r + s, y)
                * pz**r
                * pw**s
                / (math.factorial(r) * math.factorial(s))
            )
    return _Jet(c)


def _d_exp(m, y):
    return math.exp(y)


def _d_recip(m, y):
    return (-1.0) ** m * math.factorial(m) / y ** (m + 1)


def _d_em1r(m, y):
    """m-th derivative of (1 - e^-y)/y, entire with series
    sum_k (-y)^k/(k+1)!."""
    if abs(y) < 1.5:
        term = (-1.0) ** m / (m + 1.0)
        total = term
        for k in range(m, m + 60):
            term *= -y * (k + 1) / ((k + 1 - m) * (k + 2))
            total += term
            if abs(term) <= 1e-24 * max(abs(total), 1e-30):
                break
        return total
    total = 0.0
    for j in range(m + 1):
        a = -math.expm1(-y) if j == 0 else -((-1.0) ** j) * math.exp(-y)
        b = (-1.0) ** (m - j) * math.factorial(m - j) * y ** (-(m - j + 1))
        total += math.comb(m, j) * a * b
    return total


def _d_sinhc(m, y):
    """m-th derivative of sinh(y)/y, entire with series
    sum_k y^(2k)/(2k+1)!."""
    if abs(y) < 1.5:
        total = 0.0
        for k in range((m + 1) // 2, (m + 1) // 2 + 40):
            e = 2 * k - m
            term = y**e / (math.factorial(e) * (2 * k + 1))
            total += term
            if abs(term) <= 1e-24 * max(abs(total), 1e-30):
                break
        return total
    total = 0.0
    for j in range(m + 1):
        a = math.sinh(y) if j % 2 == 0 else math.cosh(y)
        b = (-1.0) ** (m - j) * math.factorial(m - j) * y ** (-(m - j + 1))
        total += math.comb(m, j) * a * b
    return total


def _sq(jet):
    return jet * jet


def _fh_jet(z, w, u, R, S):
    # int_0^u (e^{zx}-e^{-zx})(e^{wx}-e^{-wx}) dx, damped by e^{-u(z+w)}:
    # 2u * [ h(2u(z+w)) - e^{-u(z+w)} sinhc(u(z-w)) ] with h = _d_em1r's f
    j1 = _jet_of(_d_em1r, 2 * u * (z + w), 2 * u, 2 * u, R, S)
    j2 = _jet_of(_d_exp, -u * (z + w), -u, -u, R, S)
    j3 = _jet_of(_d_sinhc, u * (z - w), u, -u, R, S)
    return (j1 - j2 * j3) * (2 * u)


def _hh_jet(z, w, u, R, S):
    # int_0^u (e^{zx}-e^{-zx}) e^{wx} dx, damped by e^{-u(z+w)}:
    # u * [ h(u(z+w)) - e^{-2uz} h(u(w-z)) ]
    j1 = _jet_of(_d_em1r, u * (z + w), u, u, R, S)
    j2 = _jet_of(_d_exp, -2 * u * z, -2 * u, 0.0, R, S)
    j3 = _jet_of(_d_em1r, u * (w - z), -u, u, R, S)
    return (j1 - j2 * j3) * u


def _cauchy_jet(z, w, R, S):
    return _jet_of(_d_recip, z + w, 1.0, 1.0, R, S)


def _i_jet(first, second, u, R, S):
    """Jet of I(z, w) = int_0^u phi_w(y) G_z(y) dy where
    phi_a(x) = a e^{-ua}(e^{ax}-e^{-ax}) and G_z is the antiderivative of
    phi_z vanishing at 0.  Arguments are (value, dz-slope, dw-slope)
    triples so the same code serves I(z, w) and I(w, z)."""
    (zv, za, zb) = first
    (wv, wa, wb) = second
    sv, sa, sb = zv + wv, za + wa, zb + wb
    dv, da, db = wv - zv, wa - za, wb - zb
    E = _jet_of(_d_exp, -u * sv, -u * sa, -u * sb, R, S)
    W = _jet_linear(wv, wa, wb, R, S)
    t1 = _jet_linear(sv, sa, sb, R, S) * _sq(
        _jet_of(_d_sinhc, u * sv / 2, u * sa / 2, u * sb / 2, R, S)
    )
    t2 = _jet_linear(dv, da, db, R, S) * _sq(
        _jet_of(_d_sinhc, u * dv / 2, u * da / 2, u * db / 2, R, S)
    )
    t3 = (2.0 * _jet_linear(wv, wa, wb, R, S)) * _sq(
        _jet_of(_d_sinhc, u * wv / 2, u * wa / 2, u * wb / 2, R, S)
    )
    return (u * u) * (W * E * (t1 + t2 - t3))


def _phi_jet(z, w, u, R, S):
    # sign-weighted double integral of phi_z, phi_w over [0,u]^2
    zi = (z, 1.0, 0.0)
    wj = (w, 0.0, 1.0)
    return _i_jet(zi, wj, u, R, S) - _i_jet(wj, zi, u, R, S)


def _border_jet(z, u, R):
    # int_0^u phi_z = (1 - e^{-uz})^2, as (uz * h(uz))^2
    j = _jet_linear(u * z, u, 0.0, R, 0) * _jet_of(_d_em1r, u * z, u, 0.0, R, 0)
    return j * j


def _schur_pf_jet(z, w, R, S):
    return _jet_linear(w - z, -1.0, 1.0, R, S) * _jet_of(
        _d_recip, z + w, 1.0, 1.0, R, S
    )


def _taylor_orders(values, rel_tol=1e-6):
    """Group nearly coinciding parameters and assign Taylor orders.

    Returns (reps, orders): reps[i] is the mean of i's group, orders[i]
    the index of i within its group in position order.  A group's rows
    or columns then carry successive Taylor coefficients, the limit the
    divided differences of the entry function take at equal arguments.
    """
    idx = sorted(range(len(values)), key=lambda i: values[i])
    scale = max(abs(v) for v in values)
    tol = rel_tol * (scale if scale > 0 else 1.0)
    reps = [0.0] * len(values)
    orders = [0] * len(values)

    def flush(group):
        center = sum(values[i] for i in group) / len(group)
        for k, i in enumerate(sorted(group)):
            reps[i] = center
            orders[i] = k

    group = [idx[0]]
    for i in idx[1:]:
        if values[i] - values[group[-1]] <= tol:
            group.append(i)
        else:
            flush(group)
            group = [i]
    flush(group)
    return reps, orders


def _det_ratio(alpha, beta, entry_jet):
    arep, aord = _taylor_orders(list(alpha))
    brep, bord = _taylor_orders(list(beta))
    n = len(alpha)
    num = []
    den = []
    for i in range(n):
        nrow = []
        drow = []
        for j in range(n):
            r, s = aord[i], bord[j]
            nrow.append(entry_jet(arep[i], brep[j], r, s).c[r][s])
            drow.append(_cauchy_jet(arep[i], brep[j], r, s).c[r][s])
        num.append(nrow)
        den.append(drow)
    return det(num) / det(den)


def _pf_ratio(alpha, u):
    rep, order = _taylor_orders(list(alpha))
    n = len(alpha)
    size = n + (n % 2)
    num = [[0.0] * size for _ in range(size)]
    den = [[0.0] * size for _ in range(size)]
    for i in range(n):
        for j in range(i + 1, n):
            r, s = order[i], order[j]
            v = _phi_jet(rep[i], rep[j], u, r, s).c[r][s]
            num[i][j], num[j][i] = v, -v
            v = _schur_pf_jet(rep[i], rep[j], r, s).c[r][s]
            den[i][j], den[j][i] = v, -v
        if n % 2:
            r = order[i]
            v = _border_jet(rep[i], u, r).c[r][0]
            num[i][n], num[n][i] = v, -v
            v = 1.0 if r == 0 else 0.0
            den[i][n], den[n][i] = v, -v
    return pfaffian(num) / pfaffian(den)


def cdf_exp(spec: ExpEnvSpec, u) -> float:
    """P(point-to-line passage time <= u) for exponential weights.

    Flat and half-flat laws are ratios det(H_u)/det(C) with C the Cauchy
    matrix 1/(alpha_i + beta_j); the restricted law is a ratio of
    Pfaffians, with a bordering column when N is odd.  Coinciding rates
    are taken as the removable limit.
    """
    if not isinstance(spec, ExpEnvSpec):
        raise TypeError("spec must be an ExpEnvSpec")
    u = float(u)
    if not (u > 0 and math.isfinite(u)):
        raise ValueError("u must be positive")
    if spec.geometry == "flat":
        return _det_ratio(
            spec.alpha, spec.beta, lambda z, w, r, s: _fh_jet(z, w, u, r, s)
        )
    if spec.geometry == "half-flat":
        return _det_ratio(
            spec.alpha, spec.beta, lambda z, w, r, s: _hh_jet(z, w, u, r, s)
        )
    return _pf_ratio(spec.alpha, u)


# ---------------------------------------------------------------------------
# small exact linear algebra helpers


def pfaffian(a):
    """Pfaffian of an even-order skew-symmetric matrix by congruence
    elimination with greedy pivoting.

    A zero pivot column means a singular matrix, so the Pfaffian is
    returned as exactly 0.0.  Odd order is rejected: the formulas that
    need an odd family border it with an explicit extra column first,
    and that column is only known at the call site.
    """
    m = [[float(v) for v in row] for row in a]
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    if n % 2:
        raise ValueError("Pfaffian needs even order; border odd families first")
    if n == 0:
        return 1.0
    scale = max(abs(v) for row in m for v in row)
    for i in range(n):
        for j in range(i, n):
            if abs(m[i][j] + m[j][i]) > 1e-8 * max(scale, 1.0):
                raise ValueError("matrix is not skew-symmetric")
    result = 1.0
    for k in range(0, n, 2):
        pivot = max(range(k + 1, n), key=lambda j: abs(m[k][j]))
        if m[k][pivot] == 0.0:
            return 0.0
        if pivot != k + 1:
            m[pivot], m[k + 1] = m[k + 1], m[pivot]
            for row in m:
                row[pivot], row[k + 1] = row[k + 1], row[pivot]
            result = -result
        piv = m[k][k + 1]
        result *= piv
        for i in range(k + 2, n):
            f = m[k][i] / piv
            if f != 0.0:
                for j in range(n):
                    m[i][j] -= f * m[k + 1][j]
                for j in range(n):
                    m[j][i] -= f * m[j][k + 1]
    return result


def cauchy_det(alpha: Sequence, beta: Sequence):
    """det(1/(alpha_i + beta_j)) in closed product form.  Exact when the
    inputs are Fractions."""
    n = len(alpha)
    if len(beta) != n:
        raise ValueError("alpha and beta must have equal length")
    num = 1
    for i in range(n):
        for j in range(i + 1, n):
            num *= (alpha[i] - alpha[j]) * (beta[i] - beta[j])
    den = 1
    for a in alpha:
        for b in beta:
            s = a + b
            if s == 0:
                raise ValueError("alpha_i + beta_j must not vanish")
            den *= s
    return num / den


def schur_pfaffian(alpha: Sequence):
    """Pf of the matrix (alpha_j - alpha_i)/(alpha_j + alpha_i), bordered
    with a column of ones when the order is odd: the closed product
    prod_{i<j} (alpha_j - alpha_i)/(alpha_j + alpha_i), either parity."""
    out = 1
    n = len(alpha)
    for i in range(n):
        for j in range(i + 1, n):
            s = alpha[j] + alpha[i]
            if s == 0:
                raise ValueError("alpha_i + alpha_j must not vanish")
            out *= (alpha[j] - alpha[i]) / s
    return out


# ---------------------------------------------------------------------------
# quadrature witnesses for the two summation identities


def _gauss_nodes(a, b, order):
    x, w = numpy.polynomial.legendre.leggauss(order)
    half = (b - a) / 2.0
    mid = (a + b) / 2.0
    return [mid + half * xi for xi in x], [half * wi for wi in w]


def cauchy_binet_check(
    f: Sequence[Callable[[float], float]],
    g: Sequence[Callable[[float], float]],
    interval,
    n: int | None = None,
    order: int = 24,
) -> float:
    """Residual of the identity turning an n-fold integral of a product
    of two determinants into one determinant of pairings:

        (1/n!) int det(f_j(x_i)) det(g_j(x_i)) dx = det(int f_i g_j).

    Both sides are evaluated by Gauss-Legendre quadrature on the given
    interval; the return value is |lhs - rhs|.
    """
    if n is None:
        n = len(f)
    if len(f) != n or len(g) != n:
        raise ValueError("need n functions on each side")
    a, b = float(interval[0]), float(interval[1])
    xs, ws = _gauss_nodes(a, b, order)
    F = [[fj(x) for fj in f] for x in xs]
    G = [[gj(x) for gj in g] for x in xs]
    lhs = 0.0
    idx = [0] * n

    def walk(depth):
        nonlocal lhs
        if depth == n:
            wt = 1.0
            for i in idx:
                wt *= ws[i]
            lhs += wt * det([F[i] for i in idx]) * det([G[i] for i in idx])
            return
        for i in range(len(xs)):
            idx[depth] = i
            walk(depth + 1)

    walk(0)
    lhs /= math.factorial(n)
    gram = [
        [sum(w * F[m][i] * G[m][j] for m, w in enumerate(ws)) for j in range(n)]
        for i in range(n)
    ]
    return abs(lhs - det(gram))


def de_bruijn_check(
    phi: Sequence[Callable[[float], float]],
    interval,
    n: int | None = None,
    order: int = 24,
) -> float:
    """Residual of the identity turning an ordered integral of one
    determinant into a Pfaffian:

        int_{x_1 <= ... <= x_n} det(phi_j(x_i)) dx = Pf(Phi),

    with Phi(i,j) the sign-weighted double integral of phi_i, phi_j and,
    for odd n, a bordering column of plain integrals.  The double
    integral is split at the diagonal before quadrature; integrating
    across the sign jump does not converge.
    """
    if n is None:
        n = len(phi)
    if len(phi) != n:
        raise ValueError("need n functions")
    a, b = float(interval[0]), float(interval[1])

    def level(lo, rows):
        xs, ws = _gauss_nodes(lo, b, order)
        total = 0.0
        for x, wt in zip(xs, ws):
            vals = [pf(x) for pf in phi]
            if len(rows) + 1 == n:
                total += wt * det(rows + [vals])
            else:
                total += wt * level(x, rows + [vals])
        return total

    lhs = level(a, [])

    def pair(i, j):
        xs, ws = _gauss_nodes(a, b, order)
        total = 0.0
        for x, wt in zip(xs, ws):
            ys, vs = _gauss_nodes(x, b, order)
            above = sum(v * phi[j](y) for y, v in zip(ys, vs))
            ys, vs = _gauss_nodes(a, x, order)
            below = sum(v * phi[j](y) for y, v in zip(ys, vs))
            total += wt * phi[i](x) * (above - below)
        return total

    size = n + (n % 2)
    mat = [[0.0] * size for _ in range(size)]
    for i in range(n):
        for j in range(i + 1, n):
            v = pair(i, j)
            mat[i][j], mat[j][i] = v, -v
        if n % 2:
            xs, ws = _gauss_nodes(a, b, order)
            v = sum(wt * phi[i](x) for x, wt in zip(xs, ws))
            mat[i][n], mat[n][i] = v, -v
    return abs(lhs - pfaffian(mat))


# ---------------------------------------------------------------------------
# coupling the two weight families


def exp_limit_check(spec: ExpEnvSpec, deltas, u) -> tuple:
    """Deviation of the geometric law from its exponential limit.

    With q_i = exp(-delta * alpha_i) (and p_j likewise from beta_j),
    delta times the geometric passage time converges in law to the
    exponential one, so |cdf_geom at floor(u/delta) - cdf_exp at u| must
    shrink as delta does.  Returns one absolute deviation per delta,
    in the order given.
    """
    if not isinstance(spec, ExpEnvSpec):
        raise TypeError("spec must be an ExpEnvSpec")
    u = float(u)
    if not u > 0:
        raise ValueError("u must be positive")
    deltas = tuple(float(d) for d in deltas)
    if not all(d > 0 for d in deltas):
        raise ValueError("deltas must be positive")
    target = cdf_exp(spec, u)
    out = []
    for d in deltas:
        q = tuple(Fraction(math.exp(-d * a)) for a in spec.alpha)
        if spec.geometry == "restricted":
            gspec = GeomEnvSpec("restricted", spec.N, q)
        else:
            p = tuple(Fraction(math.exp(-d * b)) for b in spec.beta)
            gspec = GeomEnvSpec(spec.geometry, spec.N, q, p)
        # nudge before flooring: u/d sits at an integer when u is a
        # multiple of d, and float division may land a hair below it
        level = int(math.floor(u / d + 1e-9))
        out.append(abs(float(cdf_geom(gspec, level).value) - target))
    return tuple(out)
