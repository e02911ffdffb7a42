"""Exact point-to-line laws: rational formulas against complete
enumeration, determinant and Pfaffian ratios against the ordered-integral
route, and the small linear algebra helpers behind both."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pointline.lpp import (
    ExactCdf,
    ExpEnvSpec,
    GeomEnvSpec,
    cauchy_binet_check,
    cauchy_det,
    cdf_exp,
    cdf_geom,
    cdf_geom_baik_rains,
    de_bruijn_check,
    exp_limit_check,
    pfaffian,
    schur_pfaffian,
    _schur_rational,
)
from pointline.schur import det, schur_det

from _support import (
    brute_geom_cdf,
    gauss_nodes,
    seeded_rng,
    simplex_schur_cdf,
)

F = Fraction


def random_params(rng, n):
    out = []
    while len(out) < n:
        v = F(rng.randint(1, 19), 20) + F(rng.randint(0, 9), 200)
        if 0 < v < 1 and v not in out:
            out.append(v)
    return tuple(out)


# ---------------------------------------------------------------------------
# geometric weights: exact rational route


def test_flat_single_zero_level_is_zero_weight_atom():
    spec = GeomEnvSpec("flat", 1, (F(1, 2),), (F(1, 3),))
    got = cdf_geom(spec, 0)
    # three sites: q1*p1, q1*q1, p1*p1
    assert got.value == (1 - F(1, 6)) * (1 - F(1, 4)) * (1 - F(1, 9))
    assert got.value == got.normalization
    assert got.terms == 1


@pytest.mark.parametrize("geometry", ["flat", "half-flat", "restricted"])
def test_cdf_geom_matches_complete_enumeration(geometry):
    q = (F(1, 2), F(1, 3))
    p = () if geometry == "restricted" else (F(1, 4), F(1, 5))
    spec = GeomEnvSpec(geometry, 2, q, p)
    for u in range(4):
        assert cdf_geom(spec, u).value == brute_geom_cdf(geometry, q, p, u)


def test_flat_enumeration_frozen_value():
    # guards both routes against silent drift
    q = (F(1, 2), F(1, 3))
    p = (F(1, 4), F(1, 5))
    frozen = F(46646824638156743, 47775744000000000)
    assert brute_geom_cdf("flat", q, p, 3) == frozen
    assert cdf_geom(GeomEnvSpec("flat", 2, q, p), 3).value == frozen


@pytest.mark.parametrize("geometry", ["flat", "half-flat", "restricted"])
def test_cdf_geom_single_row_matches_enumeration(geometry):
    q = (F(2, 5),)
    p = () if geometry == "restricted" else (F(3, 7),)
    spec = GeomEnvSpec(geometry, 1, q, p)
    for u in range(6):
        assert cdf_geom(spec, u).value == brute_geom_cdf(geometry, q, p, u)


def test_cdf_geom_monotone_saturating():
    spec = GeomEnvSpec("flat", 2, (F(1, 3), F(1, 4)), (F(1, 5), F(1, 6)))
    vals = [cdf_geom(spec, u).value for u in range(13)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert vals[-1] > F(999999, 1000000)


def test_cdf_geom_symmetric_in_parameters():
    rng = seeded_rng("lpp-symmetry")
    q = random_params(rng, 3)
    p = random_params(rng, 3)
    spec = GeomEnvSpec("flat", 3, q, p)
    ref = cdf_geom(spec, 2).value
    shuffled = GeomEnvSpec("flat", 3, (q[2], q[0], q[1]), (p[1], p[2], p[0]))
    assert cdf_geom(shuffled, 2).value == ref
    rspec = GeomEnvSpec("restricted", 3, q)
    rshuf = GeomEnvSpec("restricted", 3, (q[1], q[2], q[0]))
    assert cdf_geom(rspec, 3).value == cdf_geom(rshuf, 3).value


@pytest.mark.parametrize("geometry", ["flat", "restricted"])
def test_single_schur_form_agrees_exactly(geometry):
    rng = seeded_rng("lpp-baik-rains-" + geometry)
    for N in (1, 2, 3):
        q = random_params(rng, N)
        p = () if geometry == "restricted" else random_params(rng, N)
        spec = GeomEnvSpec(geometry, N, q, p)
        for u in range(5):
            two = cdf_geom(spec, u)
            one = cdf_geom_baik_rains(spec, u)
            assert two.value == one.value
            assert two.normalization == one.normalization


def test_single_schur_form_sums_different_terms():
    # same law, genuinely different summation: C(u+2N,2N) vs C(u+N,N)
    spec = GeomEnvSpec("flat", 2, (F(1, 2), F(1, 3)), (F(1, 4), F(1, 5)))
    assert cdf_geom(spec, 2).terms == 6
    assert cdf_geom_baik_rains(spec, 2).terms == 15


def test_single_schur_form_rejects_half_flat():
    spec = GeomEnvSpec("half-flat", 1, (F(1, 2),), (F(1, 3),))
    with pytest.raises(ValueError):
        cdf_geom_baik_rains(spec, 1)


def test_repeated_parameters_stay_exact():
    # equal q's push the single-Schur route through the confluent evaluator
    spec = GeomEnvSpec("flat", 2, (F(1, 3), F(1, 3)), (F(1, 4), F(1, 4)))
    for u in range(3):
        assert cdf_geom(spec, u).value == cdf_geom_baik_rains(spec, u).value
        assert cdf_geom(spec, u).value == brute_geom_cdf(
            "flat", spec.q, spec.p, u
        )


@settings(max_examples=30, deadline=None)
@given(
    lam=st.lists(st.integers(min_value=0, max_value=4), min_size=0, max_size=3),
    n1=st.integers(min_value=1, max_value=6),
    n2=st.integers(min_value=1, max_value=10),
    n3=st.integers(min_value=1, max_value=12),
)
def test_integer_bialternant_matches_divided_differences(lam, n1, n2, n3):
    lam = tuple(sorted(lam, reverse=True))
    # coprime denominators keep the three variables distinct
    xs = (F(n1, 7), F(n2, 11), F(n3, 13))
    assert _schur_rational(lam, xs) == schur_det(lam, list(xs))


def test_cdf_geom_validates():
    with pytest.raises(ValueError):
        GeomEnvSpec("diagonal", 1, (F(1, 2),), (F(1, 3),))
    with pytest.raises(ValueError):
        GeomEnvSpec("flat", 2, (F(1, 2),), (F(1, 3), F(1, 4)))
    with pytest.raises(ValueError):
        GeomEnvSpec("restricted", 1, (F(1, 2),), (F(1, 3),))
    with pytest.raises(ValueError):
        GeomEnvSpec("flat", 1, (F(3, 2),), (F(1, 3),))
    spec = GeomEnvSpec("flat", 1, (F(1, 2),), (F(1, 3),))
    with pytest.raises(ValueError):
        cdf_geom(spec, -1)
    with pytest.raises(ValueError):
        cdf_geom(spec, 1.5)
    with pytest.raises(TypeError):
        cdf_geom("flat", 1)


def test_exact_cdf_validates():
    with pytest.raises(ValueError):
        ExactCdf(F(3, 2), F(1, 2), 1)
    with pytest.raises(ValueError):
        ExactCdf(F(1, 2), F(0), 1)
    with pytest.raises(ValueError):
        ExactCdf(F(1, 2), F(1, 2), 0)


# ---------------------------------------------------------------------------
# exponential weights: determinant and Pfaffian ratios


def test_exp_flat_equal_rates_closed_form():
    for g in (0.25, 0.5, 1.0):
        spec = ExpEnvSpec("flat", 1, (g,), (g,))
        for k in range(1, 51):
            u = 0.1 * k
            want = 1 - 4 * g * u * math.exp(-2 * g * u) - math.exp(-4 * g * u)
            assert abs(cdf_exp(spec, u) - want) < 1e-12


def test_exp_flat_equal_rates_spot_value():
    spec = ExpEnvSpec("flat", 1, (0.5,), (0.5,))
    want = 1 - 2 * math.exp(-1) - math.exp(-2)
    assert abs(cdf_exp(spec, 1.0) - want) < 1e-14


@pytest.mark.parametrize("geometry", ["flat", "half-flat"])
def test_exp_single_matches_defining_integral(geometry):
    a, b, u = 0.7, 1.3, 1.4
    spec = ExpEnvSpec(geometry, 1, (a,), (b,))
    xs, ws = gauss_nodes(0.0, u, 40)
    total = 0.0
    for x, w in zip(xs, ws):
        row = math.exp(a * x) - math.exp(-a * x)
        col = math.exp(b * x) - math.exp(-b * x) if geometry == "flat" else math.exp(b * x)
        total += w * row * col
    want = (a + b) * math.exp(-u * (a + b)) * total
    assert abs(cdf_exp(spec, u) - want) < 1e-13


def test_exp_restricted_single_closed_form():
    for a in (0.4, 1.0, 2.3):
        spec = ExpEnvSpec("restricted", 1, (a,))
        for u in (0.5, 1.0, 3.0):
            want = (1 - math.exp(-u * a)) ** 2
            assert abs(cdf_exp(spec, u) - want) < 1e-13


@pytest.mark.parametrize(
    "geometry,alpha,beta",
    [
        ("flat", (0.8, 1.7), (1.1, 0.6)),
        ("half-flat", (0.8, 1.7), (1.1, 0.6)),
        ("restricted", (0.8, 1.7), ()),
    ],
)
def test_exp_matches_ordered_integral(geometry, alpha, beta):
    spec = ExpEnvSpec(geometry, 2, alpha, beta)
    for u in (0.7, 1.2, 2.0):
        got = cdf_exp(spec, u)
        ref = simplex_schur_cdf(geometry, alpha, beta, u)
        assert abs(got - ref) < 1e-6 * abs(ref)


def test_exp_restricted_odd_order_matches_ordered_integral():
    # odd N exercises the bordered Pfaffian
    alpha = (0.8, 1.7, 1.1)
    spec = ExpEnvSpec("restricted", 3, alpha)
    got = cdf_exp(spec, 1.2)
    ref = simplex_schur_cdf("restricted", alpha, (), 1.2, order=32)
    assert abs(got - ref) < 1e-6 * abs(ref)


def test_exp_confluent_is_removable_limit():
    cases = [
        ("flat", (1.0, 1.0), (0.8, 0.8)),
        ("half-flat", (1.0, 1.0), (0.8, 0.8)),
        ("restricted", (1.0, 1.0, 1.0), ()),
    ]
    for geometry, alpha, beta in cases:
        exact = ExpEnvSpec(geometry, len(alpha), alpha, beta)
        nudged = ExpEnvSpec(
            geometry,
            len(alpha),
            tuple(a + k * 3e-10 for k, a in enumerate(alpha)),
            tuple(b - k * 2e-10 for k, b in enumerate(beta)),
        )
        v1 = cdf_exp(exact, 1.5)
        v2 = cdf_exp(nudged, 1.5)
        assert 0 < v1 < 1
        assert abs(v1 - v2) < 1e-8


def test_exp_confluent_continuity_at_split():
    # values just outside the grouping tolerance stay continuous too
    base = ExpEnvSpec("flat", 2, (1.0, 1.0), (0.8, 0.8))
    split = ExpEnvSpec("flat", 2, (1.0, 1.0001), (0.8, 0.8))
    assert abs(cdf_exp(base, 1.5) - cdf_exp(split, 1.5)) < 1e-3


def test_exp_increasing_in_u_various_sizes():
    for geometry, n in [("flat", 4), ("half-flat", 4), ("restricted", 4)]:
        beta = () if geometry == "restricted" else (1.0,) * n
        spec = ExpEnvSpec(geometry, n, (1.0,) * n, beta)
        grid = [0.5 * k for k in range(1, 16)]
        vals = [cdf_exp(spec, u) for u in grid]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert -1e-12 < vals[0] < vals[-1] < 1 + 1e-12


def test_exp_spec_validates():
    with pytest.raises(ValueError):
        ExpEnvSpec("flat", 1, (-1.0,), (1.0,))
    with pytest.raises(ValueError):
        ExpEnvSpec("restricted", 1, (1.0,), (1.0,))
    with pytest.raises(ValueError):
        ExpEnvSpec("flat", 2, (1.0,), (1.0, 2.0))
    spec = ExpEnvSpec("flat", 1, (1.0,), (1.0,))
    with pytest.raises(ValueError):
        cdf_exp(spec, 0.0)
    with pytest.raises(TypeError):
        cdf_exp((1.0,), 1.0)


# ---------------------------------------------------------------------------
# linear algebra helpers


def test_pfaffian_order_two():
    assert pfaffian([[0.0, 2.5], [-2.5, 0.0]]) == 2.5


def test_pfaffian_rejects_bad_input():
    with pytest.raises(ValueError):
        pfaffian([[0.0, 1.0], [-1.0, 0.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        pfaffian([[0.0] * 3 for _ in range(3)])
    with pytest.raises(ValueError):
        pfaffian([[0.0, 1.0], [1.0, 0.0]])


def test_pfaffian_singular_is_zero():
    assert pfaffian([[0.0] * 4 for _ in range(4)]) == 0.0


def test_pfaffian_squares_to_determinant():
    rng = seeded_rng("lpp-pfaffian")
    for n in (2, 4, 6, 8):
        m = [[0.0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                v = rng.uniform(-2, 2)
                m[i][j], m[j][i] = v, -v
        pf = pfaffian(m)
        assert abs(pf * pf - det([row[:] for row in m])) < 1e-10


def test_cauchy_det_closed_form():
    assert cauchy_det((F(1), F(2)), (F(1), F(2))) == F(1, 72)
    rng = seeded_rng("lpp-cauchy")
    alpha = [rng.uniform(0.5, 2.0) for _ in range(3)]
    beta = [rng.uniform(0.5, 2.0) for _ in range(3)]
    direct = det([[1.0 / (a + b) for b in beta] for a in alpha])
    assert abs(cauchy_det(alpha, beta) - direct) < 1e-12
    with pytest.raises(ValueError):
        cauchy_det((1.0, -1.0), (1.0, 1.0))
    with pytest.raises(ValueError):
        cauchy_det((1.0,), (1.0, 2.0))


def test_schur_pfaffian_closed_form():
    assert schur_pfaffian((F(1), F(2))) == F(1, 3)
    # even order: matches the Pfaffian of the matrix itself
    alpha = (0.5, 1.0, 1.7, 2.6)
    m = [
        [(b - a) / (b + a) for b in alpha]
        for a in alpha
    ]
    assert abs(schur_pfaffian(alpha) - pfaffian(m)) < 1e-12
    # odd order: matches the Pfaffian after bordering with ones
    alpha = (0.5, 1.3, 2.1)
    m = [[(b - a) / (b + a) for b in alpha] + [1.0] for a in alpha]
    m.append([-1.0, -1.0, -1.0, 0.0])
    assert abs(schur_pfaffian(alpha) - pfaffian(m)) < 1e-12


def test_cauchy_binet_identity():
    res = cauchy_binet_check(
        [lambda x: math.exp(-x)], [lambda x: math.exp(-2 * x)], (0.0, 1.0)
    )
    assert res < 1e-12
    res = cauchy_binet_check(
        [lambda x: math.exp(-x), lambda x: x * math.exp(-x)],
        [lambda x: math.exp(-2 * x), lambda x: math.cos(x)],
        (0.0, 1.0),
    )
    assert res < 1e-10
    with pytest.raises(ValueError):
        cauchy_binet_check([lambda x: x], [lambda x: x], (0.0, 1.0), n=2)


def test_de_bruijn_identity():
    phi = [
        lambda x: math.exp(-x),
        lambda x: math.sin(x),
        lambda x: x * math.exp(-x),
    ]
    assert de_bruijn_check(phi[:2], (0.0, 1.5)) < 1e-10
    # odd count exercises the bordered column
    assert de_bruijn_check(phi, (0.0, 1.5)) < 1e-9
    with pytest.raises(ValueError):
        de_bruijn_check(phi, (0.0, 1.0), n=2)


# ---------------------------------------------------------------------------
# coupling the two weight families


@pytest.mark.parametrize(
    "geometry,alpha,beta",
    [("restricted", (1.0,), ()), ("flat", (1.0,), (0.7,))],
)
def test_exp_limit_deviations_decrease(geometry, alpha, beta):
    spec = ExpEnvSpec(geometry, 1, alpha, beta)
    devs = exp_limit_check(spec, (0.2, 0.1, 0.05), 2.0)
    assert len(devs) == 3
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 0.05


def test_exp_limit_validates():
    spec = ExpEnvSpec("flat", 1, (1.0,), (1.0,))
    with pytest.raises(ValueError):
        exp_limit_check(spec, (0.1, -0.2), 1.0)
    with pytest.raises(ValueError):
        exp_limit_check(spec, (0.1,), 0.0)
    with pytest.raises(TypeError):
        exp_limit_check("flat", (0.1,), 1.0)
