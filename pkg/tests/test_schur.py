"""Schur function routes against each other and against closed forms."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from pointline.arrays import Partition, partitions_in_box
from pointline.schur import (
    cauchy_check,
    schur_cont,
    schur_det,
    schur_gt,
    sp_cont,
    sp_det,
    sp_gt,
)

F = Fraction


# ---------------------------------------------------------------------------
# frozen values, both discrete routes


def test_schur_21_at_2_3():
    assert schur_gt((2, 1), [F(2), F(3)]) == 30
    assert schur_det((2, 1), [F(2), F(3)]) == 30


def test_schur_confluent_pair():
    # limit of e_1 = a1 + a2 as a2 -> a1
    assert schur_det([1, 0], [F(2), F(2)]) == 4
    assert schur_det([1, 0], [2.0, 2.0]) == pytest.approx(4.0)


def test_schur_nearly_equal_floats_snap():
    exact = schur_det([3, 1], [2.0, 2.0])
    assert schur_det([3, 1], [2.0, 2.0 + 1e-9]) == pytest.approx(exact, rel=1e-6)


def test_sp_rank_one():
    # a + 1/a at a = 2
    assert sp_gt((1,), [F(2)]) == F(5, 2)
    assert sp_det((1,), [F(2)]) == F(5, 2)


def test_empty_partition_is_one():
    assert schur_gt((), [F(1, 2), F(3)]) == 1
    assert schur_det((), [F(1, 2), F(3)]) == 1
    assert sp_gt((), [F(1, 2), F(3, 4)]) == 1
    assert sp_det((), [F(1, 2), F(3, 4)]) == 1


def test_overlong_partition_is_zero():
    assert schur_gt((2, 1, 1), [F(2), F(3)]) == 0
    assert schur_det(Partition([2, 1, 1]), [F(2), F(3)]) == 0
    assert sp_det(Partition([1, 1]), [F(2)]) == 0


def test_laurent_shift():
    a = [F(2), F(3)]
    base = schur_det((2, 1), a)
    assert schur_det([3, 2], a) == 6 * base
    assert schur_det([1, 0], a) == schur_det([2, 1], a) / 6
    assert schur_det([0, -2], a) == schur_det([2, 0], a) / 36


def test_bad_inputs():
    with pytest.raises(ValueError):
        schur_det([1, 2], [F(2), F(3)])  # increasing exponents
    with pytest.raises(ValueError):
        sp_det((1,), [F(0)])
    with pytest.raises(ValueError):
        sp_gt((1,), [0])
    with pytest.raises(ValueError):
        sp_det((1, 1), [F(2), F(1, 2)])  # reciprocal pair
    with pytest.raises(ValueError):
        schur_det([0, -1], [F(0), F(2)])  # Laurent needs nonzero variables


# ---------------------------------------------------------------------------
# route agreement and Weyl symmetries


def _positive_fractions():
    return st.fractions(
        min_value=F(1, 5), max_value=F(5), max_denominator=6
    ).filter(lambda v: v != 0)


@st.composite
def _boxed_partition(draw, max_part=4, max_length=3):
    options = partitions_in_box(max_part, max_length)
    return draw(st.sampled_from(options))


@given(_boxed_partition(), st.lists(_positive_fractions(), min_size=1, max_size=3))
def test_gt_equals_det(lam, a):
    assert schur_gt(lam, a) == schur_det(lam, a)


@settings(deadline=None, max_examples=40)
@given(_boxed_partition(), st.lists(_positive_fractions(), min_size=1, max_size=3))
def test_sp_gt_equals_det(lam, a):
    try:
        expected = sp_det(lam, a)
    except ValueError:
        return  # a reciprocal pair was drawn
    assert sp_gt(lam, a) == expected


@given(
    _boxed_partition(),
    st.permutations(range(3)),
    st.lists(_positive_fractions(), min_size=3, max_size=3, unique=True),
)
def test_schur_symmetric_in_variables(lam, perm, a):
    assert schur_det(lam, [a[i] for i in perm]) == schur_det(lam, a)


@given(
    _boxed_partition(max_length=2),
    st.permutations(range(2)),
    st.lists(st.booleans(), min_size=2, max_size=2),
    st.lists(_positive_fractions(), min_size=2, max_size=2, unique=True),
)
def test_sp_weyl_invariance(lam, perm, flips, a):
    b = [a[i] for i in perm]
    b = [1 / v if flip else v for v, flip in zip(b, flips)]
    try:
        lhs = sp_det(lam, b)
        rhs = sp_det(lam, a)
    except ValueError:
        return
    assert lhs == rhs


# ---------------------------------------------------------------------------
# continuous forms


def test_cont_rank_one_closed_forms():
    a, x = 0.7, 1.3
    assert schur_cont([a], [x]) == pytest.approx(math.exp(a * x), rel=1e-14)
    assert sp_cont([a], [x]) == pytest.approx(
        (math.exp(a * x) - math.exp(-a * x)) / (2 * a), rel=1e-14
    )


def test_cont_rank_two_against_gt_integral():
    # independent quadrature over the single interlacing coordinate
    a1, a2 = 0.5, -0.3
    x1, x2 = 2.0, 1.0
    oracle, err = integrate.quad(
        lambda z: math.exp(a1 * z) * math.exp(a2 * (x1 + x2 - z)),
        x2,
        x1,
        epsabs=1e-13,
        epsrel=1e-13,
    )
    assert err < 1e-10
    value = schur_cont([a1, a2], [x1, x2])
    assert abs(value - oracle) / abs(oracle) < 1e-8


def test_sp_cont_rank_one_gt_integral():
    alpha, x = 0.8, 1.7
    oracle, _ = integrate.quad(
        lambda z: math.exp(alpha * (2 * z - x)), 0, x, epsabs=1e-13
    )
    assert sp_cont([alpha], [x]) == pytest.approx(oracle, rel=1e-10)


def test_cont_non_ordered_vanishes():
    assert schur_cont([0.5, 0.2], [1.0, 2.0]) == 0.0
    assert schur_cont([0.5, 0.2], [2.0, 2.0]) == 0.0
    assert sp_cont([0.5, 0.2], [2.0, 1.0, 0.5][:2][::-1]) == 0.0
    assert sp_cont([0.5, 0.2], [2.0, -1.0]) == 0.0
    assert sp_cont([0.5, 0.2], [2.0, 0.0]) == 0.0


def test_cont_all_equal_parameters():
    # rank 2 and 3 against the explicit equal-parameter determinants
    alpha, x = 0.4, [3.0, 1.5, 0.5]
    n = len(x)
    rows = [
        [x[i] ** (n - j) * math.exp(alpha * x[i]) for j in range(1, n + 1)]
        for i in range(n)
    ]
    explicit = _det3(rows) / (math.factorial(1) * math.factorial(2))
    assert schur_cont([alpha] * 3, x) == pytest.approx(explicit, rel=1e-10)

    alpha, x = 0.8, [2.0, 1.0]
    rows = [
        [
            x[i] ** (2 - j)
            * (math.exp(alpha * x[i]) - (-1) ** (2 - j) * math.exp(-alpha * x[i]))
            for j in range(1, 3)
        ]
        for i in range(2)
    ]
    explicit = (rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]) / (
        2 * alpha
    ) ** 3
    assert sp_cont([alpha, alpha], x) == pytest.approx(explicit, rel=1e-10)


def _det3(m):
    if len(m) == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def test_cont_near_equal_matches_equal():
    x = [2.0, 1.0]
    assert schur_cont([0.4, 0.4 + 1e-9], x) == pytest.approx(
        schur_cont([0.4, 0.4], x), rel=1e-6
    )
    assert sp_cont([0.8, 0.8 + 1e-9], x) == pytest.approx(
        sp_cont([0.8, 0.8], x), rel=1e-6
    )


def test_discrete_to_continuous_limit():
    alpha, x = [0.5, -0.2], [2.3, 1.1]
    target = schur_cont(alpha, x)
    errs = []
    for d in (0.1, 0.05, 0.025):
        lam = [math.floor(v / d) for v in x]
        a = [math.exp(d * v) for v in alpha]
        errs.append(abs(d * schur_det(lam, a) - target) / abs(target))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 0.01


def test_sp_discrete_to_continuous_limit():
    alpha, x = [0.7, 0.3], [2.3, 1.1]
    target = sp_cont(alpha, x)
    errs = []
    for d in (0.1, 0.05, 0.025):
        lam = [math.floor(v / d) for v in x]
        a = [math.exp(d * v) for v in alpha]
        errs.append(abs(d**4 * sp_det(lam, a) - target) / abs(target))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 0.1


# ---------------------------------------------------------------------------
# Cauchy identities


def test_cauchy_discrete_std_rank_one():
    r = cauchy_check(
        "discrete-std", p=[F(1, 2)], q=[F(1, 2)], truncation=80
    )
    assert r.rhs == F(4, 3)
    assert float(r.residual) < 1e-40
    # positive terms: the discrepancy is the true tail, so the bound covers it
    assert float(r.residual) <= r.tail_bound


def test_cauchy_discrete_std_rank_two():
    r = cauchy_check(
        "discrete-std",
        p=[F(1, 2), F(1, 3)],
        q=[F(2, 5), F(1, 4)],
        truncation=45,
    )
    assert float(r.residual) < 1e-12
    assert float(r.residual) <= r.tail_bound


def test_cauchy_cont_std_rank_one():
    r = cauchy_check("cont-std", alpha=[1.0], beta=[1.0])
    assert r.rhs == pytest.approx(0.5)
    assert r.residual < 1e-10


def test_cauchy_cont_std_rank_two():
    r = cauchy_check("cont-std", alpha=[0.9, 0.6], beta=[1.1, 0.7])
    assert r.residual < 1e-8 * abs(r.rhs)


def test_cauchy_discrete_sp():
    p = [F(1, 2), F(2, 5)]
    q = [F(3, 10), F(1, 5)]
    # tail decays like (max q / min p)^k = 0.75^k; the 1e-10 level
    # needs truncation near 100
    r60 = cauchy_check("discrete-sp", p=p, q=q, truncation=60)
    assert float(r60.residual) < 1e-5
    r100 = cauchy_check("discrete-sp", p=p, q=q, truncation=100)
    assert float(r100.residual) < 1e-10
    assert float(r100.residual) < float(r60.residual)
    assert float(r100.residual) <= r100.tail_bound


def test_cauchy_cont_sp():
    r = cauchy_check("cont-sp", alpha=[0.5], beta=[1.5])
    assert r.rhs == pytest.approx(0.5)
    assert r.residual < 1e-10
    r = cauchy_check("cont-sp", alpha=[0.5, 0.25], beta=[1.6, 1.2])
    assert r.residual < 1e-8 * abs(r.rhs)


def test_cauchy_domain_violations():
    with pytest.raises(ValueError):
        cauchy_check("discrete-std", p=[F(2)], q=[F(1)])
    with pytest.raises(ValueError):
        cauchy_check("discrete-sp", p=[F(1, 5)], q=[F(1, 2)])  # q/p > 1
    with pytest.raises(ValueError):
        cauchy_check("cont-std", alpha=[1.0], beta=[-2.0])
    with pytest.raises(ValueError):
        cauchy_check("cont-sp", alpha=[2.0], beta=[1.0])  # beta < alpha
    with pytest.raises(ValueError):
        cauchy_check("no-such-kind", p=[F(1, 2)], q=[F(1, 2)])
