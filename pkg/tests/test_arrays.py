import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pointline.arrays import (
    GTPattern,
    Partition,
    PolygonalArray,
    SpGTPattern,
    YoungIndexSet,
    diag_prod,
    diag_sum,
    energy,
    format_rows,
    format_scalar,
    gtype,
    half_triangle_energy,
    parse_rows,
    parse_scalar,
    partitions_in_box,
    sp_type_of,
    triangle_energy,
    type_of,
)


# ---------------------------------------------------------------------------
# strategies

entry_ints = st.integers(min_value=0, max_value=20)


@st.composite
def gt_patterns(draw, max_height=5):
    n = draw(st.integers(min_value=1, max_value=max_height))
    bottom = sorted(
        (draw(entry_ints) for _ in range(n)),
        reverse=True,
    )
    rows = [bottom]
    for i in range(n - 1, 0, -1):
        below = rows[0]
        row = []
        for j in range(i):
            lo, hi = below[j + 1], below[j]
            row.append(draw(st.integers(min_value=lo, max_value=hi)))
        rows.insert(0, row)
    return GTPattern(rows)


@st.composite
def spgt_patterns(draw, max_n=3):
    n = draw(st.integers(min_value=1, max_value=max_n))
    bottom = sorted((draw(entry_ints) for _ in range(n)), reverse=True)
    rows = [bottom]
    for i in range(2 * n - 1, 0, -1):
        below = rows[0]
        width = (i + 1) // 2

        def at(row, j):
            return row[j - 1] if j <= len(row) else 0

        row = []
        for j in range(1, width + 1):
            lo, hi = at(below, j + 1), at(below, j)
            row.append(draw(st.integers(min_value=lo, max_value=hi)))
        rows.insert(0, row)
    return SpGTPattern(rows)


@st.composite
def young_shapes(draw, max_rows=5, max_cols=6):
    n = draw(st.integers(min_value=1, max_value=max_rows))
    lens = sorted(
        (draw(st.integers(min_value=1, max_value=max_cols)) for _ in range(n)),
        reverse=True,
    )
    return YoungIndexSet(lens)


@st.composite
def rational_arrays(draw):
    shape = draw(young_shapes(max_rows=4, max_cols=4))
    rows = [
        [
            Fraction(
                draw(st.integers(min_value=1, max_value=12)),
                draw(st.integers(min_value=1, max_value=12)),
            )
            for _ in range(r)
        ]
        for r in shape.row_lengths
    ]
    return PolygonalArray(rows, shape)


# ---------------------------------------------------------------------------
# partitions


def test_partition_normalizes_trailing_zeros():
    p = Partition([3, 2, 0, 0])
    assert p.parts == (3, 2)
    assert p.length == 2
    assert p.size == 5
    assert Partition().length == 0


def test_partition_rejects_increasing_or_negative():
    with pytest.raises(ValueError):
        Partition([1, 2])
    with pytest.raises(ValueError):
        Partition([2, -1])


def test_partition_part_and_padding():
    p = Partition([4, 1])
    assert [p.part(i) for i in (1, 2, 3)] == [4, 1, 0]
    assert p.padded(4) == (4, 1, 0, 0)
    with pytest.raises(ValueError):
        p.padded(1)


def test_partition_conjugate():
    assert Partition([4, 3, 1]).conjugate() == Partition([3, 2, 2, 1])
    assert Partition().conjugate() == Partition()


@given(st.lists(st.integers(min_value=0, max_value=9), max_size=6))
def test_partition_conjugate_involution(parts):
    p = Partition(sorted(parts, reverse=True))
    assert p.conjugate().conjugate() == p


def test_partitions_in_box_count():
    for a, l in [(0, 3), (3, 0), (2, 2), (3, 2), (4, 3)]:
        got = partitions_in_box(a, l)
        assert len(got) == math.comb(a + l, l)
        assert len(set(got)) == len(got)
        for lam in got:
            assert lam.length <= l
            assert lam.part(1) <= a


# ---------------------------------------------------------------------------
# Young index sets


def test_young_membership_and_closure():
    s = YoungIndexSet([3, 1])
    assert (1, 3) in s and (2, 1) in s
    assert (2, 2) not in s and (0, 1) not in s
    assert s.size == 4
    assert s.col_length(1) == 2 and s.col_length(2) == 1


def test_young_border_and_outer():
    s = YoungIndexSet([3, 2])
    # borders: last index of each diagonal
    assert s.border_indices() == [(1, 2), (1, 3), (2, 1), (2, 2)]
    assert s.outer_indices() == [(1, 3), (2, 2)]
    assert s.remove_outer(1, 3) == YoungIndexSet([2, 2])
    with pytest.raises(ValueError):
        s.remove_outer(1, 2)


def test_young_transpose():
    s = YoungIndexSet([4, 3, 1])
    assert s.transpose() == YoungIndexSet([3, 2, 2, 1])
    assert not s.is_symmetric()
    assert YoungIndexSet([3, 2, 1]).is_symmetric()
    assert YoungIndexSet([3, 2, 1]).transpose() == YoungIndexSet([3, 2, 1])


@given(young_shapes())
def test_young_outer_implies_border(s):
    for (i, j) in s.indices():
        if s.is_outer(i, j):
            assert s.is_border(i, j)


@given(young_shapes())
def test_young_remove_outer_valid(s):
    for (i, j) in s.outer_indices():
        smaller = s.remove_outer(i, j)
        assert smaller.size == s.size - 1 or (s.size == 1 and smaller.size == 0)


@given(young_shapes())
def test_young_transpose_involution(s):
    assert s.transpose().transpose() == s


# ---------------------------------------------------------------------------
# polygonal arrays


def test_array_entry_access_and_immutability():
    t = PolygonalArray([[1, 2], [3]])
    assert t[(1, 2)] == 2
    assert t.get(2, 2) == 0
    with pytest.raises(KeyError):
        t[(2, 2)]
    with pytest.raises(AttributeError):
        t.shape = None


def test_array_from_entries_requires_exact_domain():
    shape = YoungIndexSet([2, 1])
    t = PolygonalArray.from_entries(shape, {(1, 1): 1, (1, 2): 2, (2, 1): 3})
    assert t.rows == ((1, 2), (3,))
    with pytest.raises(ValueError):
        PolygonalArray.from_entries(shape, {(1, 1): 1, (1, 2): 2})


def test_array_transpose():
    t = PolygonalArray([[1, 2, 3], [4, 5]])
    assert t.transpose() == PolygonalArray([[1, 4], [2, 5], [3]])
    assert t.transpose().transpose() == t


def test_array_symmetry_predicate():
    assert PolygonalArray([[1, 2], [2, 5]]).is_symmetric()
    assert not PolygonalArray([[1, 2], [3, 5]]).is_symmetric()


# ---------------------------------------------------------------------------
# type vectors


def test_type_of_examples():
    assert type_of(GTPattern([[2]])) == [2]
    assert type_of(GTPattern([[3], [4, 1]])) == [3, 2]


def test_type_of_figure_tableau_pattern():
    # pattern of the semistandard tableau with rows 1123 / 244 / 4:
    # row i of the pattern counts entries <= i in each tableau row
    z = GTPattern([[2], [3, 1], [4, 1, 0], [4, 3, 1, 0]])
    assert type_of(z) == [2, 2, 1, 3]
    assert Partition(z.shape) == Partition([4, 3, 1])


def test_sp_type_of_examples():
    assert sp_type_of(SpGTPattern([[1], [1]])) == [1, 0]
    assert sp_type_of(SpGTPattern([[0], [1]])) == [0, 1]
    assert sp_type_of(SpGTPattern([[1], [2, 0], [2, 1], [3, 1]])) == [1, 1, 1, 1]


@given(gt_patterns())
def test_type_telescopes_to_bottom_row_sum(z):
    assert sum(type_of(z)) == sum(z.shape)


@given(spgt_patterns())
def test_sp_type_telescopes(z):
    assert sum(sp_type_of(z)) == sum(z.shape)
    assert len(sp_type_of(z)) == z.height


# ---------------------------------------------------------------------------
# diagonal functionals


def test_diag_examples():
    t = PolygonalArray([[1, 2], [3, 4]])
    assert diag_sum(t, 0) == 5 and diag_prod(t, 0) == 4
    assert diag_sum(t, 1) == 2 and diag_prod(t, 1) == 2
    assert diag_sum(t, -1) == 3 and diag_prod(t, -1) == 3
    assert diag_sum(t, 7) == 0 and diag_prod(t, 7) == 1


@given(rational_arrays())
def test_diagonals_recompose_array(t):
    ks = range(-t.shape.n_rows, t.shape.row_lengths[0] + 1)
    total_sum = sum(x for row in t.rows for x in row)
    total_prod = Fraction(1)
    for row in t.rows:
        for x in row:
            total_prod *= x
    assert sum(diag_sum(t, k) for k in ks) == total_sum
    prod = Fraction(1)
    for k in ks:
        prod *= diag_prod(t, k)
    assert prod == total_prod


# ---------------------------------------------------------------------------
# energies


def test_energy_examples():
    assert energy(PolygonalArray([[2]])) == Fraction(1, 2)
    assert energy(PolygonalArray([[2, 4]])) == Fraction(1, 1)


def test_energy_reference_implementation():
    # independent dict-based evaluation on a fixed staircase array
    t = PolygonalArray(
        [[Fraction(1, 2), 3, 5], [2, Fraction(7, 3)], [4]]
    )
    e = t.entries()

    def at(i, j):
        return Fraction(e.get((i, j), 0))

    expected = 1 / at(1, 1)
    for (i, j) in t.shape.indices():
        expected += (at(i - 1, j) + at(i, j - 1)) / at(i, j)
    assert energy(t) == expected


@given(rational_arrays())
def test_energy_exact_on_rationals(t):
    val = energy(t)
    assert isinstance(val, Fraction)
    e = t.entries()
    ref = 1 / e[(1, 1)]
    for (i, j) in t.shape.indices():
        ref += (e.get((i - 1, j), 0) + e.get((i, j - 1), 0)) / e[(i, j)]
    assert val == ref


def test_triangle_energy_examples():
    assert triangle_energy(GTPattern([[Fraction(3)]])) == 0
    # rows [z],[x1,x2]: E = x2/z + z/x1
    z, x1, x2 = Fraction(2), Fraction(3), Fraction(1)
    got = triangle_energy([[z], [x1, x2]])
    assert got == x2 / z + z / x1


def test_half_triangle_energy_example():
    # rows [z],[x]: E = 1/z + z/x
    z, x = Fraction(2), Fraction(3)
    assert half_triangle_energy([[z], [x]]) == 1 / z + z / x


def test_half_triangle_energy_height_four():
    # rows [a],[b],[c,d],[e,f]: wall terms 1/a (row 1) and 1/d (row 3)
    a, b, c, d, e, f = (Fraction(k) for k in (2, 3, 5, 1, 7, 1))
    got = half_triangle_energy([[a], [b], [c, d], [e, f]])
    expected = (1 / a + a / b) + (d / b + b / c) + (f / c + c / e + 1 / d + d / f)
    assert got == expected


def test_gtype_examples():
    x = Fraction(5)
    assert gtype([[x]]) == [x]
    z, x1, x2 = Fraction(2), Fraction(3), Fraction(5)
    assert gtype([[z], [x1, x2]]) == [z, x1 * x2 / z]


@given(gt_patterns())
def test_gtype_telescopes_to_row_products(z):
    rows = [[Fraction(x + 1) for x in row] for row in z.rows]
    gt = gtype(rows)
    prod = Fraction(1)
    for g in gt:
        prod *= g
    bottom = Fraction(1)
    for x in rows[-1]:
        bottom *= x
    assert prod == bottom


# ---------------------------------------------------------------------------
# validation


def test_gt_interlacing_enforced():
    with pytest.raises(ValueError):
        GTPattern([[5], [3, 1]])  # 5 > 3 breaks z_{1,1} <= z_{2,1}
    with pytest.raises(ValueError):
        GTPattern([[1], [3, 2]])  # 2 > 1 breaks z_{2,2} <= z_{1,1}
    with pytest.raises(ValueError):
        GTPattern([[1, 2]])  # wrong row length


def test_spgt_validation():
    with pytest.raises(ValueError):
        SpGTPattern([[1]])  # odd height
    with pytest.raises(ValueError):
        SpGTPattern([[5], [3]])  # 5 > 3
    with pytest.raises(ValueError):
        SpGTPattern([[-1], [1]])  # negative entry
    # wall convention: z_{1,1} >= z_{2,2} = 0 automatically
    SpGTPattern([[0], [0]])


# ---------------------------------------------------------------------------
# serialization


def test_scalar_round_trip():
    for x in (3, -7, Fraction(22, 7), 1.5, -0.125):
        assert parse_scalar(format_scalar(x)) == x
    assert format_scalar(Fraction(4, 2)) == "2"
    assert parse_scalar("3/4") == Fraction(3, 4)


def test_rows_round_trip():
    rows = [[Fraction(1, 3), 2], [5]]
    text = format_rows(rows)
    assert parse_rows(text) == rows
    t = PolygonalArray(rows)
    assert PolygonalArray.from_text(t.to_text()) == t


@given(gt_patterns())
def test_gt_pattern_text_round_trip(z):
    assert GTPattern.from_text(z.to_text()) == z
