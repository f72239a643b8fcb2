from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from manin_dp.fibration import (
    FibrationDescriptor as FD,
    FibrationError,
    MaxDefHorizonError,
    MaxDefTable,
    Parity,
    expected_dimension,
    maxdef_height_bound,
    neg_ruled_bound,
    nonfree_dim_bound,
    nonfree_max_points,
    points_threshold,
    surface_mbb_threshold,
    threshold_C,
    threshold_C_terms,
    threshold_nonfree,
    threshold_nonfree_terms,
    threshold_Q,
    threshold_Q_terms,
    threshold_report,
    totalbreaking_s,
    totalbreaking_s_rational,
)


def fd(g, neg=0, m=0, maxdef=None):
    return FD(3, g, neg, m, maxdef or MaxDefTable.zero())


def test_threshold_C_examples():
    assert threshold_C(fd(0)) == 1
    assert threshold_C(fd(1)) == 5
    assert threshold_C(fd(1, -3)) == 11


def test_threshold_nonfree_examples():
    assert threshold_nonfree(fd(1)) == 16
    assert threshold_nonfree(fd(1, -2, 3)) == 20
    assert threshold_nonfree(fd(2)) == 34


def test_threshold_Q_examples():
    assert threshold_Q(fd(0)) == 5
    assert threshold_Q(fd(1)) == 18
    table = MaxDefTable({3: 2}, horizon=12, default=None)
    assert table.upto(12) == 2 and table.upto(6) == 2
    f = fd(1, -4, maxdef=table)
    terms = list(threshold_Q_terms(f).values())
    assert terms == [13, 23, 25, 26, 17]
    assert threshold_Q(f) == 26


def test_maxdef_horizon_error():
    f = fd(2, -4, maxdef=MaxDefTable({3: 1}, horizon=10, default=None))
    with pytest.raises(MaxDefHorizonError) as err:
        threshold_Q(f)
    assert err.value.degree == 12


def test_maxdef_table():
    t = MaxDefTable({2: 1, 5: 3}, horizon=8)
    assert t.upto(1) == 0
    assert t.upto(4) == 1
    assert t.upto(100) == 3
    assert t.at(7) == 0
    assert MaxDefTable.from_json(t.to_json()) == t
    with pytest.raises(FibrationError):
        MaxDefTable({1: -1})


def test_surface_mbb_examples():
    assert surface_mbb_threshold(0, 0) == 2
    for e in range(1, 8):
        assert surface_mbb_threshold(0, -e) == e + 1
    assert surface_mbb_threshold(1, 1) == 4


def test_totalbreaking_examples():
    assert totalbreaking_s(1, 0, 10) == -3
    assert totalbreaking_s(0, 0, 4) == -2
    assert totalbreaking_s(1, -2, 8) == -1
    with pytest.raises(FibrationError):
        totalbreaking_s(1, 0, 7)
    assert totalbreaking_s_rational(1, 0, 7) == Fraction(-7, 2) + 2


def test_maxdef_height_bound_examples():
    assert maxdef_height_bound(2, 3, 0) == 11
    assert maxdef_height_bound(5, 4, 2) == 14
    assert maxdef_height_bound(0, 2, 2) == 3
    assert maxdef_height_bound(0, 3, 1) == Fraction(15, 2)
    with pytest.raises(FibrationError):
        maxdef_height_bound(0, 1, 2)


def test_points_threshold_examples():
    assert points_threshold(0, 0, 0, Parity.EVEN) == 2
    assert points_threshold(1, 0, 0, "Odd") == 2
    assert points_threshold(1, -2, 2, Parity.EVEN) == 9
    assert points_threshold(0, 0, 1, Parity.ODD) == 2  # ceil(3/2)


def test_expected_dimension_examples():
    assert expected_dimension(6, 1, 3, 0) == 6
    assert expected_dimension(6, 1, 3, 2) == 2
    for d in range(10):
        assert expected_dimension(d, 0, 2, 0) == d + 1


def test_nonfree_dim_bound_examples():
    assert nonfree_dim_bound(16, 1, 0) == 17
    assert nonfree_dim_bound(10, 2, 0) == 10
    assert nonfree_dim_bound(20, 1, 3) == 24
    with pytest.raises(FibrationError):
        nonfree_dim_bound(9, 2, 0)


def test_small_bounds():
    assert [nonfree_max_points(g) for g in (0, 1, 5)] == [0, 1, 5]
    assert [neg_ruled_bound(g) for g in (0, 1, 3)] == [0, 1, 3]


def test_descriptor_validation():
    with pytest.raises(FibrationError):
        FD(10, 1)
    with pytest.raises(FibrationError):
        FD(3, -1)
    with pytest.raises(FibrationError):
        FD(3, 1, profile_count=0)
    with pytest.raises(FibrationError):
        FD.from_json({"fiber_degree": 3, "base_genus": 1, "bogus": 1})
    f = FD(4, 2, -1, 2, MaxDefTable({3: 1}, 20), 3, 2, 1)
    assert FD.from_json(f.to_json()) == f


def test_report_itemizes():
    rep = threshold_report(fd(1))
    assert rep["Q"]["value"] == 18
    assert rep["nonfree"]["strict_value"] == 17
    assert set(rep["C"]["terms"].values()) == {4, 5}


tables = st.dictionaries(st.integers(0, 60), st.integers(0, 6), max_size=5).map(lambda e: MaxDefTable(e, 60, 0))


@settings(max_examples=1000)
@given(st.integers(0, 8), st.integers(-10, 10), st.integers(0, 5), tables)
def test_monotone_in_genus_and_neg(g, neg, m, table):
    f = fd(g, neg, m, table)
    up_g = fd(g + 1, neg, m, table)
    up_neg = fd(g, neg + 1, m, table)
    for fn in (threshold_C, threshold_nonfree, threshold_Q):
        assert fn(up_g) >= fn(f)
        assert fn(up_neg) <= fn(f)
    assert threshold_C(f) >= next(iter(threshold_C_terms(f).values()))
    assert threshold_nonfree(f) >= next(iter(threshold_nonfree_terms(f).values()))
    assert threshold_Q(f) >= next(iter(threshold_Q_terms(f).values()))
