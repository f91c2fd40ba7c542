import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sskmeans.geometry import (
    CenterSet,
    centroid,
    d_squared,
    optimal_cluster_partition,
    potential,
    squared_distance,
)
from sskmeans.theory import shift_identity


@pytest.mark.parametrize("a, b, expected", [
    ((0, 0), (0, 0), 0.0),
    ((0, 0), (3, 4), 25.0),
    ((1, 2, 3), (4, 6, 3), 25.0),
])
def test_squared_distance(a, b, expected):
    assert squared_distance(a, b) == expected
    assert squared_distance(b, a) == expected


def test_squared_distance_dimension_mismatch():
    with pytest.raises(ValueError):
        squared_distance((0, 0), (0, 0, 0))


@pytest.mark.parametrize("points, expected", [
    ([(0, 0)], (0, 0)),
    ([(0, 0), (2, 0)], (1, 0)),
    ([(1, 1), (2, 2), (3, 3)], (2, 2)),
])
def test_centroid(points, expected):
    np.testing.assert_array_equal(centroid(points), expected)


def test_centroid_empty():
    with pytest.raises(ValueError):
        centroid(np.empty((0, 2)))


@pytest.mark.parametrize("x, C, expected", [
    ((0, 0), [(0, 0), (5, 5)], 0.0),
    ((1, 0), [(0, 0), (3, 0)], 1.0),
    ((2, 0), [(0, 0), (3, 0)], 1.0),
])
def test_d_squared(x, C, expected):
    assert d_squared(np.array(x, float), np.array(C, float)) == expected


def test_d_squared_empty_centers():
    with pytest.raises(ValueError):
        d_squared(np.zeros(2), np.empty((0, 2)))


def test_potential_examples():
    C = np.array([(0, 0), (4, 1)], float)
    assert potential(C, C) == 0.0
    assert potential([(0, 0), (2, 0)], [(1, 0)]) == 2.0
    assert potential([(0, 0), (2, 0), (10, 0)], [(1, 0), (10, 0)]) == 2.0


def test_potential_accepts_center_set():
    cs = CenterSet.plain([(1, 0)])
    assert potential([(0, 0), (2, 0)], cs) == 2.0


def test_partition():
    data = np.array([(0, 0), (10, 0), (3, 1)], float)
    (g0,) = optimal_cluster_partition(data, [(5, 5)])
    assert g0.tolist() == [0, 1, 2]
    groups = optimal_cluster_partition(data[:2], data[:2])
    assert [g.tolist() for g in groups] == [[0], [1]]
    # exact tie goes to the lower center index
    groups = optimal_cluster_partition([(1, 0)], [(0, 0), (2, 0)])
    assert [g.tolist() for g in groups] == [[0], []]


def test_center_set_validation():
    with pytest.raises(ValueError):
        CenterSet(np.zeros((2, 2)), ("d2_sampled",))
    with pytest.raises(ValueError):
        CenterSet(np.zeros((1, 2)), ("mystery",))


finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@st.composite
def point_sets(draw, max_n=20):
    d = draw(st.integers(1, 8))
    n = draw(st.integers(1, max_n))
    return draw(arrays(np.float64, (n, d), elements=finite))


@settings(max_examples=300, deadline=None)
@given(point_sets(), st.data())
def test_shift_identity(A, data):
    z = data.draw(arrays(np.float64, A.shape[1], elements=finite))
    lhs, rhs = shift_identity(A, z)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, lhs)


@settings(max_examples=200, deadline=None)
@given(point_sets(), st.data())
def test_adding_a_center_never_raises_potential(A, data):
    d = A.shape[1]
    C = data.draw(arrays(np.float64, (data.draw(st.integers(1, 4)), d), elements=finite))
    x = data.draw(arrays(np.float64, (1, d), elements=finite))
    assert potential(A, np.vstack([C, x])) <= potential(A, C)


@settings(max_examples=200, deadline=None)
@given(point_sets(), st.data())
def test_potential_is_additive(A, data):
    d = A.shape[1]
    C = data.draw(arrays(np.float64, (2, d), elements=finite))
    cut = data.draw(st.integers(0, len(A)))
    whole = potential(A, C)
    parts = potential(A[:cut], C) + potential(A[cut:], C)
    assert parts == pytest.approx(whole, rel=1e-12, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(point_sets(), st.data())
def test_centroid_minimizes_single_center_potential(A, data):
    z = data.draw(arrays(np.float64, A.shape[1], elements=finite))
    best = potential(A, centroid(A))
    assert best <= potential(A, z) * (1 + 1e-12) + 1e-9
