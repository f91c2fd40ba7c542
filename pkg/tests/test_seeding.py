from itertools import combinations

import numpy as np
import pytest

from sskmeans.geometry import D2_SAMPLED, SUPERVISED_CENTROID, UNIFORM_SAMPLED, CenterSet
from sskmeans.seeding import (
    PartialLabeling,
    constrained_init,
    d2_probabilities,
    d2_sample,
    kmeanspp_init,
    ss_kmeanspp_init,
    true_centroid_init,
    uniform_init,
)


def rng(seed=0):
    return np.random.default_rng(seed)


@pytest.fixture
def blobs():
    g = rng(42)
    X = np.vstack([g.normal(0, 1, (20, 2)), g.normal(30, 1, (20, 2)), g.normal((0, 60), 1, (20, 2))])
    y = np.repeat([0, 1, 2], 20)
    return X, y


def test_partial_labeling_validation():
    with pytest.raises(ValueError):
        PartialLabeling([0, 0], [1, 1], 3)
    with pytest.raises(ValueError):
        PartialLabeling([0], [3], 3)
    lab = PartialLabeling([4, 1, 2], [2, 0, 2], 3)
    assert lab.G == 2
    assert lab.counts().tolist() == [1, 0, 2]
    assert lab.unsupervised_indices(5).tolist() == [0, 3]


def test_uniform_init():
    X = np.arange(10.0).reshape(5, 2)
    C = uniform_init(X, 5, rng())
    assert sorted(map(tuple, C.centers)) == sorted(map(tuple, X))
    assert uniform_init(X[:1], 1, rng()).centers.tolist() == [[0.0, 1.0]]
    a = uniform_init(X, 2, rng(7)).centers
    b = uniform_init(X, 2, rng(7)).centers
    np.testing.assert_array_equal(a, b)
    with pytest.raises(ValueError):
        uniform_init(X, 6, rng())


def test_d2_sample_single_eligible():
    X = np.array([(0, 0), (1, 0), (2, 0)], float)
    for s in range(20):
        assert d2_sample(X, [2], X[:1], rng(s)) == 2


def test_d2_probabilities_exact():
    X = np.array([(0, 0), (1, 0), (2, 0)], float)
    p = d2_probabilities(X, [1, 2], X[:1])
    np.testing.assert_allclose(p, [0.2, 0.8], rtol=0, atol=1e-15)


def test_d2_sample_zero_mass_falls_back_to_uniform():
    X = np.zeros((4, 2))
    draws = np.bincount([d2_sample(X, [0, 1, 2, 3], X[:1], rng(s)) for s in range(4000)],
                        minlength=4)
    # each index has probability 1/4; 4 standard errors
    se = np.sqrt(4000 * 0.25 * 0.75)
    assert np.all(np.abs(draws - 1000) < 4 * se)
    # exclusions apply in the fallback only
    assert all(d2_sample(X, [0, 1, 2], X[:1], rng(s), exclude=[0, 1]) == 2 for s in range(50))


def test_d2_sample_empirical_law():
    g = rng(3)
    X = g.normal(size=(8, 3))
    C = X[:2]
    eligible = np.arange(2, 8)
    p = d2_probabilities(X, eligible, C)
    draws = 100_000
    counts = np.zeros(len(eligible))
    pos = {int(i): j for j, i in enumerate(eligible)}
    g2 = rng(11)
    for _ in range(draws):
        counts[pos[d2_sample(X, eligible, C, g2)]] += 1
    se = np.sqrt(p * (1 - p) / draws)
    assert np.all(np.abs(counts / draws - p) <= 3 * se + 1e-12)


def test_d2_sample_empty_eligible():
    with pytest.raises(ValueError):
        d2_sample(np.zeros((2, 2)), [], np.zeros((1, 2)), rng())


def test_kmeanspp_basic():
    X = np.array([(0, 0), (5, 0)], float)
    C = kmeanspp_init(X[:1], 1, rng())
    assert C.centers.tolist() == [[0.0, 0.0]]
    for s in range(10):
        C = kmeanspp_init(X, 2, rng(s))
        assert sorted(map(tuple, C.centers)) == [(0.0, 0.0), (5.0, 0.0)]
        assert C.provenance == (UNIFORM_SAMPLED, D2_SAMPLED)
    a, b = kmeanspp_init(X, 2, rng(5)), kmeanspp_init(X, 2, rng(5))
    np.testing.assert_array_equal(a.centers, b.centers)
    with pytest.raises(ValueError):
        kmeanspp_init(X, 3, rng())


def test_kmeanspp_law_on_tiny_instance():
    """Enumerate the exact law of the center pair for k=2 and compare frequencies."""
    X = np.array([(0, 0), (1, 0), (3, 0)], float)
    n = len(X)
    exact = {}
    for first in range(n):
        p = d2_probabilities(X, np.arange(n), X[[first]])
        for second in range(n):
            exact[(first, second)] = exact.get((first, second), 0) + p[second] / n
    trials = 30_000
    g = rng(1)
    hits = {}
    for _ in range(trials):
        C = kmeanspp_init(X, 2, g).centers
        key = tuple(int(np.flatnonzero((X == c).all(1))[0]) for c in C)
        hits[key] = hits.get(key, 0) + 1
    for key, p in exact.items():
        se = np.sqrt(p * (1 - p) / trials)
        assert abs(hits.get(key, 0) / trials - p) <= 4 * se + 1e-12


def test_ss_kmeanspp_full_supervision_is_centroids(blobs):
    X, y = blobs
    idx = np.array([0, 1, 20, 21, 40])
    lab = PartialLabeling(idx, y[idx], 3)
    C = ss_kmeanspp_init(X, lab, 3, rng())
    np.testing.assert_allclose(C.centers, [X[[0, 1]].mean(0), X[[20, 21]].mean(0), X[40]])
    assert C.provenance == (SUPERVISED_CENTROID,) * 3
    assert C.labels.tolist() == [0, 1, 2]


def test_ss_kmeanspp_single_label_centroid():
    X = np.array([(0, 0), (2, 0)], float)
    C = ss_kmeanspp_init(X, PartialLabeling([0, 1], [0, 0], 1), 1, rng())
    assert C.centers.tolist() == [[1.0, 0.0]]


def test_ss_kmeanspp_second_center_law():
    """One labelled cluster at the origin, k=2: the sampled center follows the
    D² law over the unsupervised points only."""
    X = np.array([(0, 0), (1, 0), (-1, 0), (10, 0), (11, 0), (0.5, 0)], float)
    lab = PartialLabeling([0, 1, 2], [0, 0, 0], 2)
    unsup = np.array([3, 4, 5])
    p = d2_probabilities(X, unsup, [(0.0, 0.0)])
    np.testing.assert_allclose(p, np.array([100, 121, 0.25]) / 221.25)
    trials = 20_000
    g = rng(9)
    counts = {3: 0, 4: 0, 5: 0}
    for _ in range(trials):
        C = ss_kmeanspp_init(X, lab, 2, g)
        hit = int(np.flatnonzero((X == C.centers[1]).all(1))[0])
        counts[hit] += 1
    for i, pi in zip(unsup, p):
        se = np.sqrt(pi * (1 - pi) / trials)
        assert abs(counts[int(i)] / trials - pi) <= 4 * se + 1e-12


def test_ss_kmeanspp_never_samples_supervised(blobs):
    X, y = blobs
    lab = PartialLabeling(np.arange(20, 40), y[20:40], 3)
    sup = set(map(tuple, X[20:40]))
    for s in range(50):
        C = ss_kmeanspp_init(X, lab, 3, rng(s))
        assert C.provenance.count(SUPERVISED_CENTROID) == 1
        assert C.provenance.count(D2_SAMPLED) == 2
        assert not any(tuple(c) in sup for c in C.centers[1:])


def test_ss_kmeanspp_empty_labeling_matches_kmeanspp(blobs):
    X, _ = blobs
    for s in range(5):
        a = ss_kmeanspp_init(X, PartialLabeling.empty(3), 3, rng(s))
        b = kmeanspp_init(X, 3, rng(s))
        np.testing.assert_array_equal(a.centers, b.centers)


def test_ss_kmeanspp_errors(blobs):
    X, y = blobs
    with pytest.raises(ValueError):
        ss_kmeanspp_init(X[:3], PartialLabeling([0], [0], 5), 5, rng())
    with pytest.raises(ValueError):
        ss_kmeanspp_init(X, PartialLabeling([0, 1], [0, 1], 3), 2, rng())


def test_constrained_init(blobs):
    X, y = blobs
    idx = np.array([0, 1, 20, 21, 40])
    full = PartialLabeling(idx, y[idx], 3)
    a = constrained_init(X, full, 3, rng(1))
    b = ss_kmeanspp_init(X, full, 3, rng(2))
    np.testing.assert_array_equal(a.centers, b.centers)
    assert a.provenance == b.provenance

    part = PartialLabeling(idx[:2], y[idx[:2]], 3)
    for s in range(20):
        C = constrained_init(X, part, 3, rng(s))
        assert C.provenance == (SUPERVISED_CENTROID, UNIFORM_SAMPLED, UNIFORM_SAMPLED)
        assert not any((X[[0, 1]] == c).all(1).any() for c in C.centers[1:])
        assert len({tuple(c) for c in C.centers[1:]}) == 2
    np.testing.assert_array_equal(constrained_init(X, part, 3, rng(4)).centers,
                                  constrained_init(X, part, 3, rng(4)).centers)


def test_constrained_init_without_supervision_is_uniform():
    X = np.arange(8.0).reshape(4, 2)
    trials = 12_000
    g = rng(5)
    counts = {}
    for _ in range(trials):
        C = constrained_init(X, PartialLabeling.empty(2), 2, g)
        key = frozenset(int(c[0]) // 2 for c in C.centers)
        counts[key] = counts.get(key, 0) + 1
    pairs = [frozenset(p) for p in combinations(range(4), 2)]
    p = 1 / len(pairs)
    se = np.sqrt(p * (1 - p) / trials)
    for key in pairs:
        assert abs(counts.get(key, 0) / trials - p) <= 4 * se


def test_true_centroid_init():
    X = np.array([(0, 0), (2, 0), (10, 0)], float)
    C = true_centroid_init(X, [0, 0, 1], 2)
    assert C.centers.tolist() == [[1.0, 0.0], [10.0, 0.0]]
    C = true_centroid_init(X, [2, 0, 1], 3)
    assert C.centers.tolist() == [[2.0, 0.0], [10.0, 0.0], [0.0, 0.0]]
    with pytest.raises(ValueError):
        true_centroid_init(X, [0, 0, 0], 2)


def test_center_set_append_keeps_labels():
    cs = CenterSet(np.zeros((1, 2)), (SUPERVISED_CENTROID,), [4])
    cs2 = cs.append([1, 1], D2_SAMPLED)
    assert cs2.labels.tolist() == [4, -1]
