"""Center initialization: uniform, k-means++, semi-supervised k-means++,
Constrained-KMeans seeding and true class centroids.

All samplers take a :class:`numpy.random.Generator`; a fixed seed gives the
same centers on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (
    D2_SAMPLED,
    NO_CLASS,
    SUPERVISED_CENTROID,
    TRUE_CENTROID,
    UNIFORM_SAMPLED,
    CenterSet,
    as_dataset,
    d_squared,
    pairwise_sq_dists,
)


@dataclass(frozen=True)
class PartialLabeling:
    """Class labels for a subset of the points.

    Parameters
    ----------
    indices : array of int
        Dataset row indices of the supervised points, no duplicates.
    labels : array of int
        Class label of each supervised point, in ``0..k-1``.
    k : int
        Total number of classes (and of clusters).
    """

    indices: np.ndarray
    labels: np.ndarray
    k: int

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64).reshape(-1)
        lab = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        if idx.shape != lab.shape:
            raise ValueError("indices and labels must have the same length")
        if len(np.unique(idx)) != len(idx):
            raise ValueError("supervised indices contain duplicates")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if lab.size and (lab.min() < 0 or lab.max() >= self.k):
            raise ValueError(f"supervised labels must lie in 0..{self.k - 1}")
        if idx.size and idx.min() < 0:
            raise ValueError("supervised indices must be non-negative")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "labels", lab)

    @classmethod
    def empty(cls, k: int) -> "PartialLabeling":
        return cls(np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64), k)

    @classmethod
    def from_mapping(cls, mapping: dict[int, int], k: int) -> "PartialLabeling":
        keys = sorted(mapping)
        return cls(np.array(keys, dtype=np.int64),
                   np.array([mapping[i] for i in keys], dtype=np.int64), k)

    @property
    def n_supervised(self) -> int:
        return len(self.indices)

    @property
    def present_labels(self) -> np.ndarray:
        """Labels with at least one exemplar, ascending."""
        return np.unique(self.labels)

    @property
    def G(self) -> int:
        return len(self.present_labels)

    def counts(self) -> np.ndarray:
        """Number of supervised points per label, length ``k``."""
        return np.bincount(self.labels, minlength=self.k)

    def unsupervised_indices(self, n: int) -> np.ndarray:
        if self.indices.size and self.indices.max() >= n:
            raise ValueError(f"supervised index out of range for n={n}")
        mask = np.ones(n, dtype=bool)
        mask[self.indices] = False
        return np.flatnonzero(mask)


def _check_k(k: int, n: int) -> None:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > n:
        raise ValueError(f"cannot choose k={k} centers from n={n} points")


def _draw(weights: np.ndarray, rng: np.random.Generator) -> int:
    """Inverse-transform draw of one position with probability ∝ ``weights``."""
    cdf = np.cumsum(weights)
    u = rng.random() * cdf[-1]
    pos = int(np.searchsorted(cdf, u, side="right"))
    # u * total can round up to total; fall back to the last positive weight
    if pos >= len(weights):
        pos = int(np.flatnonzero(weights > 0)[-1])
    return pos


def _d2_draw(eligible: np.ndarray, dist: np.ndarray, rng: np.random.Generator,
             exclude=()) -> int:
    """Draw from ``eligible`` with probability ∝ ``dist`` (D² of each eligible point).

    When the whole D² mass is zero the draw is uniform over the eligible
    points not listed in ``exclude`` (or over all of them if none remain).
    """
    total = dist.sum()
    if total > 0:
        return int(eligible[_draw(dist, rng)])
    pool = np.setdiff1d(eligible, np.asarray(list(exclude), dtype=np.int64))
    if pool.size == 0:
        pool = eligible
    return int(pool[rng.integers(pool.size)])


def d2_sample(X, eligible, C, rng: np.random.Generator, exclude=()) -> int:
    """Draw one index from ``eligible`` with probability proportional to D²(x).

    Parameters
    ----------
    X : array (n, d)
    eligible : array of int
        Candidate row indices.
    C : CenterSet or array (m, d)
        Current centers, non-empty.
    rng : numpy.random.Generator
        One uniform variate is consumed.
    exclude : iterable of int
        Indices to avoid in the all-zero-mass fallback only.
    """
    X = as_dataset(X)
    eligible = np.asarray(eligible, dtype=np.int64).reshape(-1)
    if eligible.size == 0:
        raise ValueError("d2_sample needs at least one eligible point")
    dist = d_squared(X[eligible], C)
    return _d2_draw(eligible, dist, rng, exclude)


def d2_probabilities(X, eligible, C) -> np.ndarray:
    """Exact sampling law of :func:`d2_sample` over ``eligible``."""
    X = as_dataset(X)
    eligible = np.asarray(eligible, dtype=np.int64).reshape(-1)
    dist = d_squared(X[eligible], C)
    total = dist.sum()
    if total > 0:
        return dist / total
    return np.full(eligible.size, 1.0 / eligible.size)


def uniform_init(X, k: int, rng: np.random.Generator) -> CenterSet:
    """``k`` distinct data points chosen uniformly without replacement."""
    X = as_dataset(X)
    _check_k(k, len(X))
    idx = rng.choice(len(X), size=k, replace=False)
    return CenterSet(X[idx], (UNIFORM_SAMPLED,) * k)


def _fill_d2(X, centers: CenterSet, eligible: np.ndarray, k: int,
             rng: np.random.Generator, chosen: list[int]) -> CenterSet:
    """Add D²-sampled centers from ``eligible`` until there are ``k``."""
    dist = d_squared(X[eligible], centers)
    while len(centers) < k:
        i = _d2_draw(eligible, dist, rng, exclude=chosen)
        chosen.append(i)
        centers = centers.append(X[i], D2_SAMPLED)
        dist = np.minimum(dist, pairwise_sq_dists(X[eligible], X[i])[:, 0])
    return centers


def kmeanspp_init(X, k: int, rng: np.random.Generator) -> CenterSet:
    """k-means++ seeding.

    The first center is a uniformly chosen data point; each further center is
    drawn from all points with probability proportional to D².
    """
    X = as_dataset(X)
    _check_k(k, len(X))
    first = int(rng.integers(len(X)))
    centers = CenterSet(X[[first]], (UNIFORM_SAMPLED,))
    return _fill_d2(X, centers, np.arange(len(X)), k, rng, [first])


def supervised_centroids(X, labeling: PartialLabeling) -> CenterSet | None:
    """Centroid of each supervised class, ascending label order."""
    X = as_dataset(X)
    if labeling.n_supervised == 0:
        return None
    if labeling.indices.max() >= len(X):
        raise ValueError(f"supervised index out of range for n={len(X)}")
    present = labeling.present_labels
    cents = np.array([X[labeling.indices[labeling.labels == lab]].mean(axis=0)
                      for lab in present])
    return CenterSet(cents, (SUPERVISED_CENTROID,) * len(present), present)


def _check_partial(X, labeling: PartialLabeling, k: int) -> np.ndarray:
    if labeling.k != k:
        raise ValueError(f"labeling is for k={labeling.k}, seeding asked for k={k}")
    G = labeling.G
    if G > k:
        raise ValueError(f"inconsistent labeling: {G} supervised classes but k={k}")
    unsup = labeling.unsupervised_indices(len(X))
    if k > G + len(unsup):
        raise ValueError(
            f"k={k} exceeds {G} supervised centroids + {len(unsup)} unsupervised points")
    return unsup


def ss_kmeanspp_init(X, labeling: PartialLabeling, k: int,
                     rng: np.random.Generator) -> CenterSet:
    """Semi-supervised k-means++ seeding.

    Starts from the centroid of every supervised class (ascending label), then
    draws the remaining ``k - G`` centers among the *unsupervised* points with
    probability proportional to D².  With no supervision this is exactly
    :func:`kmeanspp_init`, consuming the same random stream.
    """
    X = as_dataset(X)
    unsup = _check_partial(X, labeling, k)
    if labeling.G == 0:
        return kmeanspp_init(X, k, rng)
    centers = supervised_centroids(X, labeling)
    return _fill_d2(X, centers, unsup, k, rng, [])


def constrained_init(X, labeling: PartialLabeling, k: int,
                     rng: np.random.Generator) -> CenterSet:
    """Constrained-KMeans seeding: supervised centroids, then uniform picks
    (without replacement) among the unsupervised points."""
    X = as_dataset(X)
    unsup = _check_partial(X, labeling, k)
    centers = supervised_centroids(X, labeling)
    m = k - labeling.G
    if m == 0:
        return centers
    picks = rng.choice(unsup, size=m, replace=False)
    sampled = CenterSet(X[picks], (UNIFORM_SAMPLED,) * m)
    if centers is None:
        return sampled
    return CenterSet(
        np.vstack([centers.centers, sampled.centers]),
        centers.provenance + sampled.provenance,
        np.concatenate([centers.labels, sampled.labels]),
    )


def true_centroid_init(X, true_labels, k: int) -> CenterSet:
    """Centroid of every ground-truth class, label order ``0..k-1``."""
    X = as_dataset(X)
    y = np.asarray(true_labels, dtype=np.int64)
    if y.shape != (len(X),):
        raise ValueError("one true label is required per point")
    if y.min() < 0 or y.max() >= k:
        raise ValueError(f"true labels must lie in 0..{k - 1}")
    sizes = np.bincount(y, minlength=k)
    if np.any(sizes == 0):
        raise ValueError(f"classes without points: {np.flatnonzero(sizes == 0).tolist()}")
    sums = np.zeros((k, X.shape[1]))
    np.add.at(sums, y, X)
    return CenterSet(sums / sizes[:, None], (TRUE_CENTROID,) * k, np.arange(k))
