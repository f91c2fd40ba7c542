"""Distances, centroids and the k-means potential.

Points are rows of a 2-D float array of shape ``(n, d)``.  Every distance in
this package is the *squared* Euclidean distance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SUPERVISED_CENTROID = "supervised_centroid"
D2_SAMPLED = "d2_sampled"
UNIFORM_SAMPLED = "uniform_sampled"
TRUE_CENTROID = "true_centroid"

PROVENANCE_TAGS = (SUPERVISED_CENTROID, D2_SAMPLED, UNIFORM_SAMPLED, TRUE_CENTROID)

# class label carried by centers that do not represent a class
NO_CLASS = -1


def as_dataset(X) -> np.ndarray:
    """Validate ``X`` and return it as a C-contiguous float64 array ``(n, d)``."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError(f"dataset must be 2-D (n, d), got shape {X.shape}")
    if X.shape[0] < 1 or X.shape[1] < 1:
        raise ValueError(f"dataset needs n >= 1 and d >= 1, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("dataset contains NaN or infinite coordinates")
    return np.ascontiguousarray(X)


@dataclass
class CenterSet:
    """An ordered list of centers with a provenance tag per center.

    ``labels`` holds the class label a center stands for (supervised or true
    class centroids) and ``NO_CLASS`` for sampled centers.  Pinned points are
    routed to centers through this field.
    """

    centers: np.ndarray
    provenance: tuple[str, ...]
    labels: np.ndarray = field(default=None)

    def __post_init__(self):
        self.centers = as_dataset(self.centers)
        self.provenance = tuple(self.provenance)
        if len(self.provenance) != len(self.centers):
            raise ValueError("one provenance tag is required per center")
        bad = set(self.provenance) - set(PROVENANCE_TAGS)
        if bad:
            raise ValueError(f"unknown provenance tags: {sorted(bad)}")
        if self.labels is None:
            self.labels = np.full(len(self.centers), NO_CLASS, dtype=np.int64)
        else:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if self.labels.shape != (len(self.centers),):
                raise ValueError("one class label is required per center")

    def __len__(self) -> int:
        return len(self.centers)

    @property
    def d(self) -> int:
        return self.centers.shape[1]

    def with_centers(self, centers: np.ndarray) -> "CenterSet":
        """Same provenance and class labels, new coordinates."""
        return CenterSet(centers, self.provenance, self.labels.copy())

    def append(self, point, tag: str, label: int = NO_CLASS) -> "CenterSet":
        point = np.asarray(point, dtype=np.float64).reshape(1, -1)
        return CenterSet(
            np.vstack([self.centers, point]),
            self.provenance + (tag,),
            np.append(self.labels, label),
        )

    @classmethod
    def plain(cls, centers, tag: str = D2_SAMPLED) -> "CenterSet":
        """Wrap bare coordinates, tagging every center with ``tag``."""
        centers = as_dataset(centers)
        return cls(centers, (tag,) * len(centers))


def _center_array(C) -> np.ndarray:
    if isinstance(C, CenterSet):
        return C.centers
    C = np.asarray(C, dtype=np.float64)
    if C.ndim == 1:
        C = C.reshape(1, -1)
    if C.ndim != 2 or C.shape[0] == 0:
        raise ValueError("center set must be a non-empty (k, d) array")
    return C


def squared_distance(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(diff @ diff)


def centroid(points) -> np.ndarray:
    """Coordinate-wise mean of a non-empty set of points."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points.reshape(1, -1)
    if points.shape[0] == 0:
        raise ValueError("centroid of an empty set is undefined")
    return points.mean(axis=0)


def pairwise_sq_dists(X, C) -> np.ndarray:
    """Matrix of squared distances, shape ``(n, k)``.

    Computed from explicit differences rather than the ``|x|^2 - 2x.c + |c|^2``
    expansion so that exact ties stay exact.
    """
    X = np.asarray(X, dtype=np.float64)
    C = _center_array(C)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.shape[1] != C.shape[1]:
        raise ValueError(f"dimension mismatch: data d={X.shape[1]}, centers d={C.shape[1]}")
    out = np.empty((X.shape[0], C.shape[0]))
    for j, c in enumerate(C):
        diff = X - c
        out[:, j] = np.einsum("ij,ij->i", diff, diff)
    return out


def d_squared(X, C) -> np.ndarray | float:
    """Squared distance from each point to its nearest center.

    A single point (1-D input) returns a float, a dataset returns a vector.
    """
    single = np.ndim(X) == 1
    D = pairwise_sq_dists(X, C).min(axis=1)
    return float(D[0]) if single else D


def potential(A, C) -> float:
    """k-means potential: sum over ``A`` of the squared distance to the nearest center."""
    A = np.asarray(A, dtype=np.float64)
    if A.size == 0:
        _center_array(C)
        return 0.0
    return float(np.sum(d_squared(np.atleast_2d(A), C)))


def nearest_center(X, C) -> np.ndarray:
    """Index of the nearest center per point; ties go to the lowest index."""
    # argmin returns the first minimum, which is the lowest-index rule
    return np.argmin(pairwise_sq_dists(X, C), axis=1)


def optimal_cluster_partition(X, C) -> list[np.ndarray]:
    """Group point indices by nearest center.  Groups may be empty."""
    nearest = nearest_center(X, C)
    k = len(_center_array(C))
    return [np.flatnonzero(nearest == j) for j in range(k)]
