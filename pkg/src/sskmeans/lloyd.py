"""Lloyd iterations with pinned (supervised) points.

Supervised points never change cluster: each is routed to the center that
carries its class label.  Every other point goes to its nearest center.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import CenterSet, as_dataset, pairwise_sq_dists
from .seeding import PartialLabeling

DEFAULT_MAX_ITER = 10_000


@dataclass
class Assignment:
    labels: np.ndarray  # center index per point
    pinned: np.ndarray  # bool per point

    def __eq__(self, other):
        if not isinstance(other, Assignment):
            return NotImplemented
        return (np.array_equal(self.labels, other.labels)
                and np.array_equal(self.pinned, other.pinned))


@dataclass
class LloydResult:
    centers: CenterSet
    assignment: Assignment
    iterations: int
    converged: bool
    # assignment cost after each assign and each update step, in order
    history: np.ndarray


def _pin_targets(centers: CenterSet, labeling: PartialLabeling) -> np.ndarray:
    """Center index each supervised point is pinned to."""
    slot = {}
    for j, lab in enumerate(centers.labels):
        if lab >= 0 and lab not in slot:
            slot[int(lab)] = j
    missing = sorted(set(labeling.present_labels.tolist()) - slot.keys())
    if missing:
        raise ValueError(f"no center carries supervised label(s) {missing}")
    return np.array([slot[int(lab)] for lab in labeling.labels], dtype=np.int64)


def assign(X, centers: CenterSet, labeling: PartialLabeling | None = None) -> Assignment:
    """Nearest-center assignment with supervised points pinned to their class center.

    Ties between centers go to the lowest center index.
    """
    X = as_dataset(X)
    if labeling is not None and labeling.k != len(centers):
        raise ValueError(
            f"labeling expects k={labeling.k} centers, center set has {len(centers)}")
    labels = np.argmin(pairwise_sq_dists(X, centers), axis=1)
    pinned = np.zeros(len(X), dtype=bool)
    if labeling is not None and labeling.n_supervised:
        labels[labeling.indices] = _pin_targets(centers, labeling)
        pinned[labeling.indices] = True
    return Assignment(labels, pinned)


def update_centers(X, assignment: Assignment, k: int,
                   previous: CenterSet | np.ndarray | None = None) -> np.ndarray:
    """Centroid of each cluster; an empty cluster keeps its previous center.

    Returns the new ``(k, d)`` coordinate array.
    """
    X = as_dataset(X)
    labels = np.asarray(assignment.labels)
    if labels.size and (labels.min() < 0 or labels.max() >= k):
        raise ValueError(f"assignment labels must lie in 0..{k - 1}")
    sizes = np.bincount(labels, minlength=k)
    sums = np.zeros((k, X.shape[1]))
    np.add.at(sums, labels, X)
    empty = sizes == 0
    if np.any(empty):
        if previous is None:
            raise ValueError(f"clusters {np.flatnonzero(empty).tolist()} are empty "
                             "and no previous centers were given")
        prev = previous.centers if isinstance(previous, CenterSet) else np.asarray(previous)
        sums[empty] = prev[empty]
        sizes = np.where(empty, 1, sizes)
    return sums / sizes[:, None]


def assignment_cost(X, centers, assignment: Assignment) -> float:
    """Sum of squared distances from each point to its *assigned* center.

    Equals the potential when nothing is pinned.
    """
    C = centers.centers if isinstance(centers, CenterSet) else np.asarray(centers)
    diff = np.asarray(X) - C[assignment.labels]
    return float(np.einsum("ij,ij->", diff, diff))


def lloyd_iterate(X, C0: CenterSet, labeling: PartialLabeling | None = None,
                  max_iter: int = DEFAULT_MAX_ITER) -> LloydResult:
    """Alternate assignment and centroid updates until the assignment is stable.

    One iteration is one assign + update round.  The run converges at round
    ``t`` when the centers produced by that round reproduce the round's own
    assignment, so starting at a fixed point costs exactly one iteration.

    ``history`` records the assignment cost after every assign and every
    update step; it is non-increasing up to rounding.
    """
    X = as_dataset(X)
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    k = len(C0)
    centers = C0
    current = assign(X, centers, labeling)
    history = [assignment_cost(X, centers, current)]
    converged = False
    iterations = 0
    while iterations < max_iter:
        centers = centers.with_centers(update_centers(X, current, k, centers))
        iterations += 1
        history.append(assignment_cost(X, centers, current))
        nxt = assign(X, centers, labeling)
        history.append(assignment_cost(X, centers, nxt))
        if nxt == current:
            converged = True
            break
        current = nxt
    return LloydResult(centers, current, iterations, converged, np.array(history))


def is_non_increasing(seq, rtol: float = 1e-9) -> bool:
    """True when every step of ``seq`` rises by at most ``rtol`` relative."""
    seq = np.asarray(seq, dtype=np.float64)
    if seq.size < 2:
        return True
    rise = seq[1:] - seq[:-1]
    slack = rtol * np.maximum(np.abs(seq[:-1]), 1.0)
    return bool(np.all(rise <= slack))
