"""Performance measures: cost, fraction of optimal cost, and the Adjusted Rand Index."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from .geometry import potential
from .seeding import true_centroid_init


@dataclass(frozen=True)
class MetricsRecord:
    """Outcome of one replicate of one algorithm at one supervision level."""

    algorithm: str
    supervision_level: float
    supervised_classes: int
    replicate: int
    seed: int
    cost: float
    fraction_of_optimal: float
    lloyd_iterations: int
    ari: float
    converged: bool

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def as_dict(self) -> dict:
        return asdict(self)

    def measures(self) -> tuple:
        """The measured quantities only, without run identifiers."""
        return (self.cost, self.fraction_of_optimal, self.lloyd_iterations,
                self.ari, self.converged)


def cost(X, C) -> float:
    """Clustering cost, i.e. the potential of the whole dataset."""
    return potential(X, C)


def optimal_cost_proxy(X, true_labels, k: int | None = None) -> float:
    """Cost at the ground-truth class centroids."""
    y = np.asarray(true_labels)
    k = int(y.max()) + 1 if k is None else k
    return cost(X, true_centroid_init(X, y, k))


def fraction_of_optimal(X, C, true_labels, k: int | None = None,
                        optimal: float | None = None) -> float:
    """``cost(X, C)`` over the cost at the true class centroids.

    ``optimal`` may be passed to skip recomputing the denominator.
    """
    denom = optimal_cost_proxy(X, true_labels, k) if optimal is None else optimal
    if not denom > 0:
        raise ValueError("degenerate dataset: every point sits on its class centroid")
    return cost(X, C) / denom


def contingency_table(p1, p2) -> np.ndarray:
    p1 = np.asarray(p1).reshape(-1)
    p2 = np.asarray(p2).reshape(-1)
    if p1.shape != p2.shape:
        raise ValueError(f"partitions differ in size: {p1.size} vs {p2.size}")
    _, r = np.unique(p1, return_inverse=True)
    _, c = np.unique(p2, return_inverse=True)
    table = np.zeros((r.max() + 1, c.max() + 1), dtype=np.int64)
    np.add.at(table, (r, c), 1)
    return table


def _pairs(x):
    x = np.asarray(x, dtype=np.int64)
    return int(np.sum(x * (x - 1) // 2))


def adjusted_rand_index(p1, p2) -> float:
    """Hubert-Arabie Adjusted Rand Index between two labelings of the same points.

    Labels are arbitrary hashables; only the induced partitions matter.
    Identical partitions score 1.0.  When the chance-corrected denominator
    vanishes (both partitions all-singletons, or both a single block) the
    partitions are identical and the score is 1.0.
    """
    p1 = np.asarray(p1).reshape(-1)
    p2 = np.asarray(p2).reshape(-1)
    if p1.size != p2.size:
        raise ValueError(f"partitions differ in size: {p1.size} vs {p2.size}")
    n = p1.size
    if n < 2:
        raise ValueError("ARI needs at least two elements")
    table = contingency_table(p1, p2)
    sum_ij = _pairs(table)
    sum_a = _pairs(table.sum(axis=1))
    sum_b = _pairs(table.sum(axis=0))
    total = n * (n - 1) // 2
    # scaled by 2 * total so everything stays an exact integer
    num = 2 * (sum_ij * total - sum_a * sum_b)
    den = (sum_a + sum_b) * total - 2 * sum_a * sum_b
    if den == 0:
        return 1.0
    return num / den
