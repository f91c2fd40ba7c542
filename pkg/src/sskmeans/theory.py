"""Closed-form expectations for seeding with supervised centroids, and
exhaustive-enumeration oracles that check them on small inputs.

Conventions: ``n`` is a cluster size, ``g`` the number of its points drawn
uniformly without replacement as exemplars, ``k`` the cluster count and ``G``
the number of classes that have exemplars.  Logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .geometry import as_dataset, centroid, d_squared, potential

MAX_ENUMERATION_N = 12


def harmonic(t: int) -> float:
    """``H_t = 1 + 1/2 + ... + 1/t`` (``H_0 = 0``)."""
    if t < 0:
        raise ValueError(f"harmonic number undefined for t={t}")
    return math.fsum(1.0 / j for j in range(1, t + 1))


@dataclass(frozen=True)
class BoundParams:
    """Bookkeeping for adding ``t`` D²-sampled centers when ``u = k - G``
    clusters are still uncovered."""

    k: int
    G: int
    t: int | None = None
    supervised_counts: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= self.G <= self.k:
            raise ValueError(f"need 0 <= G <= k, got G={self.G}, k={self.k}")
        if self.t is None:
            object.__setattr__(self, "t", self.u)
        if not 0 <= self.t <= self.u:
            raise ValueError(f"need 0 <= t <= u={self.u}, got t={self.t}")

    @property
    def u(self) -> int:
        return self.k - self.G

    @property
    def harmonic(self) -> float:
        return harmonic(self.t)


def exemplar_mean_factor(n: int, g: int) -> float:
    """Expected potential of a cluster around the mean of ``g`` random
    members, as a multiple of its optimal potential: ``1 + (n-g)/(g(n-1))``.

    For ``n = 1`` the only choice is the point itself and the factor is 1.
    """
    if g < 1 or g > n:
        raise ValueError(f"need 1 <= g <= n, got n={n}, g={g}")
    if n == 1:
        return 1.0
    return 1.0 + (n - g) / (g * (n - 1))


def optimal_potential(A) -> float:
    """Potential of ``A`` around its own centroid."""
    A = as_dataset(A)
    return potential(A, centroid(A))


def _check_enumerable(A, g: int) -> np.ndarray:
    A = as_dataset(A)
    n = len(A)
    if n > MAX_ENUMERATION_N:
        raise ValueError(f"enumeration limited to n <= {MAX_ENUMERATION_N}, got n={n}")
    if g < 1 or g > n:
        raise ValueError(f"need 1 <= g <= n, got n={n}, g={g}")
    return A


def exemplar_mean_oracle(A, g: int) -> float:
    """Mean of ``potential(A, centroid(S))`` over every ``g``-subset ``S`` of ``A``."""
    A = _check_enumerable(A, g)
    vals = [potential(A, A[list(S)].mean(axis=0)) for S in combinations(range(len(A)), g)]
    return math.fsum(vals) / len(vals)


def expected_potential_from_exemplars(A, g: int) -> float:
    """Closed form matching :func:`exemplar_mean_oracle`."""
    A = as_dataset(A)
    return exemplar_mean_factor(len(A), g) * optimal_potential(A)


def subset_moment_oracles(A, g: int) -> tuple[np.ndarray, float]:
    """Exact ``E[sum_S x]`` and ``E[|sum_S x|^2]`` over uniform ``g``-subsets, by enumeration."""
    A = _check_enumerable(A, g)
    firsts, seconds = [], []
    for S in combinations(range(len(A)), g):
        s = A[list(S)].sum(axis=0)
        firsts.append(s)
        seconds.append(float(s @ s))
    return np.mean(firsts, axis=0), math.fsum(seconds) / len(seconds)


def subset_first_moment(A, g: int) -> np.ndarray:
    """``(g/n) * sum_i x_i``."""
    A = as_dataset(A)
    return (g / len(A)) * A.sum(axis=0)


def subset_second_moment(A, g: int) -> float:
    """``g(g-1)/(n(n-1)) * sum_{i != j} x_i.x_j + (g/n) * sum_i x_i.x_i``."""
    A = as_dataset(A)
    n = len(A)
    gram = A @ A.T
    diag = float(np.trace(gram))
    off = float(gram.sum()) - diag
    cross = 0.0 if n == 1 else g * (g - 1) / (n * (n - 1)) * off
    return cross + g / n * diag


def shift_identity(A, z) -> tuple[float, float]:
    """Both sides of ``sum|a - z|^2 = sum|a - c(A)|^2 + n|z - c(A)|^2``."""
    A = as_dataset(A)
    z = np.asarray(z, dtype=np.float64)
    c = centroid(A)
    lhs = potential(A, z)
    rhs = potential(A, c) + len(A) * float((z - c) @ (z - c))
    return lhs, rhs


def d2_center_check(cluster, C) -> tuple[float, float]:
    """Exact conditional expectation of the cluster's potential after adding one
    D²-weighted center drawn from inside the cluster, against 8x its optimum.

    Returns ``(lhs, rhs)``; the guarantee is ``lhs <= rhs``.
    """
    cluster = as_dataset(cluster)
    C = C.centers if hasattr(C, "centers") else as_dataset(C)
    dist = d_squared(cluster, C)
    mass = dist.sum()
    if not mass > 0:
        raise ValueError("cluster has zero D² mass; it is already covered")
    current = dist
    lhs = 0.0
    for i, x in enumerate(cluster):
        if dist[i] == 0:
            continue
        new = np.minimum(current, np.einsum("ij,ij->i", cluster - x, cluster - x))
        lhs += dist[i] / mass * float(new.sum())
    return lhs, 8.0 * optimal_potential(cluster)


def seeding_bound(k: int, G: int, class_sizes=None, supervised_counts=None) -> float:
    """Multiplicative bound on the expected seeding cost over the optimum:
    ``8 (2 + ln(k - G))``.

    With every class supervised (``G = k``) there is nothing to sample and the
    bound is the largest exemplar-mean factor over the classes, which needs
    ``class_sizes`` and ``supervised_counts`` (one entry per class).
    """
    if G < 0 or G > k:
        raise ValueError(f"need 0 <= G <= k, got G={G}, k={k}")
    if G < k:
        return 8.0 * (2.0 + math.log(k - G))
    if class_sizes is None or supervised_counts is None:
        raise ValueError("G = k needs class_sizes and supervised_counts")
    sizes = list(class_sizes)
    counts = list(supervised_counts)
    if len(sizes) != len(counts):
        raise ValueError("class_sizes and supervised_counts differ in length")
    return max(exemplar_mean_factor(n, g) for n, g in zip(sizes, counts))


def supervised_bound(class_potentials, class_sizes, supervised_counts) -> float:
    """Tighter bound keeping the per-class terms that the headline bound drops.

    All three arguments have one entry per class; classes without exemplars
    have a supervised count of 0.  With ``phi_j`` the optimal potential of
    class ``j``, ``n_j`` its size, ``g_j`` its exemplar count and ``phi`` the
    total, the bound on the expected seeding cost over ``phi`` is::

        (8 phi - sum_{g_j > 0} (8 - factor(n_j, g_j)) phi_j) (1 + H_{k-G}) / phi
    """
    phis = np.asarray(class_potentials, dtype=np.float64)
    sizes = np.asarray(class_sizes, dtype=np.int64)
    counts = np.asarray(supervised_counts, dtype=np.int64)
    if not (phis.shape == sizes.shape == counts.shape) or phis.ndim != 1:
        raise ValueError("need one potential, size and count per class")
    total = float(phis.sum())
    if not total > 0:
        raise ValueError("optimal potential must be positive")
    sup = np.flatnonzero(counts > 0)
    slack = math.fsum((8.0 - exemplar_mean_factor(int(sizes[j]), int(counts[j]))) * phis[j]
                      for j in sup)
    return (8.0 * total - slack) * (1.0 + harmonic(len(phis) - len(sup))) / total


def _rel_gap(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    scale = max(1.0, float(np.max(np.abs(b))))
    return float(np.max(np.abs(a - b))) / scale


def _random_points(rng, n, d):
    # mixed scales so that cancellation is exercised
    return rng.normal(size=(n, d)) * rng.uniform(0.1, 10.0) + rng.uniform(-5, 5, size=d)


def oracle_suites(rng: np.random.Generator, datasets_per_cell: int = 50,
                  max_n: int = 10, shift_instances: int = 1000,
                  d2_instances: int = 100) -> dict[str, dict]:
    """Check every closed form against its enumeration oracle on random inputs.

    Returns ``{suite: {"checked": int, "failures": int, "worst": float}}``
    where ``worst`` is the largest relative gap (or, for the D² bound, the
    largest ``lhs / rhs``).
    """
    dims = (1, 2, 3, 5)
    results = {}

    gaps, moments = [], []
    for n in range(2, max_n + 1):
        for g in range(1, n + 1):
            for r in range(datasets_per_cell):
                A = _random_points(rng, n, dims[r % len(dims)])
                gaps.append(_rel_gap(exemplar_mean_oracle(A, g), expected_potential_from_exemplars(A, g)))
                first, second = subset_moment_oracles(A, g)
                moments.append(max(_rel_gap(first, subset_first_moment(A, g)),
                                   _rel_gap(second, subset_second_moment(A, g))))
    results["exemplar_mean_potential"] = _summarize(gaps, 1e-9)
    results["subset_moments"] = _summarize(moments, 1e-9)

    shift = []
    for _ in range(shift_instances):
        n, d = int(rng.integers(1, 21)), int(rng.integers(1, 9))
        A = _random_points(rng, n, d)
        z = rng.normal(size=d) * rng.uniform(0.1, 20.0)
        lhs, rhs = shift_identity(A, z)
        shift.append(abs(lhs - rhs) / max(1.0, lhs))
    results["shift_identity"] = _summarize(shift, 1e-9)

    ratios = []
    for _ in range(d2_instances):
        n, d = int(rng.integers(1, 51)), int(rng.integers(1, 6))
        cluster = _random_points(rng, n, d)
        C = rng.normal(size=(int(rng.integers(1, 5)), d)) * 20.0
        lhs, rhs = d2_center_check(cluster, C)
        ratios.append(lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf))
    results["d2_center_bound"] = {"checked": len(ratios),
                                  "failures": int(sum(r > 1.0 for r in ratios)),
                                  "worst": float(max(ratios))}
    return results


def _summarize(gaps, tol):
    return {"checked": len(gaps), "failures": int(sum(g > tol for g in gaps)),
            "worst": float(max(gaps))}
