"""Monte Carlo supervision sweeps.

A sweep runs every (supervision level, replicate, algorithm) cell.  Each cell
draws its randomness from seeds derived with :class:`numpy.random.SeedSequence`
from ``(base_seed, stream, ...)`` so cells are independent of execution
order:

* dataset  (generated mixtures only): ``(base_seed, 0, replicate)``
* supervision:                          ``(base_seed, 1, level_index, replicate)``
* seeding:                              ``(base_seed, 2, level_index, replicate, algorithm_id)``

Algorithms in one replicate therefore share the dataset and the supervised
points, which makes comparisons between them paired.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .datagen import (
    GAUSSIAN_MIXTURE,
    LabeledDataset,
    MixtureSpec,
    classes_for_level,
    generate_mixture,
    iris_path,
    load_csv,
    sample_supervision,
)
from .lloyd import DEFAULT_MAX_ITER, assign, is_non_increasing, lloyd_iterate
from .metrics import MetricsRecord, adjusted_rand_index, cost, optimal_cost_proxy
from .seeding import constrained_init, ss_kmeanspp_init, true_centroid_init
from .theory import seeding_bound

ALGORITHMS = ("ss_kpp", "constrained", "ss_kpp_init_only", "constrained_init_only",
              "true_centroids")
ALGORITHM_IDS = {name: i for i, name in enumerate(ALGORITHMS)}

_DATA, _SUPERVISION, _SEEDING = 0, 1, 2

DESCENT_RTOL = 1e-9


def derive_seed(*keys: int) -> int:
    """64-bit seed hashed from a tuple of non-negative integers."""
    state = np.random.SeedSequence([int(k) for k in keys]).generate_state(1, dtype=np.uint64)
    return int(state[0])


class CellError(RuntimeError):
    """A sweep cell failed; the message identifies the cell."""


@lru_cache(maxsize=8)
def _cached_csv(path: str, label_column, header: bool) -> LabeledDataset:
    return load_csv(path, label_column=label_column, header=header)


@dataclass(frozen=True)
class ExperimentConfig:
    """What to run.  Set ``mixture`` for generated data (fresh per replicate)
    or ``input_path`` for a fixed CSV dataset."""

    levels: tuple[float, ...]
    algorithms: tuple[str, ...] = ("ss_kpp",)
    per_class: int = 5
    replicates: int = 100
    base_seed: int = 0
    max_iter: int = DEFAULT_MAX_ITER
    mixture: MixtureSpec | None = None
    input_path: str | None = None
    label_column: str | int = -1
    header: bool = True
    k: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(float(v) for v in self.levels))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if (self.mixture is None) == (self.input_path is None):
            raise ValueError("set exactly one of mixture or input_path")
        if not self.levels:
            raise ValueError("at least one supervision level is required")
        if any(not 0.0 <= v <= 1.0 for v in self.levels):
            raise ValueError(f"supervision levels must lie in [0, 1]: {self.levels}")
        if list(self.levels) != sorted(self.levels):
            raise ValueError(f"supervision levels must be sorted: {self.levels}")
        unknown = [a for a in self.algorithms if a not in ALGORITHM_IDS]
        if unknown or not self.algorithms:
            raise ValueError(f"unknown algorithms {unknown}; choose from {ALGORITHMS}")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.per_class < 1:
            raise ValueError("per_class must be >= 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.base_seed < 0 or self.base_seed >= 2**64:
            raise ValueError("base_seed must be a 64-bit unsigned integer")
        if self.mixture is not None and self.k is not None and self.k != self.mixture.k:
            raise ValueError(f"k={self.k} disagrees with mixture k={self.mixture.k}")

    def dataset(self, replicate: int) -> LabeledDataset:
        if self.mixture is not None:
            rng = np.random.default_rng(derive_seed(self.base_seed, _DATA, replicate))
            return generate_mixture(self.mixture, rng)
        ds = _cached_csv(str(self.input_path), self.label_column, self.header)
        if self.k is not None and self.k != ds.k:
            raise ValueError(f"k={self.k} but {self.input_path} has {ds.k} classes")
        return ds

    def classes_at(self, level_index: int, k: int) -> int:
        return classes_for_level(self.levels[level_index], k)


def gm_preset(**overrides) -> ExperimentConfig:
    """24-component mixture in 15-D, side 10, 100 points per component,
    5 exemplars per supervised class, one level per class count."""
    k = GAUSSIAN_MIXTURE.k
    base = dict(levels=tuple(g / k for g in range(k + 1)), mixture=GAUSSIAN_MIXTURE,
                per_class=5, replicates=100)
    base.update(overrides)
    return ExperimentConfig(**base)


def iris_preset(**overrides) -> ExperimentConfig:
    """Iris with 5 exemplars per supervised species."""
    base = dict(levels=(0.0, 1 / 3, 2 / 3, 1.0), input_path=iris_path(),
                label_column="species", per_class=5, replicates=100)
    base.update(overrides)
    return ExperimentConfig(**base)


def _seed_centers(algorithm, X, ds, labeling, rng):
    if algorithm.startswith("ss_kpp"):
        return ss_kmeanspp_init(X, labeling, ds.k, rng)
    if algorithm.startswith("constrained"):
        return constrained_init(X, labeling, ds.k, rng)
    return true_centroid_init(X, ds.true_labels, ds.k)


def run_once(config: ExperimentConfig, level_index: int, replicate: int, algorithm: str,
             dataset: LabeledDataset | None = None, optimal: float | None = None,
             observer=None) -> MetricsRecord:
    """Run one cell: sample supervision, seed, run Lloyd (or assign only), measure.

    ``dataset`` and ``optimal`` (cost at the true class centroids) may be
    passed to reuse work across cells of the same replicate.  ``observer``,
    if given, is called as ``observer(level_index, replicate, algorithm,
    lloyd_result)`` after every Lloyd run.
    """
    try:
        ds = config.dataset(replicate) if dataset is None else dataset
        X = ds.data
        if optimal is None:
            optimal = optimal_cost_proxy(X, ds.true_labels, ds.k)
        G = config.classes_at(level_index, ds.k)
        sup_rng = np.random.default_rng(
            derive_seed(config.base_seed, _SUPERVISION, level_index, replicate))
        labeling = sample_supervision(ds, G, config.per_class, sup_rng)
        seed = derive_seed(config.base_seed, _SEEDING, level_index, replicate,
                           ALGORITHM_IDS[algorithm])
        C0 = _seed_centers(algorithm, X, ds, labeling, np.random.default_rng(seed))

        if algorithm.endswith("_init_only"):
            centers, labels = C0, assign(X, C0, labeling).labels
            iterations, converged = 0, True
        else:
            res = lloyd_iterate(X, C0, labeling, config.max_iter)
            if observer is not None:
                observer(level_index, replicate, algorithm, res)
            if not is_non_increasing(res.history, DESCENT_RTOL):
                raise RuntimeError("Lloyd cost sequence increased")
            centers, labels = res.centers, res.assignment.labels
            iterations, converged = res.iterations, res.converged

        c = cost(X, centers)
        return MetricsRecord(
            algorithm=algorithm,
            supervision_level=config.levels[level_index],
            supervised_classes=G,
            replicate=replicate,
            seed=seed,
            cost=c,
            fraction_of_optimal=c / optimal,
            lloyd_iterations=iterations,
            ari=adjusted_rand_index(ds.true_labels, labels),
            converged=converged,
        )
    except Exception as exc:
        raise CellError(f"cell failed (level index {level_index}, replicate {replicate}, "
                        f"algorithm {algorithm}): {exc}") from exc


def _run_replicate(config: ExperimentConfig, replicate: int,
                   observer=None) -> list[MetricsRecord]:
    ds = config.dataset(replicate)
    optimal = optimal_cost_proxy(ds.data, ds.true_labels, ds.k)
    return [run_once(config, li, replicate, alg, ds, optimal, observer)
            for li in range(len(config.levels)) for alg in config.algorithms]


_METRICS = ("cost", "fraction_of_optimal", "lloyd_iterations", "ari")


@dataclass
class SweepReport:
    config: ExperimentConfig
    rows: list[MetricsRecord] = field(default_factory=list)

    def select(self, algorithm: str, level_index: int | None = None) -> list[MetricsRecord]:
        out = [r for r in self.rows if r.algorithm == algorithm]
        if level_index is not None:
            lvl = self.config.levels[level_index]
            out = [r for r in out if r.supervision_level == lvl]
        return out

    def values(self, metric: str, algorithm: str, level_index: int) -> np.ndarray:
        """Metric per replicate, in replicate order."""
        rows = sorted(self.select(algorithm, level_index), key=lambda r: r.replicate)
        return np.array([getattr(r, metric) for r in rows], dtype=np.float64)

    def summary(self) -> list[dict]:
        """Mean and standard deviation of each metric per (algorithm, level)."""
        out = []
        for alg in self.config.algorithms:
            for li, lvl in enumerate(self.config.levels):
                rows = self.select(alg, li)
                entry = {"algorithm": alg, "supervision_level": lvl,
                         "supervised_classes": rows[0].supervised_classes if rows else None,
                         "replicates": len(rows)}
                for m in _METRICS:
                    v = np.array([getattr(r, m) for r in rows], dtype=np.float64)
                    entry[f"{m}_mean"] = float(v.mean())
                    entry[f"{m}_std"] = float(v.std(ddof=1)) if len(v) > 1 else 0.0
                entry["all_converged"] = all(r.converged for r in rows)
                out.append(entry)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        names = MetricsRecord.field_names()
        w.writerow(names)
        for r in self.rows:
            w.writerow([_fmt(getattr(r, n)) for n in names])
        return buf.getvalue()

    def summary_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def run_sweep(config: ExperimentConfig, workers: int = 1, observer=None) -> SweepReport:
    """Run every cell.  Rows come out ordered by (replicate, level, algorithm)
    whatever ``workers`` is.  ``observer`` (see :func:`run_once`) needs
    ``workers == 1``."""
    reps = range(config.replicates)
    if observer is not None and workers > 1:
        raise ValueError("an observer can only be used with workers=1")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_replicate, [config] * len(reps), reps))
    else:
        chunks = [_run_replicate(config, r, observer) for r in reps]
    return SweepReport(config, [row for chunk in chunks for row in chunk])


@dataclass(frozen=True)
class BoundRow:
    algorithm: str
    supervision_level: float
    supervised_classes: int
    bound: float
    mean_fraction: float
    std_fraction: float
    above_bound: bool


def level_bound(k: int, G: int, class_sizes=None, per_class: int | None = None) -> float:
    """Expected-cost bound at ``G`` supervised classes (all classes equally supervised)."""
    if G < k:
        return seeding_bound(k, G)
    return seeding_bound(k, G, class_sizes, [per_class] * k)


def report_bound(config: ExperimentConfig, report: SweepReport) -> list[BoundRow]:
    """Mean fraction-of-optimal per (algorithm, level) next to the bound.

    The bound concerns seeding alone, so compare it with the ``*_init_only``
    algorithms; other algorithms are listed too since Lloyd only lowers cost.
    A row is flagged only when the mean exceeds the bound by more than two
    standard errors: with every class supervised the expected ratio equals the
    bound, so a plain ``mean > bound`` test would fire on half of all runs.
    """
    ds = config.dataset(0)
    out = []
    for alg in config.algorithms:
        for li, lvl in enumerate(config.levels):
            v = report.values("fraction_of_optimal", alg, li)
            if v.size == 0:
                continue
            G = config.classes_at(li, ds.k)
            b = level_bound(ds.k, G, ds.class_sizes(), config.per_class)
            mean = float(v.mean())
            out.append(BoundRow(alg, lvl, G, b, mean,
                                float(v.std(ddof=1)) if v.size > 1 else 0.0,
                                mean - 2 * standard_error(v) > b))
    return out


def format_bound_table(rows: list[BoundRow]) -> str:
    lines = [f"{'algorithm':<24}{'level':>8}{'G':>5}{'bound':>10}{'mean':>10}{'std':>10}  flag"]
    for r in rows:
        flag = "ABOVE" if r.above_bound else "ok"
        lines.append(f"{r.algorithm:<24}{r.supervision_level:>8.4f}{r.supervised_classes:>5d}"
                     f"{r.bound:>10.4f}{r.mean_fraction:>10.4f}{r.std_fraction:>10.4f}  {flag}")
    return "\n".join(lines)


def standard_error(v) -> float:
    v = np.asarray(v, dtype=np.float64)
    return float(v.std(ddof=1) / math.sqrt(v.size)) if v.size > 1 else 0.0

