"""Synthetic Gaussian mixtures, supervision sampling, and CSV datasets.

Class labels are integers ``0..k-1`` throughout.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .geometry import as_dataset
from .seeding import PartialLabeling


@dataclass(frozen=True)
class MixtureSpec:
    """Isotropic Gaussian mixture with centers uniform in ``[0, side]^d``."""

    k: int = 24
    d: int = 15
    side: float = 10.0
    n_per_cluster: int = 100
    sigma: float = 1.0

    def __post_init__(self):
        if self.k < 1 or self.d < 1 or self.n_per_cluster < 1:
            raise ValueError("k, d and n_per_cluster must all be >= 1")
        if not self.side > 0:
            raise ValueError(f"side must be positive, got {self.side}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


# the experiments' synthetic dataset
GAUSSIAN_MIXTURE = MixtureSpec()
# side length at which the mixture is about as hard as Iris (by ARI)
IRIS_LIKE_MIXTURE = MixtureSpec(side=3.25)


@dataclass
class LabeledDataset:
    data: np.ndarray
    true_labels: np.ndarray
    k: int
    class_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.data = as_dataset(self.data)
        self.true_labels = np.asarray(self.true_labels, dtype=np.int64)
        if self.true_labels.shape != (len(self.data),):
            raise ValueError("one true label is required per point")
        if self.true_labels.min() < 0 or self.true_labels.max() >= self.k:
            raise ValueError(f"true labels must lie in 0..{self.k - 1}")
        if not self.class_names:
            self.class_names = [str(j) for j in range(self.k)]

    @property
    def n(self) -> int:
        return len(self.data)

    @property
    def d(self) -> int:
        return self.data.shape[1]

    def class_sizes(self) -> np.ndarray:
        return np.bincount(self.true_labels, minlength=self.k)


def generate_mixture(spec: MixtureSpec, rng: np.random.Generator) -> LabeledDataset:
    """Draw ``spec.k`` centers uniformly in the hypercube, then
    ``spec.n_per_cluster`` normal points around each.

    Points are grouped by component in label order.
    """
    centers = rng.uniform(0.0, spec.side, size=(spec.k, spec.d))
    noise = rng.standard_normal((spec.k, spec.n_per_cluster, spec.d))
    X = (centers[:, None, :] + spec.sigma * noise).reshape(-1, spec.d)
    y = np.repeat(np.arange(spec.k), spec.n_per_cluster)
    return LabeledDataset(X, y, spec.k)


def classes_for_level(level: float, k: int) -> int:
    """Number of supervised classes for a supervision level in ``[0, 1]``
    (nearest integer to ``level * k``, halves rounded up)."""
    if not 0.0 <= level <= 1.0:
        raise ValueError(f"supervision level must lie in [0, 1], got {level}")
    return min(k, int(np.floor(level * k + 0.5)))


def sample_supervision(ds: LabeledDataset, classes: int, per_class: int,
                       rng: np.random.Generator) -> PartialLabeling:
    """Pick ``classes`` distinct classes uniformly, then ``per_class`` members
    of each uniformly without replacement, and label them."""
    if not 0 <= classes <= ds.k:
        raise ValueError(f"cannot supervise {classes} of {ds.k} classes")
    if classes and per_class < 1:
        raise ValueError(f"per_class must be >= 1, got {per_class}")
    chosen = np.sort(rng.choice(ds.k, size=classes, replace=False))
    sizes = ds.class_sizes()
    small = [int(c) for c in chosen if sizes[c] < per_class]
    if small:
        raise ValueError(f"classes {small} have fewer than {per_class} members")
    idx, lab = [], []
    for c in chosen:
        members = np.flatnonzero(ds.true_labels == c)
        idx.append(rng.choice(members, size=per_class, replace=False))
        lab.append(np.full(per_class, c))
    if not idx:
        return PartialLabeling.empty(ds.k)
    return PartialLabeling(np.concatenate(idx), np.concatenate(lab), ds.k)


class CSVFormatError(ValueError):
    """Malformed dataset file; the message names the offending row/column."""


def _resolve_label_column(label_column, header: list[str] | None, width: int) -> int:
    if isinstance(label_column, str) and not label_column.lstrip("-").isdigit():
        if header is None:
            raise CSVFormatError(f"label column {label_column!r} given by name but file has no header")
        if label_column not in header:
            raise CSVFormatError(f"label column {label_column!r} not in header {header}")
        return header.index(label_column)
    col = int(label_column)
    if col < 0:
        col += width
    if not 0 <= col < width:
        raise CSVFormatError(f"label column {label_column} out of range for {width} columns")
    return col


def load_csv(path, label_column=-1, header: bool = True) -> LabeledDataset:
    """Read a numeric feature matrix with one categorical label column.

    Parameters
    ----------
    path : path-like
    label_column : str or int
        Header name, or zero-based index (negative counts from the end).
    header : bool
        Whether the first row holds column names.

    Labels are mapped to ``0..k-1`` in order of first appearance; the original
    values are kept in ``class_names``.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [(i, r) for i, r in enumerate(csv.reader(fh), start=1) if r and any(c.strip() for c in r)]
    names = None
    if header:
        if not rows:
            raise CSVFormatError(f"{path}: empty file")
        names = [c.strip() for c in rows[0][1]]
        rows = rows[1:]
    if not rows:
        raise CSVFormatError(f"{path}: no data rows")
    width = len(names) if names is not None else len(rows[0][1])
    col = _resolve_label_column(label_column, names, width)
    if width < 2:
        raise CSVFormatError(f"{path}: need at least one feature column and a label column")

    feats, labels = [], []
    for lineno, row in rows:
        if len(row) != width:
            raise CSVFormatError(f"{path}: row {lineno} has {len(row)} fields, expected {width}")
        vals = []
        for j, cell in enumerate(row):
            if j == col:
                continue
            try:
                v = float(cell)
            except ValueError:
                colname = names[j] if names else str(j)
                raise CSVFormatError(
                    f"{path}: row {lineno}, column {colname!r}: non-numeric value {cell!r}") from None
            if not np.isfinite(v):
                raise CSVFormatError(f"{path}: row {lineno}, column {j}: non-finite value {cell!r}")
            vals.append(v)
        feats.append(vals)
        labels.append(row[col].strip())

    mapping: dict[str, int] = {}
    for lab in labels:
        mapping.setdefault(lab, len(mapping))
    y = np.array([mapping[lab] for lab in labels], dtype=np.int64)
    return LabeledDataset(np.array(feats), y, len(mapping), list(mapping))


def write_csv(ds: LabeledDataset, path, header: bool = True) -> None:
    """Write (to a path or text stream) features then a ``label`` column holding the class names.

    Floats use ``repr`` so :func:`load_csv` reads back the exact values.
    """
    if hasattr(path, "write"):
        _write_rows(ds, path, header)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        _write_rows(ds, fh, header)


def _write_rows(ds: LabeledDataset, fh, header: bool) -> None:
    w = csv.writer(fh, lineterminator="\n")
    if header:
        w.writerow([f"x{j}" for j in range(ds.d)] + ["label"])
    for row, lab in zip(ds.data, ds.true_labels):
        w.writerow([repr(float(v)) for v in row] + [ds.class_names[lab]])


def iris_path() -> str:
    return os.fspath(resources.files("sskmeans").joinpath("data", "iris.csv"))


def load_iris() -> LabeledDataset:
    """Fisher's Iris data (150 points, 4 features, 3 species) bundled with the package."""
    return load_csv(iris_path(), label_column="species")
