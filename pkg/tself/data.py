"""
tself.data - samples, CSV ingestion and stratified folds
========================================================

A `Sample` is column-oriented: one `Feature` per CSV column (numeric columns
as float arrays, everything else as categorical string arrays), labels in
{-1, +1} and non-negative example weights. A single observation is the
tuple `sample.row(i)`, indexed by feature position, which is what trees and
MDTs evaluate their tests on.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from logging import getLogger
from pathlib import Path
from typing import Iterator, Literal, Sequence, Union

import numpy as np

from tself.errors import DataError
from tself.utils.logutils import log_call
from tself.utils.path import resolve_pathish

log = getLogger("tself")

FeatureKind = Literal["numeric", "categorical"]
Value = Union[float, str]


@dataclass(frozen=True)
class Feature:
    name: str
    kind: FeatureKind
    values: np.ndarray

    @property
    def categories(self) -> tuple[str, ...]:
        if self.kind != "categorical":
            return ()
        return tuple(sorted(set(self.values.tolist())))

    def take(self, indices: np.ndarray) -> "Feature":
        return Feature(self.name, self.kind, self.values[indices])


@dataclass(frozen=True)
class Sample:
    features: tuple[Feature, ...]
    labels: np.ndarray
    weights: np.ndarray = field(default=None)
    positive_label: str = "+1"

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int8)
        m = labels.size
        if m == 0:
            raise DataError("empty sample")
        if not np.all(np.isin(labels, (-1, 1))):
            raise DataError("labels must be -1 or +1")
        for feat in self.features:
            if feat.values.shape != (m,):
                raise DataError(f"feature has {feat.values.size} values for {m} labels", column=feat.name)
        weights = np.ones(m) if self.weights is None else np.asarray(self.weights, dtype=float)
        check_weights(weights, m)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_arrays(cls, X, y, names: Sequence[str] | None = None, weights=None) -> "Sample":
        """Numeric-only sample from a 2-d array and ±1 labels."""
        X = np.asarray(X, dtype=float)
        if X.ndim != 2:
            raise DataError("X must be 2-d")
        names = list(names) if names is not None else [f"x{j}" for j in range(X.shape[1])]
        features = tuple(Feature(n, "numeric", X[:, j].copy()) for j, n in enumerate(names))
        return cls(features, np.asarray(y), weights)

    @property
    def m(self) -> int:
        return int(self.labels.size)

    @property
    def n_features(self) -> int:
        return len(self.features)

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    @property
    def feature_kinds(self) -> tuple[str, ...]:
        return tuple(f.kind for f in self.features)

    def class_counts(self) -> dict[int, int]:
        return {-1: int(np.sum(self.labels == -1)), 1: int(np.sum(self.labels == 1))}

    def row(self, i: int) -> tuple[Value, ...]:
        return tuple(
            float(f.values[i]) if f.kind == "numeric" else str(f.values[i]) for f in self.features
        )

    def rows(self) -> Iterator[tuple[Value, ...]]:
        for i in range(self.m):
            yield self.row(i)

    def subset(self, indices) -> "Sample":
        indices = np.asarray(indices, dtype=int)
        return Sample(
            tuple(f.take(indices) for f in self.features),
            self.labels[indices],
            self.weights[indices],
            self.positive_label,
        )

    def with_weights(self, weights) -> "Sample":
        return Sample(self.features, self.labels, weights, self.positive_label)

    def aligned_to(self, names: Sequence[str], kinds: Sequence[str]) -> "Sample":
        """Reorder columns to a model's feature list; DataError if one is missing or of another kind."""
        by_name = {f.name: f for f in self.features}
        ordered = []
        for name, kind in zip(names, kinds):
            feat = by_name.get(name)
            if feat is None:
                raise DataError("feature used by the model is missing", column=name)
            if feat.kind != kind:
                if kind == "categorical":
                    feat = Feature(name, kind, np.array([_fmt_number(v) for v in feat.values], dtype=object))
                else:
                    raise DataError(f"model expects a numeric column, data is {feat.kind}", column=name)
            ordered.append(feat)
        return Sample(tuple(ordered), self.labels, self.weights, self.positive_label)


def check_weights(weights: np.ndarray, m: int) -> None:
    if weights.shape != (m,):
        raise DataError(f"expected {m} weights, got shape {weights.shape}")
    if not np.all(np.isfinite(weights)) or np.any(weights < 0):
        raise DataError("weights must be finite and >= 0")
    if not weights.sum() > 0:
        raise DataError("weights must have a positive total")


def _fmt_number(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def _parse_float(cell: str) -> float | None:
    try:
        value = float(cell)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


@log_call()
def load_csv(path, label_column: str, positive_label: str) -> Sample:
    """
    Read a comma-separated UTF-8 file with a header row. Columns whose every
    cell parses as a finite float are numeric, the rest categorical. Empty
    cells are rejected; rows are reported with their line number in the file.
    """
    p: Path = resolve_pathish(path)
    try:
        handle = p.open("r", encoding="utf-8", newline="")
    except OSError as e:
        raise DataError(f"cannot open {p}: {e.strerror}") from e

    with handle:
        reader = csv.reader(handle)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{p} is empty; a header row is required") from None
        except csv.Error as e:
            raise DataError(f"{p}: {e}", row=reader.line_num) from e
        if label_column not in header:
            raise DataError(f"label column not found in header {header}", column=label_column)
        if len(set(header)) != len(header):
            raise DataError(f"duplicate column names in header {header}")

        cells: list[list[str]] = []
        try:
            for row in reader:
                if not row:
                    continue
                if len(row) != len(header):
                    raise DataError(f"expected {len(header)} fields, found {len(row)}", row=reader.line_num)
                stripped = [c.strip() for c in row]
                for name, cell in zip(header, stripped):
                    if cell == "":
                        raise DataError("missing value", row=reader.line_num, column=name)
                cells.append(stripped)
        except csv.Error as e:
            raise DataError(f"{p}: {e}", row=reader.line_num) from e

    if not cells:
        raise DataError(f"{p} has a header but no data rows")

    columns = list(zip(*cells))
    label_idx = header.index(label_column)
    raw_labels = columns[label_idx]
    distinct = sorted(set(raw_labels))
    if len(distinct) != 2:
        raise DataError(f"label column must hold exactly 2 distinct values, found {distinct}", column=label_column)
    positive = str(positive_label).strip()
    if positive not in distinct:
        raise DataError(f"positive label {positive!r} is not one of {distinct}", column=label_column)

    features = []
    for j, (name, column) in enumerate(zip(header, columns)):
        if j == label_idx:
            continue
        numbers = [_parse_float(c) for c in column]
        if all(v is not None for v in numbers):
            features.append(Feature(name, "numeric", np.array(numbers, dtype=float)))
        else:
            features.append(Feature(name, "categorical", np.array(column, dtype=object)))

    labels = np.where(np.array(raw_labels, dtype=object) == positive, 1, -1)
    sample = Sample(tuple(features), labels, positive_label=positive)
    log.info("loaded %s: %d rows, %d features, class counts %s", p.name, sample.m, sample.n_features, sample.class_counts())
    return sample


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: np.ndarray

    def __post_init__(self):
        assignments = np.asarray(self.assignments, dtype=int)
        if np.any(assignments < 0) or np.any(assignments >= self.k):
            raise DataError(f"fold assignments must lie in [0, {self.k})")
        object.__setattr__(self, "assignments", assignments)

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)

    def __iter__(self) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        for fold in range(self.k):
            yield self.train_indices(fold), self.test_indices(fold)


@log_call()
def stratified_folds(sample: Sample, k: int, seed: int = 0) -> FoldPlan:
    """
    Shuffle each class with a seeded generator and deal its examples
    round-robin over the folds, continuing the deal from where the previous
    class stopped, so every fold holds floor or ceil of n_c/k per class.
    """
    if k < 2:
        raise DataError(f"need at least 2 folds, got {k}")
    counts = sample.class_counts()
    for cls, n in counts.items():
        if n < k:
            raise DataError(f"class {cls:+d} has {n} examples, fewer than the {k} folds requested")

    rng = np.random.default_rng(seed)
    assignments = np.empty(sample.m, dtype=int)
    offset = 0
    for cls in (-1, 1):
        members = rng.permutation(np.flatnonzero(sample.labels == cls))
        assignments[members] = (offset + np.arange(members.size)) % k
        offset = (offset + members.size) % k
    return FoldPlan(k, assignments)


__all__ = ["Feature", "Sample", "FoldPlan", "load_csv", "stratified_folds", "check_weights"]
