"""Stratified cross-validation, confusion matrices, metrics, and curves.

All randomness flows from one seeded generator, so every result is a
pure function of (data, algorithm, hyperparameters, protocol, seed).
Fold evaluation may run on several threads; per-record scores are
written back by record index, so thread count never changes a byte of
any downstream report.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .classifiers import Hyperparams, predict_label, train
from .data import Dataset, class_counts


# ----------------------------------------------------------- folding


@dataclass(frozen=True)
class FoldAssignment:
    """Fold index per record, plus the protocol that produced it."""

    fold_of: tuple[int, ...]
    folds: int
    seed: int


def stratified_folds(data: Dataset, folds: int, seed: int) -> FoldAssignment:
    """Deal each class's records round-robin into ``folds`` folds.

    Records are grouped by class, each group is shuffled by a generator
    seeded with ``seed``, and the groups are dealt in class order onto a
    single round-robin cursor.  Within every class the fold sizes differ
    by at most one, and ``folds == n`` degenerates to leave-one-out.
    """
    if not data.labeled:
        raise ValueError("stratified folds need a labeled dataset")
    if not 2 <= folds <= data.n:
        raise ValueError(f"folds must be between 2 and {data.n}, got {folds}")
    assert data.labels is not None
    rng = np.random.default_rng(seed)
    labels = np.asarray(data.labels, dtype=np.intp)
    fold_of = np.zeros(data.n, dtype=np.intp)
    cursor = 0
    for c in range(data.schema.n_classes):
        members = np.flatnonzero(labels == c)
        for i in rng.permutation(members):
            fold_of[i] = cursor % folds
            cursor += 1
    return FoldAssignment(fold_of=tuple(int(f) for f in fold_of), folds=folds, seed=seed)


# ------------------------------------------------- confusion + metrics


@dataclass(frozen=True)
class ConfusionMatrix:
    """Square count matrix; rows are actual classes, columns predicted."""

    counts: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        k = len(self.labels)
        if len(self.counts) != k or any(len(row) != k for row in self.counts):
            raise ValueError("confusion matrix must be square with one row per class")
        if any(c < 0 for row in self.counts for c in row):
            raise ValueError("confusion matrix counts must be non-negative")

    @property
    def n(self) -> int:
        return sum(sum(row) for row in self.counts)

    @classmethod
    def from_predictions(
        cls, actual: Sequence[int], predicted: Sequence[int], labels: Sequence[str]
    ) -> "ConfusionMatrix":
        k = len(labels)
        counts = [[0] * k for _ in range(k)]
        for a, p in zip(actual, predicted):
            counts[a][p] += 1
        return cls(counts=tuple(tuple(row) for row in counts), labels=tuple(labels))


def class_accuracy(matrix: ConfusionMatrix) -> float:
    """Overall accuracy: trace over grand total."""
    total = matrix.n
    if total == 0:
        raise ValueError("empty confusion matrix")
    return sum(matrix.counts[i][i] for i in range(len(matrix.labels))) / total


@dataclass(frozen=True)
class PerClassMetrics:
    """One-vs-rest metrics for a single positive class.

    A zero denominator leaves the value at 0.0 and records the metric
    name in ``undefined``; report emitters render those cells as NA.
    F1 is undefined exactly when precision + recall == 0.
    """

    label: str
    accuracy: float
    sensitivity: float
    specificity: float
    precision: float
    recall: float
    f1: float
    undefined: frozenset[str]


def per_class_metrics(matrix: ConfusionMatrix, positive: int) -> PerClassMetrics:
    k = len(matrix.labels)
    if not 0 <= positive < k:
        raise ValueError(f"class index {positive} out of range")
    tp = matrix.counts[positive][positive]
    fn = sum(matrix.counts[positive][j] for j in range(k)) - tp
    fp = sum(matrix.counts[i][positive] for i in range(k)) - tp
    tn = matrix.n - tp - fn - fp

    undefined = set()

    def ratio(num: int, den: int, name: str) -> float:
        if den == 0:
            undefined.add(name)
            return 0.0
        return num / den

    sensitivity = ratio(tp, tp + fn, "sensitivity")
    specificity = ratio(tn, tn + fp, "specificity")
    precision = ratio(tp, tp + fp, "precision")
    recall = sensitivity  # same ratio, reported under both names
    if "sensitivity" in undefined:
        undefined.add("recall")
    if precision + recall == 0.0:
        undefined.add("f1")
        f1 = 0.0
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return PerClassMetrics(
        label=matrix.labels[positive],
        accuracy=class_accuracy(matrix),
        sensitivity=sensitivity,
        specificity=specificity,
        precision=precision,
        recall=recall,
        f1=f1,
        undefined=frozenset(undefined),
    )


def majority_baseline(data: Dataset) -> float:
    """Accuracy of always predicting the most frequent class."""
    counts = class_counts(data)
    return max(counts) / sum(counts)


# -------------------------------------------------------------- curves


@dataclass(frozen=True)
class CurveSeries:
    kind: str  # "roc" | "lift" | "calibration"
    label: str  # positive class
    points: tuple[tuple[float, float], ...]
    auc: float | None = None


def roc_points(scores: Sequence[float], positive: Sequence[bool], label: str = "") -> CurveSeries:
    """ROC curve swept over the distinct scores, highest first.

    Each distinct score is a threshold (predict positive when
    score >= threshold), so tied records enter as a block.  The curve
    starts at (0, 0), ends at (1, 1), and ``auc`` is the trapezoid area.
    """
    s = np.asarray(scores, dtype=np.float64)
    flags = np.asarray(positive, dtype=bool)
    if s.shape != flags.shape or s.ndim != 1 or s.size == 0:
        raise ValueError("scores and positive flags must be equal-length 1-d sequences")
    n_pos = int(flags.sum())
    n_neg = int(s.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise ValueError("roc needs at least one positive and one negative record")
    points = [(0.0, 0.0)]
    auc = 0.0
    tp = fp = 0
    for threshold in sorted(set(float(v) for v in s), reverse=True):
        block = s == threshold
        tp += int(flags[block].sum())
        fp += int(block.sum()) - int(flags[block].sum())
        x, y = fp / n_neg, tp / n_pos
        auc += (x - points[-1][0]) * (y + points[-1][1]) / 2.0
        points.append((x, y))
    return CurveSeries(kind="roc", label=label, points=tuple(points), auc=auc)


def lift_points(scores: Sequence[float], positive: Sequence[bool], label: str = "") -> CurveSeries:
    """Cumulative lift: precision of the top fraction over the prevalence.

    Records are ranked by score, descending, ties kept in record order.
    x is the fraction of records taken, y that prefix's precision divided
    by the overall positive rate; the final point is always y = 1.
    """
    s = np.asarray(scores, dtype=np.float64)
    flags = np.asarray(positive, dtype=bool)
    if s.shape != flags.shape or s.ndim != 1 or s.size == 0:
        raise ValueError("scores and positive flags must be equal-length 1-d sequences")
    n_pos = int(flags.sum())
    if n_pos == 0:
        raise ValueError("lift needs at least one positive record")
    n = s.size
    prevalence = n_pos / n
    order = np.argsort(-s, kind="stable")
    points = []
    seen = 0
    for i, idx in enumerate(order, start=1):
        seen += int(flags[idx])
        points.append((i / n, (seen / i) / prevalence))
    return CurveSeries(kind="lift", label=label, points=tuple(points))


def calibration_points(
    scores: Sequence[float], positive: Sequence[bool], bins: int = 10, label: str = ""
) -> CurveSeries:
    """Mean predicted score vs observed positive rate per score bin.

    [0, 1] is cut into ``bins`` equal-width bins, right-closed except the
    first (which keeps 0).  Empty bins are omitted.
    """
    s = np.asarray(scores, dtype=np.float64)
    flags = np.asarray(positive, dtype=bool)
    if s.shape != flags.shape or s.ndim != 1 or s.size == 0:
        raise ValueError("scores and positive flags must be equal-length 1-d sequences")
    if bins < 2:
        raise ValueError(f"bins must be >= 2, got {bins}")
    totals = np.zeros(bins, dtype=np.int64)
    positives = np.zeros(bins, dtype=np.int64)
    sums = np.zeros(bins, dtype=np.float64)
    for value, flag in zip(s, flags):
        edge = value * bins
        b = 0 if value <= 0 else min(bins - 1, int(np.ceil(edge)) - 1)
        totals[b] += 1
        positives[b] += int(flag)
        sums[b] += float(value)
    points = [
        (sums[b] / totals[b], positives[b] / totals[b])
        for b in range(bins)
        if totals[b]
    ]
    return CurveSeries(kind="calibration", label=label, points=tuple(points))


# ----------------------------------------------------------- protocol


@dataclass(frozen=True)
class Protocol:
    """How predictions are obtained: k-fold CV or test-on-train."""

    kind: str  # "cv" | "test-on-train"
    folds: int | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("cv", "test-on-train"):
            raise ValueError(f"unknown protocol kind {self.kind!r}")
        if self.kind == "cv" and (self.folds is None or self.seed is None):
            raise ValueError("cv protocol needs folds and seed")

    def describe(self) -> str:
        if self.kind == "cv":
            return f"stratified {self.folds}-fold cross-validation (seed {self.seed})"
        return "test on training data"


def cross_validate(
    data: Dataset,
    algorithm: str,
    params: Hyperparams | None = None,
    folds: int = 10,
    seed: int = 0,
    jobs: int = 1,
) -> tuple[ConfusionMatrix, np.ndarray]:
    """Pooled held-out predictions over a stratified k-fold split.

    Returns the confusion matrix of held-out label predictions plus the
    (records x classes) score table, indexed by original record order.
    """
    params = params or Hyperparams()
    assignment = stratified_folds(data, folds, seed)
    fold_of = np.asarray(assignment.fold_of, dtype=np.intp)
    scores = np.zeros((data.n, data.schema.n_classes), dtype=np.float64)
    assert data.labels is not None

    def run_fold(f: int) -> None:
        test_idx = np.flatnonzero(fold_of == f)
        if test_idx.size == 0:
            return
        train_idx = np.flatnonzero(fold_of != f)
        subset = Dataset(
            schema=data.schema,
            rows=tuple(data.rows[i] for i in train_idx),
            labels=tuple(data.labels[i] for i in train_idx),
        )
        model = train(subset, algorithm, params)
        for i in test_idx:
            scores[i] = model.predict_proba_row(data.rows[i])

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(run_fold, range(folds)))
    else:
        for f in range(folds):
            run_fold(f)

    predicted = [predict_label(scores[i]) for i in range(data.n)]
    matrix = ConfusionMatrix.from_predictions(data.labels, predicted, data.schema.class_labels)
    return matrix, scores


def test_on_train(
    data: Dataset, algorithm: str, params: Hyperparams | None = None
) -> tuple[ConfusionMatrix, np.ndarray]:
    """Train on everything, predict everything (resubstitution)."""
    if not data.labeled:
        raise ValueError("evaluation needs a labeled dataset")
    assert data.labels is not None
    model = train(data, algorithm, params or Hyperparams())
    scores = model.predict_proba(data)
    predicted = [predict_label(p) for p in scores]
    matrix = ConfusionMatrix.from_predictions(data.labels, predicted, data.schema.class_labels)
    return matrix, scores


# --------------------------------------------------------- full report


@dataclass(frozen=True)
class EvaluationReport:
    algorithm: str
    params: Hyperparams
    protocol: Protocol
    matrix: ConfusionMatrix
    per_class: tuple[PerClassMetrics, ...]
    curves: tuple[CurveSeries, ...]


def evaluate(
    data: Dataset,
    algorithm: str,
    params: Hyperparams | None = None,
    protocol: Protocol | None = None,
    jobs: int = 1,
) -> EvaluationReport:
    """Run a protocol and assemble matrix, per-class metrics, and curves.

    Curves pool each record's single held-out score per class.  A curve
    whose preconditions fail (a class with no positives or no negatives)
    is omitted rather than raising.
    """
    params = params or Hyperparams()
    protocol = protocol or Protocol(kind="cv", folds=10, seed=0)
    if protocol.kind == "cv":
        assert protocol.folds is not None and protocol.seed is not None
        matrix, scores = cross_validate(
            data, algorithm, params, folds=protocol.folds, seed=protocol.seed, jobs=jobs
        )
    else:
        matrix, scores = test_on_train(data, algorithm, params)
    assert data.labels is not None
    labels = np.asarray(data.labels, dtype=np.intp)
    per_class = tuple(
        per_class_metrics(matrix, c) for c in range(data.schema.n_classes)
    )
    curves: list[CurveSeries] = []
    for c, name in enumerate(data.schema.class_labels):
        flags = labels == c
        column = scores[:, c]
        if 0 < int(flags.sum()) < data.n:
            curves.append(roc_points(column, flags, label=name))
        if int(flags.sum()) > 0:
            curves.append(lift_points(column, flags, label=name))
        curves.append(calibration_points(column, flags, label=name))
    return EvaluationReport(
        algorithm=algorithm,
        params=params,
        protocol=protocol,
        matrix=matrix,
        per_class=per_class,
        curves=tuple(curves),
    )
