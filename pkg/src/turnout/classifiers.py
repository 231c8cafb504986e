"""Three categorical classifiers behind one contract.

Each algorithm trains on a labeled :class:`~turnout.data.Dataset` and
predicts a class-probability vector per record.  Models are immutable
once trained, so prediction is a pure function of (model, record) and
safe to call from several threads at once.

Tie rules are part of the contract:

* ``predict_label`` breaks probability ties toward the earlier class.
* KNN breaks distance ties toward the earlier training record.
* Tree induction breaks information-gain ties toward the earlier
  attribute in schema order; gain comparisons are carried out exactly on
  the integer counts, so ties are real ties and never float noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .data import AttributeSchema, Dataset, class_counts
from .errors import SchemaMismatchError

ALGORITHMS = ("knn", "naive-bayes", "tree")

PROBA_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Hyperparams:
    """Hyperparameters for all three algorithms; unused ones are ignored."""

    knn_k: int = 5
    nb_alpha: float = 1.0
    tree_min_samples: int = 2
    tree_max_depth: int | None = None

    def __post_init__(self) -> None:
        if self.knn_k < 1:
            raise ValueError(f"knn_k must be >= 1, got {self.knn_k}")
        if not (self.nb_alpha >= 0.0):
            raise ValueError(f"nb_alpha must be >= 0, got {self.nb_alpha}")
        if self.tree_min_samples < 2:
            raise ValueError(f"tree_min_samples must be >= 2, got {self.tree_min_samples}")
        if self.tree_max_depth is not None and self.tree_max_depth < 0:
            raise ValueError(f"tree_max_depth must be >= 0, got {self.tree_max_depth}")


def hamming_distance(a: Sequence[int], b: Sequence[int]) -> int:
    """Number of positions where two records disagree."""
    if len(a) != len(b):
        raise ValueError(f"record lengths differ: {len(a)} vs {len(b)}")
    return sum(1 for x, y in zip(a, b) if x != y)


def predict_label(proba: Sequence[float]) -> int:
    """Argmax of a probability vector; ties go to the earlier class."""
    arr = np.asarray(proba, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("empty probability vector")
    if abs(float(arr.sum()) - 1.0) > PROBA_TOLERANCE:
        raise ValueError(f"probabilities sum to {float(arr.sum())!r}, not 1")
    return int(np.argmax(arr))


# ---------------------------------------------------------------- KNN


@dataclass(frozen=True)
class KnnModel:
    """Stored training table; all work happens at prediction time."""

    rows: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...]
    k: int
    n_classes: int
    _rows_arr: np.ndarray = field(init=False, repr=False, compare=False)
    _labels_arr: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_rows_arr", np.asarray(self.rows, dtype=np.int64))
        object.__setattr__(self, "_labels_arr", np.asarray(self.labels, dtype=np.intp))

    def predict_proba(self, values: Sequence[int]) -> np.ndarray:
        """Vote of the min(k, N) nearest records under Hamming distance.

        Neighbors are ranked by (distance, training-row position), so ties
        are resolved toward earlier records and the result is exactly
        reproducible.  The vote is unweighted: each neighbor contributes
        1 / neighbors_used to its class.
        """
        query = np.asarray(values, dtype=np.int64)
        if query.shape != (self._rows_arr.shape[1],):
            raise ValueError(
                f"record has {query.size} values, model expects {self._rows_arr.shape[1]}"
            )
        distances = (self._rows_arr != query).sum(axis=1)
        order = np.argsort(distances, kind="stable")
        used = min(self.k, len(self.rows))
        votes = np.bincount(self._labels_arr[order[:used]], minlength=self.n_classes)
        return votes / used


def train_knn(data: Dataset, params: Hyperparams) -> KnnModel:
    if not data.labeled:
        raise ValueError("training needs a labeled dataset")
    if data.n == 0:
        raise ValueError("training needs at least one record")
    assert data.labels is not None
    return KnnModel(
        rows=data.rows,
        labels=data.labels,
        k=params.knn_k,
        n_classes=data.schema.n_classes,
    )


# ------------------------------------------------------- Naive Bayes


@dataclass(frozen=True)
class NaiveBayesModel:
    """Class priors and per-attribute value/class count tables."""

    class_counts: tuple[int, ...]
    tables: tuple[tuple[tuple[int, ...], ...], ...]  # [attribute][value][class]
    alpha: float

    def predict_proba(self, values: Sequence[int]) -> np.ndarray:
        """Smoothed multinomial scores, normalised to sum to one.

        score(c) = prior(c) * prod_j (count(v_j, c) + alpha)
                                     / (count(c) + alpha * domain_j)

        With alpha = 0 a value never seen with a class zeroes that class
        out; if that zeroes every class the priors are returned instead.
        """
        if len(values) != len(self.tables):
            raise ValueError(
                f"record has {len(values)} values, model expects {len(self.tables)}"
            )
        total = sum(self.class_counts)
        scores = np.zeros(len(self.class_counts), dtype=np.float64)
        for c, n_c in enumerate(self.class_counts):
            score = n_c / total
            for j, v in enumerate(values):
                domain = len(self.tables[j])
                score *= (self.tables[j][v][c] + self.alpha) / (n_c + self.alpha * domain)
            scores[c] = score
        mass = float(scores.sum())
        if mass == 0.0:
            return np.asarray(self.class_counts, dtype=np.float64) / total
        return scores / mass


def train_naive_bayes(data: Dataset, params: Hyperparams) -> NaiveBayesModel:
    """Tally value/class co-occurrence over the full declared domains."""
    if not data.labeled:
        raise ValueError("training needs a labeled dataset")
    if data.n == 0:
        raise ValueError("training needs at least one record")
    assert data.labels is not None
    counts = class_counts(data)
    n_classes = data.schema.n_classes
    tables: list[tuple[tuple[int, ...], ...]] = []
    for j, attr in enumerate(data.schema.features):
        table = [[0] * n_classes for _ in range(attr.size)]
        for row, y in zip(data.rows, data.labels):
            table[row[j]][y] += 1
        tables.append(tuple(tuple(r) for r in table))
    return NaiveBayesModel(class_counts=counts, tables=tuple(tables), alpha=params.nb_alpha)


# -------------------------------------------------------------- tree


def entropy(counts: Sequence[int]) -> float:
    """Shannon entropy of a class distribution, in bits."""
    total = sum(counts)
    if total <= 0:
        raise ValueError("entropy needs a nonempty distribution")
    h = 0.0
    for c in counts:
        if c:
            p = c / total
            h -= p * math.log2(p)
    return h


def info_gain(data: Dataset, attribute: str, indices: Sequence[int] | None = None) -> float:
    """Information gain of splitting the (sub)set on one attribute."""
    if not data.labeled:
        raise ValueError("info_gain needs a labeled dataset")
    assert data.labels is not None
    j = data.schema.feature_index(attribute)
    subset = range(data.n) if indices is None else indices
    tally = _value_class_tally(data, j, subset)
    parent = [sum(col) for col in zip(*[row for row in tally if sum(row)])] or None
    if parent is None:
        raise ValueError("info_gain needs at least one record")
    weighted = 0.0
    total = sum(parent)
    for row in tally:
        n_v = sum(row)
        if n_v:
            weighted += n_v / total * entropy(row)
    return entropy(parent) - weighted


def _value_class_tally(data: Dataset, j: int, indices) -> list[list[int]]:
    assert data.labels is not None
    tally = [[0] * data.schema.n_classes for _ in range(data.schema.features[j].size)]
    for i in indices:
        tally[data.rows[i][j]][data.labels[i]] += 1
    return tally


def _split_score(tally: list[list[int]]) -> tuple[int, int]:
    """Exact surrogate for the weighted child entropy of a candidate split.

    sum_v n_v * H(child_v)  =  log2(p) - log2(q)  with
    p = prod_v n_v ** n_v   and   q = prod_{v,c} n_vc ** n_vc.

    Scores compare as log2(p1/q1) < log2(p2/q2) iff p1*q2 < p2*q1, which
    is plain big-integer arithmetic: no float rounding can flip a tie.
    """
    p = 1
    q = 1
    for row in tally:
        n_v = sum(row)
        if n_v:
            p *= n_v**n_v
        for c in row:
            if c:
                q *= c**c
    return p, q


def _score_less(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return a[0] * b[1] < b[0] * a[1]


@dataclass(frozen=True)
class Leaf:
    counts: tuple[int, ...]
    label: int


@dataclass(frozen=True)
class Split:
    attribute: int  # feature index in schema order
    children: tuple["TreeNode", ...]  # one child per domain value, in domain order


TreeNode = Union[Leaf, Split]


def _argmax_label(counts: Sequence[int]) -> int:
    best = 0
    for c, n in enumerate(counts):
        if n > counts[best]:
            best = c
    return best


def train_tree(data: Dataset, params: Hyperparams) -> TreeNode:
    """Grow an unpruned multiway tree by maximum information gain.

    A node becomes a leaf when it is pure, has fewer than
    ``tree_min_samples`` records, has no unused attributes left, sits at
    ``tree_max_depth``, or when no attribute has positive gain.  Empty
    branches get a leaf carrying the parent distribution.  No attribute
    is reused along a path.
    """
    if not data.labeled:
        raise ValueError("training needs a labeled dataset")
    if data.n == 0:
        raise ValueError("training needs at least one record")
    assert data.labels is not None

    def node_counts(indices: list[int]) -> tuple[int, ...]:
        counts = [0] * data.schema.n_classes
        for i in indices:
            counts[data.labels[i]] += 1
        return tuple(counts)

    def grow(indices: list[int], available: tuple[int, ...], depth: int) -> TreeNode:
        counts = node_counts(indices)
        leaf = Leaf(counts=counts, label=_argmax_label(counts))
        if sum(1 for c in counts if c) <= 1:
            return leaf
        if len(indices) < params.tree_min_samples:
            return leaf
        if params.tree_max_depth is not None and depth >= params.tree_max_depth:
            return leaf
        if not available:
            return leaf

        parent_score = _split_score([list(counts)])
        best_j: int | None = None
        best_score: tuple[int, int] | None = None
        best_tally: list[list[int]] | None = None
        for j in available:
            tally = _value_class_tally(data, j, indices)
            score = _split_score(tally)
            if best_score is None or _score_less(score, best_score):
                best_j, best_score, best_tally = j, score, tally
        assert best_j is not None and best_score is not None and best_tally is not None
        # positive gain means the best split strictly beats the parent
        if not _score_less(best_score, parent_score):
            return leaf

        remaining = tuple(j for j in available if j != best_j)
        buckets: list[list[int]] = [[] for _ in range(data.schema.features[best_j].size)]
        for i in indices:
            buckets[data.rows[i][best_j]].append(i)
        children = tuple(
            grow(bucket, remaining, depth + 1) if bucket else leaf
            for bucket in buckets
        )
        return Split(attribute=best_j, children=children)

    return grow(list(range(data.n)), tuple(range(len(data.schema.features))), 0)


def tree_predict_proba(node: TreeNode, values: Sequence[int]) -> np.ndarray:
    """Walk to a leaf and normalise its class counts."""
    while isinstance(node, Split):
        node = node.children[values[node.attribute]]
    counts = np.asarray(node.counts, dtype=np.float64)
    return counts / counts.sum()


def tree_depth(node: TreeNode) -> int:
    if isinstance(node, Leaf):
        return 0
    return 1 + max(tree_depth(child) for child in node.children)


# ------------------------------------------------------ common front


@dataclass(frozen=True)
class TrainedModel:
    """An algorithm tag, its fitted state, and the schema it was fit under."""

    algorithm: str
    schema: AttributeSchema
    params: Hyperparams
    model: KnnModel | NaiveBayesModel | TreeNode

    @property
    def fingerprint(self) -> str:
        return self.schema.fingerprint()

    def predict_proba_row(self, values: Sequence[int]) -> np.ndarray:
        """Probability vector for one already-encoded record."""
        if isinstance(self.model, (KnnModel, NaiveBayesModel)):
            return self.model.predict_proba(values)
        return tree_predict_proba(self.model, values)

    def predict_proba(self, data: Dataset) -> np.ndarray:
        """Probability matrix (records x classes) for a whole dataset.

        The dataset must carry a schema with the same fingerprint the
        model was trained under; anything else is rejected outright.
        """
        if data.schema.fingerprint() != self.fingerprint:
            raise SchemaMismatchError(
                "dataset schema fingerprint does not match the model's "
                f"({data.schema.fingerprint()[:12]} vs {self.fingerprint[:12]})"
            )
        out = np.zeros((data.n, self.schema.n_classes), dtype=np.float64)
        for i, row in enumerate(data.rows):
            out[i] = self.predict_proba_row(row)
        return out

    def predict_labels(self, data: Dataset) -> np.ndarray:
        proba = self.predict_proba(data)
        return np.asarray([predict_label(p) for p in proba], dtype=np.intp)


def train(data: Dataset, algorithm: str, params: Hyperparams | None = None) -> TrainedModel:
    """Train one of the three algorithms by id: knn, naive-bayes, tree."""
    params = params or Hyperparams()
    if algorithm == "knn":
        model: KnnModel | NaiveBayesModel | TreeNode = train_knn(data, params)
    elif algorithm == "naive-bayes":
        model = train_naive_bayes(data, params)
    elif algorithm == "tree":
        model = train_tree(data, params)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    return TrainedModel(algorithm=algorithm, schema=data.schema, params=params, model=model)
