"""Independent reference implementations used to cross-check the library.

Everything here is deliberately written with plain dicts, sorting, and
exact Fraction / big-integer arithmetic, sharing no code with the
package under test.
"""

from __future__ import annotations

from fractions import Fraction

from turnout import Attribute, AttributeSchema, Dataset


def tiny_schema(domain_sizes, n_classes, names=None):
    """Schema factory for synthetic datasets: a0..aJ over v0..vK, target y."""
    features = tuple(
        Attribute(
            name=(names[j] if names else f"a{j}"),
            values=tuple(f"v{v}" for v in range(size)),
        )
        for j, size in enumerate(domain_sizes)
    )
    target = Attribute(name="y", values=tuple(f"c{c}" for c in range(n_classes)))
    return AttributeSchema(features=features, target=target)


def tiny_dataset(rows, labels, domain_sizes, n_classes):
    return Dataset(
        schema=tiny_schema(domain_sizes, n_classes),
        rows=tuple(tuple(r) for r in rows),
        labels=tuple(labels) if labels is not None else None,
    )


def knn_proba(rows, labels, n_classes, k, query):
    """Exhaustive scan: sort by (distance, position), vote over min(k, n)."""
    distances = [
        (sum(1 for a, b in zip(row, query) if a != b), i) for i, row in enumerate(rows)
    ]
    distances.sort()
    used = min(k, len(rows))
    votes = [0] * n_classes
    for _, i in distances[:used]:
        votes[labels[i]] += 1
    return [Fraction(v, used) for v in votes]


def nb_proba(rows, labels, domain_sizes, n_classes, alpha, query):
    """Smoothed joint likelihood evaluated in exact rational arithmetic."""
    a = Fraction(alpha)
    n = len(rows)
    per_class = {c: labels.count(c) for c in range(n_classes)}
    scores = []
    for c in range(n_classes):
        score = Fraction(per_class[c], n)
        for j, v in enumerate(query):
            seen = sum(1 for row, y in zip(rows, labels) if y == c and row[j] == v)
            score *= (seen + a) / (per_class[c] + a * domain_sizes[j])
        scores.append(score)
    total = sum(scores)
    if total == 0:
        return [Fraction(per_class[c], n) for c in range(n_classes)]
    return [s / total for s in scores]


def _partition_ratio(groups):
    """Fraction p/q with sum_g n_g * H(group_g) = log2(p/q).

    p multiplies n_g ** n_g per group, q multiplies count ** count per
    class cell; smaller ratio means lower weighted child entropy.
    """
    p = 1
    q = 1
    for counts in groups:
        n_g = sum(counts)
        if n_g:
            p *= n_g**n_g
        for c in counts:
            if c:
                q *= c**c
    return Fraction(p, q)


def best_split(rows, labels, domain_sizes, n_classes, available=None):
    """Attribute index with maximal info gain, ties to the earlier index.

    Returns None when no attribute has strictly positive gain.  All
    comparisons are exact, so ties are decided by position alone.
    """
    if available is None:
        available = range(len(domain_sizes))
    parent = [labels.count(c) for c in range(n_classes)]
    parent_ratio = _partition_ratio([parent])
    best = None
    best_ratio = None
    for j in available:
        groups = [[0] * n_classes for _ in range(domain_sizes[j])]
        for row, y in zip(rows, labels):
            groups[row[j]][y] += 1
        ratio = _partition_ratio(groups)
        if best_ratio is None or ratio < best_ratio:
            best, best_ratio = j, ratio
    if best_ratio is not None and best_ratio < parent_ratio:
        return best
    return None


def auc_pair_statistic(scores, positive):
    """Mann-Whitney statistic: share of positive/negative pairs ranked
    correctly, ties counting one half."""
    pos = [s for s, flag in zip(scores, positive) if flag]
    neg = [s for s, flag in zip(scores, positive) if not flag]
    total = Fraction(0)
    for p in pos:
        for q in neg:
            if p > q:
                total += 1
            elif p == q:
                total += Fraction(1, 2)
    return total / (len(pos) * len(neg))
