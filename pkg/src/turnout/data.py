"""Categorical dataset handling: schema grammar, CSV ingestion, cross-tabs.

Every type here is immutable after construction and safe to share between
threads.  Cell values are stored as indices into the owning attribute's
domain; the text labels live only in the schema.

Schema documents are line based:

    # comment
    attribute <name>: <label> | <label> | ...
    target <name>: <label> | <label> | ...

Blank lines and ``#`` comments are ignored.  The attribute name is
everything between the keyword and the first ``:``; domain labels are
separated by ``|`` and keep the order they appear in.  Exactly one
``target`` line is required.  Names and labels are trimmed and internal
whitespace runs collapse to a single space; matching is otherwise exact
(no case folding).  Commas are not allowed in names or labels so that
data files never need quoting.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import DataError, SchemaError


def canonical_label(text: str) -> str:
    """Trim and collapse internal whitespace; no other normalisation."""
    return " ".join(text.split())


@dataclass(frozen=True)
class Attribute:
    """A named categorical attribute with an ordered, closed domain."""

    name: str
    values: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.name:
            raise SchemaError("attribute name must be nonempty")
        if "," in self.name or "|" in self.name:
            raise SchemaError(f"attribute name {self.name!r} may not contain ',' or '|'")
        if len(self.values) < 2:
            raise SchemaError(
                f"attribute {self.name!r} needs at least 2 domain labels, got {len(self.values)}"
            )
        for label in self.values:
            if not label:
                raise SchemaError(f"attribute {self.name!r} has an empty domain label")
            if "," in label or "|" in label:
                raise SchemaError(f"label {label!r} may not contain ',' or '|'")
        if len(set(self.values)) != len(self.values):
            raise SchemaError(f"attribute {self.name!r} has duplicate domain labels")

    @property
    def size(self) -> int:
        return len(self.values)

    def index_of(self, label: str) -> int:
        """Domain index of ``label``; raises KeyError for out-of-domain text."""
        try:
            return self.values.index(label)
        except ValueError:
            raise KeyError(label) from None


@dataclass(frozen=True)
class AttributeSchema:
    """Ordered feature attributes plus one target attribute."""

    features: tuple[Attribute, ...]
    target: Attribute

    def __post_init__(self) -> None:
        if not self.features:
            raise SchemaError("schema needs at least one feature attribute")
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            raise SchemaError("duplicate feature attribute names")
        if self.target.name in names:
            raise SchemaError(f"target {self.target.name!r} is also a feature attribute")

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    @property
    def class_labels(self) -> tuple[str, ...]:
        return self.target.values

    @property
    def n_classes(self) -> int:
        return len(self.target.values)

    def feature_index(self, name: str) -> int:
        for i, f in enumerate(self.features):
            if f.name == name:
                return i
        raise ValueError(f"unknown attribute {name!r}")

    def to_text(self) -> str:
        """Canonical schema document; ``parse_schema`` round-trips it."""
        lines = [f"attribute {f.name}: {' | '.join(f.values)}" for f in self.features]
        lines.append(f"target {self.target.name}: {' | '.join(self.target.values)}")
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        """SHA-256 of the canonical schema text; names and order both count."""
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()


def parse_schema(text: str) -> AttributeSchema:
    """Parse a schema document, rejecting grammar and invariant violations."""
    features: list[Attribute] = []
    target: Attribute | None = None
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, tail = line.partition(":")
        if not sep:
            raise SchemaError(f"line {lineno}: expected '<keyword> <name>: <labels>'")
        head = canonical_label(head)
        if head.startswith("attribute "):
            kind, name = "attribute", head[len("attribute ") :]
        elif head.startswith("target "):
            kind, name = "target", head[len("target ") :]
        else:
            raise SchemaError(f"line {lineno}: lines must start with 'attribute' or 'target'")
        labels = tuple(canonical_label(part) for part in tail.split("|"))
        try:
            attr = Attribute(name=name, values=labels)
        except SchemaError as exc:
            raise SchemaError(f"line {lineno}: {exc}") from None
        if attr.name in seen:
            raise SchemaError(f"line {lineno}: duplicate attribute name {attr.name!r}")
        seen.add(attr.name)
        if kind == "target":
            if target is not None:
                raise SchemaError(f"line {lineno}: more than one target attribute")
            target = attr
        else:
            features.append(attr)
    if target is None:
        raise SchemaError("schema has no target attribute")
    return AttributeSchema(features=tuple(features), target=target)


@dataclass(frozen=True)
class Dataset:
    """Immutable record table.

    Each record is a tuple of domain indices, one per feature attribute,
    in schema order.  ``labels`` holds the target index per record, or is
    ``None`` for a uniformly unlabeled dataset; a mix is unrepresentable.
    """

    schema: AttributeSchema
    rows: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...] | None

    def __post_init__(self) -> None:
        width = len(self.schema.features)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise DataError(f"record {i}: expected {width} values, got {len(row)}")
            for j, v in enumerate(row):
                if not 0 <= v < self.schema.features[j].size:
                    raise DataError(
                        f"record {i}: index {v} out of range for "
                        f"attribute {self.schema.features[j].name!r}"
                    )
        if self.labels is not None:
            if len(self.labels) != len(self.rows):
                raise DataError(
                    f"{len(self.labels)} labels for {len(self.rows)} records; "
                    "records must be uniformly labeled or uniformly unlabeled"
                )
            for i, y in enumerate(self.labels):
                if not 0 <= y < self.schema.target.size:
                    raise DataError(f"record {i}: label index {y} out of range")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def labeled(self) -> bool:
        return self.labels is not None


def parse_csv(text: str, schema: AttributeSchema, labeled: bool) -> Dataset:
    """Parse a comma-separated data file against ``schema``.

    The header must name every feature attribute in schema order, plus the
    target when ``labeled``.  Cells are matched against domain labels after
    whitespace canonicalisation; anything else is rejected with the line
    number and column name.  Blank lines are skipped; cell order is
    preserved exactly.
    """
    numbered = [
        (lineno, line)
        for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    ]
    if not numbered:
        raise DataError("data file has no header line")
    expected = list(schema.feature_names)
    columns: list[Attribute] = list(schema.features)
    if labeled:
        expected.append(schema.target.name)
        columns.append(schema.target)
    _, header_line = numbered[0]
    header = [canonical_label(cell) for cell in header_line.split(",")]
    if header != expected:
        raise DataError(f"header mismatch: expected {expected}, got {header}")

    rows: list[tuple[int, ...]] = []
    labels: list[int] = []
    for lineno, line in numbered[1:]:
        cells = line.split(",")
        if len(cells) != len(columns):
            raise DataError(f"line {lineno}: expected {len(columns)} columns, got {len(cells)}")
        indices: list[int] = []
        for attr, cell in zip(columns, cells):
            value = canonical_label(cell)
            if not value:
                raise DataError(f"line {lineno}: empty value in column {attr.name!r}")
            try:
                indices.append(attr.index_of(value))
            except KeyError:
                raise DataError(
                    f"line {lineno}: unknown value {value!r} for attribute {attr.name!r}"
                ) from None
        if labeled:
            rows.append(tuple(indices[:-1]))
            labels.append(indices[-1])
        else:
            rows.append(tuple(indices))
    return Dataset(
        schema=schema,
        rows=tuple(rows),
        labels=tuple(labels) if labeled else None,
    )


def dataset_to_csv(data: Dataset) -> str:
    """Serialise back to the CSV form ``parse_csv`` reads (lossless)."""
    header = list(data.schema.feature_names)
    if data.labeled:
        header.append(data.schema.target.name)
    lines = [",".join(header)]
    for i, row in enumerate(data.rows):
        cells = [data.schema.features[j].values[v] for j, v in enumerate(row)]
        if data.labels is not None:
            cells.append(data.schema.target.values[data.labels[i]])
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def class_counts(data: Dataset) -> tuple[int, ...]:
    """Records per target class, in class order; zero counts included."""
    if data.labels is None:
        raise ValueError("class counts need a labeled dataset")
    counts = np.bincount(np.asarray(data.labels, dtype=np.intp), minlength=data.schema.n_classes)
    return tuple(int(c) for c in counts)


def crosstab(data: Dataset, attribute: str) -> np.ndarray:
    """Attribute-by-class count table, shape (domain size, class count).

    Rows follow the attribute's domain order, columns the class order.
    The target itself is rejected: it already forms the column axis.
    """
    if data.labels is None:
        raise ValueError("crosstab needs a labeled dataset")
    if attribute == data.schema.target.name:
        raise ValueError("crosstab is taken against the target; pass a feature attribute")
    j = data.schema.feature_index(attribute)
    table = np.zeros((data.schema.features[j].size, data.schema.n_classes), dtype=np.int64)
    for row, y in zip(data.rows, data.labels):
        table[row[j], y] += 1
    return table
