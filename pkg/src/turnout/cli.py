"""Command-line front end.

Subcommands: validate, evaluate, train, predict, export-corpus.
Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import corpus
from .classifiers import ALGORITHMS, Hyperparams, Split, predict_label, train
from .data import (
    AttributeSchema,
    Dataset,
    canonical_label,
    class_counts,
    crosstab,
    parse_csv,
    parse_schema,
)
from .errors import DataError, InputError
from .evaluation import (
    Protocol,
    class_accuracy,
    evaluate,
    majority_baseline,
)
from .model_io import load_model, save_model
from .report import (
    format_confusion_table,
    format_metrics_table,
    parse_confusion_table,
    write_report,
)

EMBEDDED = "embedded:election"


class UsageError(Exception):
    """Bad flag combination or flag value."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="turnout", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_data_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--data", default=EMBEDDED,
                       help=f"data file path, or {EMBEDDED!r} (default)")
        p.add_argument("--schema", default=None, help="schema file path (required for file data)")

    def add_hyper_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--k", type=int, default=5, help="KNN neighbor count (default 5)")
        p.add_argument("--alpha", type=float, default=1.0,
                       help="naive Bayes smoothing (default 1.0)")
        p.add_argument("--min-samples", type=int, default=2,
                       help="minimum records to split a tree node (default 2)")
        p.add_argument("--max-depth", type=int, default=None,
                       help="tree depth cap (default: unlimited)")

    p = sub.add_parser("validate", help="parse and describe a data file")
    add_data_flags(p)
    p.add_argument("--attribute", action="append", default=None,
                   help="print the crosstab for this attribute ('all' for every one)")

    p = sub.add_parser("evaluate", help="run an evaluation protocol and emit reports")
    add_data_flags(p)
    add_hyper_flags(p)
    p.add_argument("--algo", default="all", choices=ALGORITHMS + ("all",))
    p.add_argument("--folds", type=int, default=10, help="cross-validation folds (default 10)")
    p.add_argument("--seed", type=int, default=None, help="shuffle seed (required for CV)")
    p.add_argument("--test-on-train", action="store_true",
                   help="train and test on the full dataset instead of CV")
    p.add_argument("--from-matrix", default=None, metavar="FILE",
                   help="recompute the metrics table from an emitted confusion.tsv")
    p.add_argument("--out", default=None, help="directory for report files")
    p.add_argument("--svg", action="store_true", help="also render curves as SVG")
    p.add_argument("--jobs", type=int, default=1, help="threads for fold evaluation (default 1)")

    p = sub.add_parser("train", help="fit a model and save it")
    add_data_flags(p)
    add_hyper_flags(p)
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    p.add_argument("--out", required=True, help="model file to write")

    p = sub.add_parser("predict", help="load a model and predict records")
    p.add_argument("model", help="model file written by train")
    add_data_flags(p)
    p.add_argument("--out", default=None, help="output file (default: stdout)")

    p = sub.add_parser("export-corpus", help="write the embedded survey to files")
    p.add_argument("--out", required=True, help="directory for election.schema and election.csv")

    return parser


def _read_text(path: str, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {what} {path!r}: {exc}") from None


def _detect_labeled(text: str, schema: AttributeSchema) -> bool:
    for line in text.splitlines():
        if line.strip():
            header = [canonical_label(c) for c in line.split(",")]
            return header != list(schema.feature_names)
    raise DataError("data file has no header line")


def _load_data(args: argparse.Namespace, labeled: bool | None,
               fallback_schema: AttributeSchema | None = None) -> tuple[Dataset, str]:
    """Load --data/--schema; ``labeled=None`` auto-detects from the header."""
    if args.data == EMBEDDED:
        schema = corpus.load_election_schema()
        text = corpus.election_csv_text()
        source = EMBEDDED
    elif args.data.startswith("embedded:"):
        raise DataError(f"unknown embedded dataset {args.data!r}")
    else:
        if args.schema is not None:
            schema = parse_schema(_read_text(args.schema, "schema file"))
        elif fallback_schema is not None:
            schema = fallback_schema
        else:
            raise UsageError("--schema is required when --data is a file path")
        text = _read_text(args.data, "data file")
        source = args.data
    if labeled is None:
        labeled = _detect_labeled(text, schema)
    return parse_csv(text, schema, labeled=labeled), source


def _hyperparams(args: argparse.Namespace) -> Hyperparams:
    return Hyperparams(
        knn_k=args.k,
        nb_alpha=args.alpha,
        tree_min_samples=args.min_samples,
        tree_max_depth=args.max_depth,
    )


def _describe_classes(data: Dataset) -> str:
    counts = class_counts(data)
    parts = [f"{label}={count}" for label, count in zip(data.schema.class_labels, counts)]
    return f"{data.n} records; classes: " + ", ".join(parts)


def _crosstab_text(data: Dataset, attribute: str) -> str:
    table = crosstab(data, attribute)
    labels = data.schema.class_labels
    lines = [f"crosstab: {attribute}"]
    lines.append("\t" + "\t".join(labels) + "\ttotal")
    attr = data.schema.features[data.schema.feature_index(attribute)]
    for v, row in enumerate(table):
        lines.append(attr.values[v] + "\t" + "\t".join(str(c) for c in row) + f"\t{int(row.sum())}")
    columns = table.sum(axis=0)
    lines.append("total\t" + "\t".join(str(int(c)) for c in columns) + f"\t{int(table.sum())}")
    return "\n".join(lines)


def _cmd_validate(args: argparse.Namespace) -> int:
    data, _ = _load_data(args, labeled=None)
    if data.labeled:
        print(_describe_classes(data))
    else:
        print(f"{data.n} records; unlabeled")
    names: list[str] = []
    for requested in args.attribute or []:
        if requested == "all":
            names.extend(data.schema.feature_names)
        else:
            names.append(requested)
    for name in names:
        print()
        print(_crosstab_text(data, name))
    return 0


def _tree_root_note(data: Dataset, params: Hyperparams) -> str:
    model = train(data, "tree", params)
    if isinstance(model.model, Split):
        root = data.schema.features[model.model.attribute].name
    else:
        root = "(single leaf)"
    verdict = "agrees" if root == corpus.REFERENCE_TREE_ROOT else "differs"
    return (f"tree root attribute: {root} "
            f"(reference: {corpus.REFERENCE_TREE_ROOT}; {verdict})")


def _cmd_evaluate(args: argparse.Namespace) -> int:
    if args.from_matrix is not None:
        matrix = parse_confusion_table(_read_text(args.from_matrix, "matrix file"))
        table = format_metrics_table(matrix)
        print(table, end="")
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / "metrics.tsv").write_text(table, encoding="utf-8")
        return 0

    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    if args.test_on_train:
        if args.seed is not None:
            raise UsageError("--test-on-train does not take --seed")
        protocol = Protocol(kind="test-on-train")
    else:
        if args.seed is None:
            raise UsageError("--seed is required for cross-validation")
        protocol = Protocol(kind="cv", folds=args.folds, seed=args.seed)

    data, source = _load_data(args, labeled=True)
    params = _hyperparams(args)
    algos = ALGORITHMS if args.algo == "all" else (args.algo,)

    summary = [
        f"dataset: {source} ({data.n} records)",
        f"protocol: {protocol.describe()}",
        f"baseline accuracy (majority class): {majority_baseline(data):.4f}",
    ]
    reports = {}
    for algo in algos:
        reports[algo] = evaluate(data, algo, params, protocol, jobs=args.jobs)
        summary.append(f"{algo}: CA {class_accuracy(reports[algo].matrix):.4f}")
    if "tree" in algos:
        summary.append(_tree_root_note(data, params))
    summary_text = "\n".join(summary) + "\n"
    print(summary_text, end="")

    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for algo in algos:
            write_report(reports[algo], out / algo, svg=args.svg)
        (out / "summary.txt").write_text(summary_text, encoding="utf-8")
        print(f"wrote reports under {out}")
    else:
        for algo in algos:
            print(f"\n[{algo}]")
            print(format_metrics_table(reports[algo].matrix), end="")
            print(format_confusion_table(reports[algo].matrix), end="")
    return 0


def _cmd_train(args: argparse.Namespace) -> int:
    data, _ = _load_data(args, labeled=True)
    model = train(data, args.algo, _hyperparams(args))
    save_model(model, args.out)
    print(f"wrote {args.algo} model to {args.out}")
    return 0


def _cmd_predict(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    data, _ = _load_data(args, labeled=None, fallback_schema=model.schema)
    features_only = Dataset(schema=data.schema, rows=data.rows, labels=None)
    proba = model.predict_proba(features_only)
    labels = model.schema.class_labels
    lines = ["index\tprediction\t" + "\t".join(labels)]
    for i in range(data.n):
        row = proba[i]
        winner = labels[predict_label(row)]
        cells = [str(i), winner] + [f"{p:.6f}" for p in row]
        lines.append("\t".join(cells))
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote predictions to {args.out}")
    else:
        print(text, end="")
    return 0


def _cmd_export_corpus(args: argparse.Namespace) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    schema_path = out / "election.schema"
    data_path = out / "election.csv"
    schema_path.write_text(corpus.election_schema_text(), encoding="utf-8")
    data_path.write_text(corpus.election_csv_text(), encoding="utf-8")
    print(f"wrote {schema_path}")
    print(f"wrote {data_path}")
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "evaluate": _cmd_evaluate,
    "train": _cmd_train,
    "predict": _cmd_predict,
    "export-corpus": _cmd_export_corpus,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        raise
    except Exception as exc:  # pragma: no cover - nothing should land here
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())
