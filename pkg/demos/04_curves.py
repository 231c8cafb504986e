"""
ROC, lift, and calibration curves from held-out scores
======================================================

Evaluates naive Bayes under cross-validation, pools each record's
held-out probability, and writes curve CSVs plus standalone SVG plots.
"""

import tempfile
from pathlib import Path

from turnout import Protocol, evaluate, load_election_corpus
from turnout.report import write_report

data = load_election_corpus()

report = evaluate(
    data, "naive-bayes", protocol=Protocol(kind="cv", folds=10, seed=42)
)

# one curve triple (roc, lift, calibration) per class that has both
# positive and negative records
for curve in report.curves:
    head = f"{curve.kind:>11} / {curve.label}"
    if curve.auc is not None:
        print(f"{head}: {len(curve.points)} points, auc {curve.auc:.4f}")
    else:
        print(f"{head}: {len(curve.points)} points")

# write_report emits metrics.tsv, confusion.tsv, and the curve files;
# pass svg=True for a plot per curve
with tempfile.TemporaryDirectory() as tmp:
    written = write_report(report, Path(tmp) / "out", svg=True)
    print(f"\nwrote {len(written)} files:")
    for path in written:
        print(f"  {path.name}")
