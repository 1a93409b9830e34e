"""Report emission: metrics document, confusion tables, and SVG heatmaps."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from ..data.schema import SCHEMA, DataError

HASH_SALT = "segaa-reports"


def _write_confusion_csv(path, target, confusion):
    classes = SCHEMA.classes(target)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["true\\predicted", *classes])
        for name, row in zip(classes, confusion):
            writer.writerow([name, *row])


def _write_heatmap_svg(path, run, target, confusion):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    classes = SCHEMA.classes(target)
    mat = np.asarray(confusion)
    with matplotlib.rc_context({"svg.hashsalt": HASH_SALT, "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(4.8, 4.2))
        ax.imshow(mat, cmap="Blues")
        ax.set_xticks(range(len(classes)), classes, rotation=45, ha="right")
        ax.set_yticks(range(len(classes)), classes)
        ax.set_xlabel("predicted")
        ax.set_ylabel("true")
        ax.set_title(f"{run}: {target}")
        cutoff = mat.max() / 2 if mat.max() > 0 else 0
        for i in range(mat.shape[0]):
            for j in range(mat.shape[1]):
                ax.text(j, i, str(int(mat[i, j])), ha="center", va="center",
                        color="white" if mat[i, j] > cutoff else "black", fontsize=8)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)


def emit_report(reports, out_dir, timings=None, ratios=None) -> list:
    """Write metrics.json, per-run confusion tables and heatmaps, comparison.csv.

    Pass timings/ratios only when wall-clock fields belong in the files; under
    the determinism flag the caller leaves them out so re-runs are byte-identical.
    Returns the written paths.
    """
    if not reports:
        raise DataError("nothing to report")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    doc = {"reports": reports}
    if timings is not None:
        doc["train_seconds"] = {k: timings[k] for k in sorted(timings)}
    if ratios is not None:
        doc["runtime_ratios"] = {k: ratios[k] for k in sorted(ratios)}
    metrics_path = out / "metrics.json"
    metrics_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    written.append(metrics_path)

    for report in reports:
        if "targets" not in report:
            continue
        for target, block in report["targets"].items():
            base = f"{report['run']}_{target}"
            table = out / f"{base}_confusion.csv"
            _write_confusion_csv(table, target, block["confusion"])
            written.append(table)
            heatmap = out / f"{base}_heatmap.svg"
            _write_heatmap_svg(heatmap, report["run"], target, block["confusion"])
            written.append(heatmap)

    comparison = out / "comparison.csv"
    with open(comparison, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = ["run", "target", "accuracy", "precision", "recall", "f1"]
        if timings is not None:
            header.append("train_seconds")
        writer.writerow(header)
        for report in reports:
            if "targets" not in report:
                writer.writerow([report["run"], "error", report.get("error", ""), "", "", ""])
                continue
            for target, block in report["targets"].items():
                row = [report["run"], target] + [
                    f"{block[k]:.6f}" for k in ("accuracy", "precision", "recall", "f1")
                ]
                if timings is not None:
                    row.append(f"{timings.get(report['run'], float('nan')):.3f}")
                writer.writerow(row)
    written.append(comparison)
    return written
