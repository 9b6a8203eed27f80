"""Report emission: JSON, CSV (plot input), and Markdown; byte-stable."""

from __future__ import annotations

import csv
import io
import json
from enum import Enum
from pathlib import Path

from salience.evaluation.stratify import BucketMetrics, EvalReport


class ReportFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    MARKDOWN = "markdown"


def _bucket_json(b: BucketMetrics) -> dict:
    return {
        "support": b.support,
        "tp": b.counts.tp,
        "fp": b.counts.fp,
        "fn": b.counts.fn,
        "tn": b.counts.tn,
        "precision": b.metrics.precision,
        "recall": b.metrics.recall,
        "f1": b.metrics.f1,
        "undefined": list(b.metrics.undefined),
    }


def report_to_json(report: EvalReport) -> str:
    payload = {
        "schema_version": report.schema_version,
        "model_id": report.model_id,
        "total": report.total,
        "abstain_count": report.abstain_count,
        "overall": {
            "support": report.total,
            "tp": report.overall_counts.tp,
            "fp": report.overall_counts.fp,
            "fn": report.overall_counts.fn,
            "tn": report.overall_counts.tn,
            "precision": report.overall.precision,
            "recall": report.overall.recall,
            "f1": report.overall.f1,
            "undefined": list(report.overall.undefined),
        },
        "by_position": {k: _bucket_json(v) for k, v in report.by_position.items()},
        "by_frequency": {k: _bucket_json(v) for k, v in report.by_frequency.items()},
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def report_to_csv(report: EvalReport) -> str:
    """Rows: facet, bucket, support, precision, recall, f1."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["facet", "bucket", "support", "precision", "recall", "f1"])

    def row(facet: str, bucket: str, support: int, m) -> None:
        writer.writerow([facet, bucket, support, f"{m.precision:.6f}", f"{m.recall:.6f}", f"{m.f1:.6f}"])

    row("overall", "all", report.total, report.overall)
    for name, b in report.by_position.items():
        row("position", name, b.support, b.metrics)
    for name, b in report.by_frequency.items():
        row("frequency", name, b.support, b.metrics)
    return buf.getvalue()


def report_to_markdown(report: EvalReport) -> str:
    lines = [
        f"# Evaluation report: {report.model_id}",
        "",
        f"Examples: {report.total}  |  Abstentions: {report.abstain_count}",
        "",
        "| facet | bucket | support | P | R | F1 |",
        "|---|---|---:|---:|---:|---:|",
    ]

    def row(facet: str, bucket: str, support: int, m) -> str:
        return f"| {facet} | {bucket} | {support} | {m.precision:.3f} | {m.recall:.3f} | {m.f1:.3f} |"

    lines.append(row("overall", "all", report.total, report.overall))
    for name, b in report.by_position.items():
        lines.append(row("position", name, b.support, b.metrics))
    for name, b in report.by_frequency.items():
        lines.append(row("frequency", name, b.support, b.metrics))
    return "\n".join(lines) + "\n"


_RENDERERS = {
    ReportFormat.JSON: report_to_json,
    ReportFormat.CSV: report_to_csv,
    ReportFormat.MARKDOWN: report_to_markdown,
}


def emit_report(report: EvalReport, format: ReportFormat | str, path: str | Path) -> Path:
    """Serialize the report; identical inputs produce identical bytes."""
    fmt = ReportFormat(format)
    out = Path(path)
    out.write_text(_RENDERERS[fmt](report), encoding="utf-8")
    return out
