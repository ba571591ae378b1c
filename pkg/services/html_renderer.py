"""Self-contained HTML report rendering.

The report is one UTF-8 file: styles are inline and plots are inline SVG,
so it opens offline. Rendering is deterministic for a given bundle.
"""

import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from jinja2 import Environment, FileSystemLoader, select_autoescape
from markupsafe import escape

from services.metrics import MetricReport
from services.quality_estimation import QEAggregate
from services.report_builder import (
    HighlightSpan,
    Histogram,
    ReportBundle,
    SampleCategory,
    SampledInstance,
)
from services.sari import SariOperation

logger = logging.getLogger(__name__)

TEMPLATES_DIR = Path(__file__).resolve().parent.parent / "templates"
REPORT_TEMPLATE = "report.html"

QE_LABELS = {
    "compression_ratio": "Compression ratio",
    "levenshtein_similarity": "Levenshtein similarity",
    "sentence_splits": "Sentence splits",
    "exact_match": "Exact copies",
    "added_proportion": "Additions proportion",
    "deleted_proportion": "Deletions proportion",
    "lexical_complexity": "Lexical complexity",
}

CATEGORY_TITLES = {
    SampleCategory.SENTENCE_SPLITTING: "Sentence splitting",
    SampleCategory.STRONG_REWRITE: "Strong rewrites (lowest similarity)",
    SampleCategory.HIGH_COMPRESSION: "High compression",
    SampleCategory.LEXICAL_SIMPLIFICATION: "Lexical simplifications",
    SampleCategory.EXACT_COPIES: "Exact copies",
}


def format_number(value: Any) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.2f}"
    return str(value)


def histogram_svg(
    histogram: Histogram,
    width: int = 480,
    height: int = 200,
    color: str = "#4C78A8",
) -> str:
    """Bar chart of a histogram as an inline SVG element."""
    counts = histogram.counts
    edges = histogram.edges
    max_count = max(counts) if counts else 0
    if max_count <= 0:
        return '<div class="empty">No data</div>'

    margin_l, margin_r, margin_t, margin_b = 32, 10, 10, 24
    w = width - margin_l - margin_r
    h = height - margin_t - margin_b
    bar_w = w / len(counts)

    rects = []
    for i, count in enumerate(counts):
        bar_h = h * count / max_count
        x = margin_l + i * bar_w
        y = margin_t + (h - bar_h)
        title = f"{edges[i]:.3g} to {edges[i + 1]:.3g}: {count}"
        rects.append(
            f'<rect x="{x:.2f}" y="{y:.2f}" width="{bar_w:.2f}" height="{bar_h:.2f}" '
            f'fill="{color}"><title>{escape(title)}</title></rect>'
        )

    x0 = margin_l
    y0 = margin_t + h
    return (
        f'<svg viewBox="0 0 {width} {height}" width="{width}" height="{height}" role="img" '
        f'aria-label="{escape(histogram.label)}">'
        f'<line x1="{x0}" y1="{y0}" x2="{x0 + w}" y2="{y0}" stroke="#444" stroke-width="1"></line>'
        f'<line x1="{x0}" y1="{margin_t}" x2="{x0}" y2="{y0}" stroke="#444" stroke-width="1"></line>'
        f'{"".join(rects)}'
        f'<text x="{x0 - 4}" y="{margin_t + 8}" font-size="10" fill="#555" text-anchor="end">{max_count}</text>'
        f'<text x="{x0}" y="{height - 6}" font-size="10" fill="#555">{edges[0]:.3g}</text>'
        f'<text x="{x0 + w}" y="{height - 6}" font-size="10" fill="#555" text-anchor="end">{edges[-1]:.3g}</text>'
        f'</svg>'
    )


def _segments(tokens: Sequence[str], spans: Sequence[HighlightSpan]) -> List[Dict[str, str]]:
    return [
        {"kind": span.kind.value, "text": " ".join(tokens[span.start:span.end])}
        for span in spans
    ]


def _instance_view(instance: SampledInstance) -> Dict[str, Any]:
    return {
        "index": instance.index,
        "source": _segments(instance.source_tokens, instance.source_spans),
        "output": _segments(instance.output_tokens, instance.output_spans),
        "features": instance.features,
    }


def _score_table(system: MetricReport, reference: Optional[MetricReport]):
    reports = [("System", system)] + ([("Reference", reference)] if reference else [])
    columns: List[str] = []
    getters = []

    if system.sari is not None:
        columns.append("SARI")
        getters.append(lambda r: r.sari)
        for operation in SariOperation:
            columns.append(f"SARI {operation.value}")
            getters.append(
                lambda r, op=operation.value: r.sari_breakdown[op].overall if r.sari_breakdown else None
            )
    if system.bleu is not None:
        columns.append("BLEU")
        getters.append(lambda r: r.bleu)
    if system.fkgl is not None or "fkgl" in system.diagnostics:
        columns.append("FKGL")
        getters.append(lambda r: r.fkgl)
    for name in sorted(system.extras):
        columns.append(name)
        getters.append(lambda r, n=name: r.extras.get(n))

    rows = [
        {"name": name, "cells": [getter(report) for getter in getters]}
        for name, report in reports
    ]
    return columns, rows


def _qe_keys(system: QEAggregate) -> List[str]:
    keys = [key for key in QE_LABELS if key != "lexical_complexity"]
    if system.lexical_complexity is not None:
        keys.append("lexical_complexity")
    return keys


def build_context(bundle: ReportBundle) -> Dict[str, Any]:
    """Template variables for a bundle."""
    score_columns, score_rows = _score_table(bundle.metrics, bundle.reference_metrics)
    keys = _qe_keys(bundle.system_qe)
    qe_rows = [
        {
            "key": key,
            "label": QE_LABELS[key],
            "system": getattr(bundle.system_qe, key),
            "reference": getattr(bundle.reference_qe, key) if bundle.reference_qe else None,
        }
        for key in keys
    ]
    bucket_rows = [
        {
            "label": bucket.label,
            "count": bucket.count,
            "cells": [getattr(bucket.aggregate, key) if bucket.aggregate else None for key in keys],
        }
        for bucket in bundle.length_buckets
    ]
    plots = [
        {"label": histogram.label, "svg": histogram_svg(histogram)}
        for histogram in (bundle.compression_histogram, bundle.similarity_histogram)
    ]
    sample_sections = [
        {
            "title": CATEGORY_TITLES[category],
            "instances": [_instance_view(i) for i in bundle.samples.get(category, [])],
        }
        for category in SampleCategory
    ]
    return {
        "bundle": bundle,
        "score_columns": score_columns,
        "score_rows": score_rows,
        "diagnostics": sorted(bundle.metrics.diagnostics.items()),
        "qe_rows": qe_rows,
        "bucket_rows": bucket_rows,
        "plots": plots,
        "sample_sections": sample_sections,
    }


_environment: Optional[Environment] = None


def get_environment() -> Environment:
    """Get the shared jinja2 environment."""
    global _environment
    if _environment is None:
        _environment = Environment(
            loader=FileSystemLoader(str(TEMPLATES_DIR)),
            autoescape=select_autoescape(["html"]),
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )
        _environment.filters["fmt"] = format_number
    return _environment


def render_html(bundle: ReportBundle) -> str:
    """Render the full report document."""
    template = get_environment().get_template(REPORT_TEMPLATE)
    return template.render(**build_context(bundle))


def write_report(bundle: ReportBundle, path: Union[str, Path]) -> Path:
    """Render and write the report through a temp file and rename.

    Nothing is left at the destination if rendering or writing fails.
    """
    path = Path(path)
    document = render_html(bundle)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(document)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    logger.info("Wrote report to %s", path)
    return path
