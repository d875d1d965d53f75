"""
CSV/TSV emission of sweep rows and the human-readable summary footer.
"""

import csv
import logging
import math
import sys
from contextlib import contextmanager
from typing import Any, Dict, Iterator, List, Optional, Sequence, TextIO

from ..core.config import OutputConfig
from ..core.exceptions import OutputError
from ..engine.models import ResultRow

logger = logging.getLogger(__name__)

HEADER = ["ell", "n_c", "kappa", "n_p", "bound", "rate_bpcu", "stderr", "aux", "samples", "seed"]
DELIMITERS = {"csv": ",", "tsv": "\t"}


def format_float(value: Optional[float], digits: int = 9) -> str:
    if value is None:
        return ""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"


def row_fields(row: ResultRow, digits: int = 9) -> List[str]:
    return [
        str(row.ell),
        str(row.n_c),
        format_float(row.kappa, digits),
        str(row.n_p),
        row.bound,
        format_float(row.rate_bpcu, digits),
        format_float(row.stderr, digits),
        format_float(row.aux, digits),
        str(row.samples),
        str(row.seed),
    ]


@contextmanager
def _open_output(path: str) -> Iterator[TextIO]:
    if path == "-":
        yield sys.stdout
        sys.stdout.flush()
        return
    with open(path, "w", newline="", encoding="utf-8") as handle:
        yield handle


def emit(rows: Sequence[ResultRow], output: OutputConfig) -> None:
    """
    Write rows with the fixed header, in the given order.

    Raises:
        OutputError: no rows, unknown format, or the destination is not writable.
    """
    if not rows:
        raise OutputError("No result rows to write")
    delimiter = DELIMITERS.get(output.format)
    if delimiter is None:
        raise OutputError(f"Unknown output format '{output.format}'")

    try:
        with _open_output(output.path) as handle:
            writer = csv.writer(handle, delimiter=delimiter, lineterminator="\n")
            writer.writerow(HEADER)
            for row in rows:
                writer.writerow(row_fields(row, output.significant_digits))
    except OSError as e:
        raise OutputError(f"Cannot write results to {output.path}: {e}") from e

    logger.info(f"Wrote {len(rows)} row(s) to {'standard output' if output.path == '-' else output.path}")


def format_summary(summary: Dict[str, Any]) -> List[str]:
    lines = [
        f"points: {summary.get('points', 0)} (completed {summary.get('completed', 0)}, skipped {summary.get('skipped', 0)}, failed {summary.get('failed', 0)})",
        f"rows: {summary.get('rows', 0)}",
        f"wall clock: {summary.get('wall_clock_seconds', 0.0):.2f}s",
    ]
    point_seconds = summary.get("point_seconds") or {}
    if point_seconds:
        slowest = max(point_seconds, key=point_seconds.get)
        lines.append(f"slowest point: {slowest} ({point_seconds[slowest]:.2f}s)")
    for entry in summary.get("skipped_points", []):
        lines.append(f"skipped {entry}")
    for entry in summary.get("failed_points", []):
        lines.append(f"FAILED {entry}")
    for label, flags in (summary.get("flags") or {}).items():
        lines.append(f"flags {label}: {', '.join(flags)}")
    for entry in summary.get("optimal_ell", []):
        lines.append(f"optimal ell for {entry['bound']} kappa={entry['kappa']:g} n_p={entry['n_p']}: {entry['ell']} ({entry['rate_bpcu']:.4f} bit/cu)")
    for entry in summary.get("best_n_p", []):
        lines.append(f"best n_p for kappa={entry['kappa']:g} ell={entry['ell']}: {entry['n_p']} ({entry['rate_bpcu']:.4f} bit/cu)")
    return lines


def print_summary(summary: Dict[str, Any], stream: Optional[TextIO] = None) -> None:
    """Human-readable footer, to standard error by default"""
    stream = stream or sys.stderr
    for line in format_summary(summary):
        print(line, file=stream)
