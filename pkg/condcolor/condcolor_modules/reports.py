import csv
import json
import logging
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional, TextIO, Union

from pydantic import BaseModel

from .oracles import Prediction, PredictionKind

logger = logging.getLogger(__name__)

TIMEOUT = "timeout"


class Match(str, Enum):
    EQUAL = "equal"
    BOUND_SATISFIED = "bound-satisfied"
    MISMATCH = "mismatch"


class ReportFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class Report(BaseModel):
    """One solver-vs-oracle row."""

    instance: str
    theorem: Optional[str] = None
    n: int
    m: int
    r: int
    chi_r: Union[int, Literal["timeout"]]
    lower_bound: int
    unique: Optional[bool] = None
    partitions: Optional[int] = None
    prediction: Optional[Prediction] = None
    match: Optional[Match] = None
    nodes_explored: int = 0
    elapsed_ms: float = 0.0
    seed: Optional[int] = None
    note: Optional[str] = None
    in_paper_scope: bool = True

    @property
    def timed_out(self) -> bool:
        return self.chi_r == TIMEOUT


REPORT_FIELDS: List[str] = list(Report.model_fields)


def compare(
    prediction: Optional[Prediction],
    chi: Union[int, str],
    unique: Optional[bool] = None,
) -> Optional[Match]:
    """Match verdict; None unless the prediction applies and the solve completed."""
    if prediction is None or not prediction.applicable or chi == TIMEOUT:
        return None
    if prediction.kind is PredictionKind.UNIQUENESS:
        if unique is None:
            return None
        return Match.EQUAL if unique == prediction.value else Match.MISMATCH
    if prediction.kind is PredictionKind.UPPER_BOUND:
        return Match.BOUND_SATISFIED if chi <= prediction.value else Match.MISMATCH
    return Match.EQUAL if chi == prediction.value else Match.MISMATCH


class Summary(BaseModel):
    total: int = 0
    equal: int = 0
    bound_satisfied: int = 0
    mismatch: int = 0
    timeout: int = 0
    unchecked: int = 0
    skipped: int = 0

    @property
    def exit_code(self) -> int:
        if self.mismatch:
            return 2
        if self.timeout:
            return 3
        return 0

    def describe(self) -> str:
        return (
            f"{self.total} rows: {self.equal} equal, {self.bound_satisfied} bound-satisfied, "
            f"{self.mismatch} mismatch, {self.timeout} timeout, {self.unchecked} unchecked, "
            f"{self.skipped} grid points skipped (not applicable)"
        )


def summarize(rows: Iterable[Report], skipped: int = 0) -> Summary:
    summary = Summary(skipped=skipped)
    for row in rows:
        summary.total += 1
        if row.timed_out:
            summary.timeout += 1
        elif row.match is Match.EQUAL:
            summary.equal += 1
        elif row.match is Match.BOUND_SATISFIED:
            summary.bound_satisfied += 1
        elif row.match is Match.MISMATCH:
            summary.mismatch += 1
        else:
            summary.unchecked += 1
    return summary


def csv_row(report: Report) -> Dict[str, Any]:
    """Flat CSV view; the nested prediction is JSON-encoded, missing values are empty."""
    data = report.model_dump(mode="json")
    row: Dict[str, Any] = {}
    for name in REPORT_FIELDS:
        value = data[name]
        if value is None:
            row[name] = ""
        elif isinstance(value, (dict, list)):
            row[name] = json.dumps(value, sort_keys=True)
        else:
            row[name] = value
    return row


def emit_reports(rows: Iterable[Report], fmt: ReportFormat = ReportFormat.JSON, stream: Optional[TextIO] = None):
    """Serialize rows as JSONL or CSV onto ``stream`` (stdout by default)."""
    stream = stream or sys.stdout
    if ReportFormat(fmt) is ReportFormat.JSON:
        for row in rows:
            stream.write(row.model_dump_json() + "\n")
        return
    writer = csv.DictWriter(stream, fieldnames=REPORT_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(csv_row(row))


class ReportWriter:
    """Single writer for report rows, to a file or stdout."""

    def __init__(self, fmt: ReportFormat = ReportFormat.JSON, out: Optional[Union[str, Path]] = None):
        self.fmt = ReportFormat(fmt)
        self.out = Path(out) if out else None

    def write_all(self, rows: Iterable[Report]):
        rows = list(rows)
        if self.out is None:
            emit_reports(rows, self.fmt)
            return
        self.out.parent.mkdir(parents=True, exist_ok=True)
        with open(self.out, "w", encoding="utf-8", newline="") as f:
            emit_reports(rows, self.fmt, f)
        logger.info(f"[Report] wrote {len(rows)} rows to {self.out}")

