"""
Report envelopes, JSON serialization and CSV plot data.

Every command prints one JSON document:

    {"schema": "lp-certify/1", "kind": ..., "config": {...}, "result": {...}}

Keys are sorted and numbers rendered the same way on every run, so two
runs with the same inputs produce byte-identical output.
"""

import dataclasses
import json
import logging
import math
from fractions import Fraction

import mpmath
import pandas as pd

from lp_certify.config import RunConfig
from lp_certify.constants import CNTable, InequalityReport
from lp_certify.errors import DomainError, ReportIOError
from lp_certify.zeros import Census, ZeroReport

logger = logging.getLogger(__name__)

SCHEMA = "lp-certify/1"

KINDS = (
    "verdict",
    "zeros",
    "census",
    "q-inf",
    "c-n",
    "c-n-table",
    "interleaving",
    "roots",
    "inequalities",
    "error",
)

# column order of each CSV kind
PLOT_COLUMNS = {
    "census": ["j", "rho_j", "winding", "real_inside", "nonreal_inside"],
    "c-n-table": ["n", "c_n", "gap_to_qinf"],
    "interleaving": ["name", "lhs", "rhs", "margin", "holds"],
    "disks": ["j", "rho_j", "count", "nonreal"],
}


def _number(x):
    """float when it survives the round trip, a 17-digit string otherwise."""
    try:
        f = float(x)
    except OverflowError:
        f = math.inf
    if not math.isfinite(f) or (f == 0 and x != 0):
        return mpmath.nstr(x, 17)
    return f


def to_jsonable(obj):
    """Convert results (dataclasses, mpmath numbers, Fractions) to plain JSON types."""
    if obj is None or isinstance(obj, (bool, str, int)):
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else repr(obj)
    if isinstance(obj, (Fraction, mpmath.mpf)):
        return _number(obj)
    if isinstance(obj, mpmath.mpc):
        return {"re": _number(obj.real), "im": _number(obj.imag)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj):
        return to_jsonable(dataclasses.asdict(obj))
    if hasattr(obj, "item"):
        # numpy scalars
        return to_jsonable(obj.item())
    return str(obj)


def build_report(kind: str, result, config: RunConfig, **extra) -> dict:
    if kind not in KINDS:
        raise DomainError(f"unknown report kind {kind!r}")
    report = {
        "schema": SCHEMA,
        "kind": kind,
        "config": config.to_dict(),
        "result": to_jsonable(result),
    }
    report.update(to_jsonable(extra))
    return report


def dumps(report: dict, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)
    return json.dumps(report, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def validate_report(report) -> dict:
    """Check the envelope of a parsed report; returns it unchanged."""
    if isinstance(report, str):
        try:
            report = json.loads(report)
        except json.JSONDecodeError as e:
            raise DomainError(f"report is not valid JSON: {e}") from e
    if not isinstance(report, dict):
        raise DomainError("report must be a JSON object")
    if report.get("schema") != SCHEMA:
        raise DomainError(f"field 'schema' must be {SCHEMA!r}, got {report.get('schema')!r}")
    if report.get("kind") not in KINDS:
        raise DomainError(f"field 'kind' must be one of {', '.join(KINDS)}")
    if not isinstance(report.get("config"), dict):
        raise DomainError("field 'config' must be an object")
    if "dps" not in report["config"]:
        raise DomainError("field 'config.dps' is missing")
    if "result" not in report:
        raise DomainError("field 'result' is missing")
    if report["kind"] == "verdict":
        outcome = report["result"].get("outcome") if isinstance(report["result"], dict) else None
        if outcome not in ("PASS", "FAIL", "HYPOTHESES_NOT_MET"):
            raise DomainError(f"field 'result.outcome' is invalid: {outcome!r}")
    return report


# ---------------------------------------------------------------------- plot data


def _plot_rows(report) -> tuple:
    if isinstance(report, Census):
        rows = [row.to_dict() for row in report.rows]
        return "census", rows
    if isinstance(report, CNTable):
        return "c-n-table", list(report.rows)
    if isinstance(report, ZeroReport):
        return "disks", [dict(d) for d in report.disk_counts]
    if isinstance(report, (list, tuple)) and report and all(
        isinstance(r, InequalityReport) for r in report
    ):
        return "interleaving", [r.to_dict() for r in report]
    raise DomainError(
        "plot data is available for census, c_n table, interleaving and disk-count reports"
    )


def plot_frame(report) -> pd.DataFrame:
    kind, rows = _plot_rows(report)
    columns = PLOT_COLUMNS[kind]
    frame = pd.DataFrame(
        [{c: to_jsonable(row.get(c)) for c in columns} for row in rows], columns=columns
    )
    return frame


def emit_plot_data(report, path: str) -> str:
    """Write the report's table as CSV (header row, %.17e numbers). Returns the path."""
    frame = plot_frame(report)
    try:
        frame.to_csv(path, index=False, float_format="%.17e", lineterminator="\n")
    except OSError as e:
        logger.error(f"Error writing plot data to {path}: {e}")
        raise ReportIOError(f"cannot write {path}: {e}") from e
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path
