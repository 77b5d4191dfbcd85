"""
Serialization of sweep tables and feasibility reports.

CSV columns are ``theta_rad,duration_s,T,P_x_plus,P_qm,D`` with every number
written to 17 significant digits, enough to round-trip a double exactly.
JSON carries the same columns as ``rows`` plus a ``metadata`` block.
Output is a pure function of the input, so identical results give identical
bytes.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from .constants import ExperimentParams, PhysConstants
from .errors import ConfigurationError, OutputError
from .experiment import COLUMNS, FeasibilityReport, SweepResult

__all__ = [
    "SWEEP_FORMATS",
    "REPORT_FORMATS",
    "format_number",
    "dumps_sweep",
    "write_sweep",
    "read_sweep",
    "loads_sweep_csv",
    "loads_sweep_json",
    "dumps_report",
    "write_report",
]

SWEEP_FORMATS = ("csv", "json")
REPORT_FORMATS = ("text", "json")
HEADER = ",".join(COLUMNS)


def format_number(x: float) -> str:
    return format(float(x), ".17g")


def _short(x: float) -> str:
    return repr(float(x))


def dumps_sweep(result: SweepResult, fmt: str = "csv") -> str:
    if fmt == "csv":
        lines = [HEADER]
        lines.extend(",".join(format_number(v) for v in row) for row in result.table())
        return "\n".join(lines) + "\n"
    if fmt == "json":
        doc = {
            "columns": list(COLUMNS),
            "rows": [[float(v) for v in row] for row in result.table()],
            "metadata": result.metadata,
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"
    raise ConfigurationError(f"sweep format must be one of {SWEEP_FORMATS}, got {fmt!r}")


def _emit(text: str, destination) -> int:
    data = text.encode("utf-8")
    if destination is None or destination == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return len(data)
    if hasattr(destination, "write"):
        destination.write(text)
        return len(data)
    path = Path(destination)
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return len(data)


def write_sweep(result: SweepResult, fmt: str = "csv", destination=None) -> int:
    """Write ``result`` to a path, an open text stream, or stdout (``None``/``"-"``).

    Returns the number of bytes written.
    """
    return _emit(dumps_sweep(result, fmt), destination)


def _from_table(table: np.ndarray, metadata: dict) -> SweepResult:
    table = np.asarray(table, dtype=float).reshape(-1, len(COLUMNS))
    return SweepResult(*(table[:, k].copy() for k in range(len(COLUMNS))), metadata=metadata)


def loads_sweep_csv(text: str) -> SweepResult:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != HEADER:
        raise ValueError(f"expected CSV header {HEADER!r}")
    table = [[float(x) for x in ln.split(",")] for ln in lines[1:]]
    return _from_table(np.array(table), {})


def loads_sweep_json(text: str) -> SweepResult:
    doc = json.loads(text)
    if doc.get("columns") != list(COLUMNS):
        raise ValueError(f"expected columns {list(COLUMNS)}")
    return _from_table(np.array(doc["rows"], dtype=float), doc.get("metadata", {}))


def read_sweep(path) -> SweepResult:
    """Parse a CSV or JSON sweep file, choosing by extension."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        return loads_sweep_json(text)
    return loads_sweep_csv(text)


def dumps_report(report: FeasibilityReport, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report.as_dict(), indent=1, sort_keys=True) + "\n"
    if fmt != "text":
        raise ConfigurationError(f"report format must be one of {REPORT_FORMATS}, got {fmt!r}")
    p, c = report.params, report.constants
    verdict = "kinetic term negligible" if report.kinetic_negligible else "kinetic term NOT negligible"
    lines = [
        "Feasibility report",
        f"  mass            {_short(p.mass)} kg",
        f"  separation      {_short(p.separation)} m",
        f"  duration        {_short(p.duration)} s",
        f"  T               {_short(report.T)}",
        f"  kinetic_ratio   {_short(report.kinetic_ratio)}",
        f"  max_abs_D       {_short(report.max_abs_D)}",
        f"  argmax_theta    {_short(report.argmax_theta)} rad",
        f"  verdict         {verdict}",
        "Constants",
        f"  G               {_short(c.G)}",
        f"  hbar            {_short(c.hbar)}",
        f"  c               {_short(c.c)}",
        "Context (not modelled)",
    ]
    lines.extend(f"  {k:<26}{_short(v)}" for k, v in sorted(report.context.items()))
    return "\n".join(lines) + "\n"


def write_report(report: FeasibilityReport, fmt: str = "text", destination=None) -> int:
    """Write a feasibility report as text or JSON; returns bytes written."""
    return _emit(dumps_report(report, fmt), destination)


def report_from_dict(doc: dict) -> FeasibilityReport:
    """Inverse of :meth:`FeasibilityReport.as_dict`."""
    return FeasibilityReport(
        T=doc["T"],
        kinetic_ratio=doc["kinetic_ratio"],
        max_abs_D=doc["max_abs_D"],
        argmax_theta=doc["argmax_theta"],
        kinetic_negligible=doc["kinetic_negligible"],
        params=ExperimentParams(**doc["params"]),
        constants=PhysConstants(**doc["constants"]),
        context=doc.get("context", {}),
    )
