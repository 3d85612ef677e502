"""CSV and JSON emitters for curves, simulation results, and validation
reports, plus the parsers that make the emitted artifacts round-trip.

Floats are printed with 9 significant digits, enough that parsing an
emitted file and re-emitting it reproduces the bytes exactly. Missing
fields are empty in CSV and null in JSON.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Mapping, Sequence

from .simulator import SimResult
from .sweep import TradeoffCurve
from .validation import ValidationReport

__all__ = [
    "CURVE_FIELDS",
    "RESULT_FIELDS",
    "REPORT_FIELDS",
    "curve_rows",
    "emit_csv",
    "emit_json",
    "parse_csv",
    "parse_json",
    "rows_to_csv",
    "rows_to_json",
    "result_rows",
    "report_rows",
    "emit_result_csv",
    "emit_result_json",
    "emit_report_csv",
    "emit_report_json",
]

CURVE_FIELDS = ("label", "p", "M", "pt_dbm", "avg_energy", "avg_energy_normalized", "avg_aoi")

RESULT_FIELDS = (
    "estimator",
    "p",
    "M",
    "avg_aoi_est",
    "stderr_aoi",
    "avg_energy_est",
    "stderr_energy",
    "slots",
    "packets_generated",
    "successes",
    "seed",
)

REPORT_FIELDS = (
    "p",
    "M",
    "analytic_aoi",
    "analytic_energy",
    "slot_aoi",
    "slot_stderr_aoi",
    "slot_energy",
    "slot_stderr_energy",
    "slot_pass",
    "cycle_aoi",
    "cycle_stderr_aoi",
    "cycle_energy",
    "cycle_stderr_energy",
    "cycle_pass",
)


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".9g")
    return str(value)


def curve_rows(curves: Sequence[TradeoffCurve]) -> list[dict[str, Any]]:
    """Flatten curves into row dicts with the CURVE_FIELDS keys.

    Unnormalized curves fill ``avg_energy``; normalized curves fill
    ``avg_energy_normalized`` (their stored energies are already divided).
    """
    rows = []
    for curve in curves:
        normalized = curve.normalizer != 1.0
        for pt in curve.points:
            rows.append(
                {
                    "label": curve.label,
                    "p": pt.p,
                    "M": pt.max_tx,
                    "pt_dbm": pt.tx_power_dbm,
                    "avg_energy": None if normalized else pt.avg_energy,
                    "avg_energy_normalized": pt.avg_energy if normalized else None,
                    "avg_aoi": pt.avg_aoi,
                }
            )
    return rows


def rows_to_csv(rows: Sequence[Mapping[str, Any]], fields: Sequence[str] = CURVE_FIELDS) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_cell(row.get(name)) for name in fields])
    return buf.getvalue()


def rows_to_json(rows: Sequence[Mapping[str, Any]], fields: Sequence[str] = CURVE_FIELDS) -> str:
    ordered = [{name: row.get(name) for name in fields} for row in rows]
    return json.dumps(ordered, indent=2) + "\n"


def emit_csv(curves: Sequence[TradeoffCurve]) -> str:
    """Curves as CSV text: header row, then one row per point in curve order."""
    return rows_to_csv(curve_rows(curves))


def emit_json(curves: Sequence[TradeoffCurve]) -> str:
    """Curves as a JSON array of objects mirroring the CSV columns."""
    return rows_to_json(curve_rows(curves))


_CURVE_TYPES: dict[str, Any] = {
    "label": str,
    "p": float,
    "M": int,
    "pt_dbm": float,
    "avg_energy": float,
    "avg_energy_normalized": float,
    "avg_aoi": float,
    "estimator": str,
    "avg_aoi_est": float,
    "stderr_aoi": float,
    "avg_energy_est": float,
    "stderr_energy": float,
    "slots": int,
    "packets_generated": int,
    "successes": int,
    "seed": int,
}


def _typed(name: str, text: str) -> Any:
    if text == "":
        return None
    if name.endswith("_pass"):
        return text == "true"
    caster = _CURVE_TYPES.get(name, float)
    return caster(text)


def parse_csv(text: str) -> list[dict[str, Any]]:
    """Parse an emitted CSV back into typed row dicts (header-driven)."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("CSV input is empty") from None
    return [
        {name: _typed(name, cell) for name, cell in zip(header, row)} for row in reader
    ]


def parse_json(text: str) -> list[dict[str, Any]]:
    """Parse an emitted JSON array back into row dicts."""
    rows = json.loads(text)
    if not isinstance(rows, list):
        raise ValueError("JSON input must be an array of row objects")
    return rows


def result_rows(
    result: SimResult, estimator: str, p: float, max_tx: int
) -> list[dict[str, Any]]:
    return [
        {
            "estimator": estimator,
            "p": p,
            "M": max_tx,
            "avg_aoi_est": result.avg_aoi_est,
            "stderr_aoi": result.stderr_aoi,
            "avg_energy_est": result.avg_energy_est,
            "stderr_energy": result.stderr_energy,
            "slots": result.slots,
            "packets_generated": result.packets_generated,
            "successes": result.successes,
            "seed": result.seed,
        }
    ]


def emit_result_csv(result: SimResult, estimator: str, p: float, max_tx: int) -> str:
    return rows_to_csv(result_rows(result, estimator, p, max_tx), RESULT_FIELDS)


def emit_result_json(result: SimResult, estimator: str, p: float, max_tx: int) -> str:
    return rows_to_json(result_rows(result, estimator, p, max_tx), RESULT_FIELDS)


def report_rows(report: ValidationReport) -> list[dict[str, Any]]:
    rows = []
    for point in report.points:
        rows.append(
            {
                "p": point.p,
                "M": point.max_tx,
                "analytic_aoi": point.exact_aoi,
                "analytic_energy": point.exact_energy,
                "slot_aoi": point.slot.avg_aoi_est,
                "slot_stderr_aoi": point.slot.stderr_aoi,
                "slot_energy": point.slot.avg_energy_est,
                "slot_stderr_energy": point.slot.stderr_energy,
                "slot_pass": point.slot_pass,
                "cycle_aoi": point.cycle.avg_aoi_est,
                "cycle_stderr_aoi": point.cycle.stderr_aoi,
                "cycle_energy": point.cycle.avg_energy_est,
                "cycle_stderr_energy": point.cycle.stderr_energy,
                "cycle_pass": point.cycle_pass,
            }
        )
    return rows


def emit_report_csv(report: ValidationReport) -> str:
    return rows_to_csv(report_rows(report), REPORT_FIELDS)


def emit_report_json(report: ValidationReport) -> str:
    """Validation report as JSON: per-point rows plus the global verdict."""
    payload = {
        "points": report_rows(report),
        "num_points": len(report.points),
        "num_passed": sum(1 for pt in report.points if pt.slot_pass and pt.cycle_pass),
        "passed": report.passed,
    }
    return json.dumps(payload, indent=2) + "\n"
