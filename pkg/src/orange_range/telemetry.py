"""Telemetry CSV format, log replay through the online estimator, error reports.

Telemetry CSV: UTF-8, LF line endings, header ``t_s,x_m,v_mps,power_w,moving``.
``power_w`` is the mean power over the interval ending at ``t_s``; ``moving``
is written as ``1``/``0``.
"""
from __future__ import annotations

import csv
import io
import logging
import math
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .core import BatteryModel, TelemetrySample
from .generalized import OnlineEstimator, TelemetryError

log = logging.getLogger(__name__)

TELEMETRY_COLUMNS = ("t_s", "x_m", "v_mps", "power_w", "moving")
TRACE_COLUMNS = ("t_s", "estimate_m", "true_range_m")
REPORT_COLUMNS = ("trial_id", "label", "d_true_m", "d_est_m", "error_pct", "accuracy_pct")

_TRUE = {"1", "true", "yes"}
_FALSE = {"0", "false", "no"}


def fmt(value) -> str:
    """Shortest round-trip text for a number; empty for ``None``."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    return repr(float(value))


def parse_sample(row: Mapping[str, str]) -> TelemetrySample:
    try:
        t, x, v, p = (float(row[k]) for k in ("t_s", "x_m", "v_mps", "power_w"))
        flag = str(row["moving"]).strip().lower()
    except (KeyError, TypeError, ValueError) as exc:
        raise TelemetryError(f"malformed telemetry row {dict(row)!r}") from exc
    if flag in _TRUE:
        moving = True
    elif flag in _FALSE:
        moving = False
    else:
        raise TelemetryError(f"bad moving flag {flag!r}")
    if not all(math.isfinite(val) for val in (t, x, v, p)):
        raise TelemetryError("non-finite value in telemetry row")
    if p < 0:
        raise TelemetryError("negative power in telemetry row")
    return TelemetrySample(t, x, v, p, moving)


def write_telemetry(samples: Iterable[TelemetrySample], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(telemetry_to_csv(samples))


def telemetry_to_csv(samples: Iterable[TelemetrySample]) -> str:
    out = io.StringIO()
    out.write(",".join(TELEMETRY_COLUMNS) + "\n")
    for s in samples:
        out.write(",".join((fmt(s.t_s), fmt(s.x_m), fmt(s.v_mps), fmt(s.power_w), fmt(bool(s.moving)))) + "\n")
    return out.getvalue()


def read_rows(path) -> list[dict]:
    """Raw rows of a telemetry CSV; parsing happens during replay."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or list(reader.fieldnames) != list(TELEMETRY_COLUMNS):
            raise TelemetryError(f"expected header {','.join(TELEMETRY_COLUMNS)}, got {reader.fieldnames}")
        return list(reader)


def read_telemetry(path) -> list[TelemetrySample]:
    """Strict reader: any malformed row raises :class:`TelemetryError`."""
    return [parse_sample(row) for row in read_rows(path)]


@dataclass
class ReplayTrace:
    t_s: list = field(default_factory=list)
    estimate_m: list = field(default_factory=list)
    rows: int = 0
    malformed: int = 0

    @property
    def final_estimate(self):
        for est in reversed(self.estimate_m):
            if est is not None:
                return est
        return None

    def estimate_at(self, t: float):
        """Latest available estimate at or before ``t``."""
        best = None
        for ts, est in zip(self.t_s, self.estimate_m):
            if ts > t:
                break
            if est is not None:
                best = est
        return best

    def to_csv(self, true_range_m: float | None = None) -> str:
        out = io.StringIO()
        out.write(",".join(TRACE_COLUMNS) + "\n")
        for t, est in zip(self.t_s, self.estimate_m):
            out.write(f"{fmt(t)},{fmt(est)},{fmt(true_range_m)}\n")
        return out.getvalue()


def replay(
    log_rows: Iterable,
    battery: BatteryModel,
    estimator: OnlineEstimator | None = None,
    *,
    window_m: float | None = None,
    max_malformed_fraction: float = 0.1,
) -> ReplayTrace:
    """Feed a telemetry stream through the online estimator in order.

    Items may be :class:`TelemetrySample` objects or raw CSV row mappings.
    Malformed or rejected rows are skipped and counted; if more than
    ``max_malformed_fraction`` of the stream is bad the whole stream is
    rejected with :class:`TelemetryError`.
    """
    est = estimator if estimator is not None else OnlineEstimator(battery, window_m=window_m)
    trace = ReplayTrace()
    for item in log_rows:
        trace.rows += 1
        try:
            sample = item if isinstance(item, TelemetrySample) else parse_sample(item)
            state = est.update(sample)
        except TelemetryError as exc:
            trace.malformed += 1
            log.warning("skipping telemetry row %d: %s", trace.rows, exc)
            continue
        trace.t_s.append(sample.t_s)
        trace.estimate_m.append(state.current_estimate_m)
    if trace.rows and trace.malformed > max_malformed_fraction * trace.rows:
        raise TelemetryError(f"{trace.malformed} of {trace.rows} telemetry rows malformed; stream rejected")
    return trace


@dataclass(frozen=True)
class TrialRow:
    trial_id: int
    label: str
    d_true_m: float
    d_est_m: float
    error_pct: float
    accuracy_pct: float


@dataclass(frozen=True)
class GroupSummary:
    label: str
    count: int
    mean_error_pct: float
    std_error_pct: float
    mean_accuracy_pct: float
    std_accuracy_pct: float


@dataclass(frozen=True)
class ErrorReport:
    rows: tuple[TrialRow, ...]
    summary: tuple[GroupSummary, ...]
    rejected: tuple[tuple[int, str], ...] = ()

    def group(self, label: str) -> GroupSummary:
        for g in self.summary:
            if g.label == label:
                return g
        raise KeyError(label)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(",".join(REPORT_COLUMNS) + "\n")
        for r in self.rows:
            out.write(f"{r.trial_id},{r.label},{fmt(r.d_true_m)},{fmt(r.d_est_m)},{fmt(r.error_pct)},{fmt(r.accuracy_pct)}\n")
        return out.getvalue()

    def summary_text(self) -> str:
        lines = [f"{'label':<20} {'n':>4} {'accuracy %':>12} {'std':>8} {'error %':>10} {'std':>8}"]
        for g in self.summary:
            lines.append(
                f"{g.label:<20} {g.count:>4} {g.mean_accuracy_pct:>12.3f} {g.std_accuracy_pct:>8.3f}"
                f" {g.mean_error_pct:>10.3f} {g.std_error_pct:>8.3f}"
            )
        if self.rejected:
            lines.append(f"rejected trials: {len(self.rejected)}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "groups": {
                g.label: {
                    "count": g.count,
                    "mean_accuracy_pct": g.mean_accuracy_pct,
                    "std_accuracy_pct": g.std_accuracy_pct,
                    "mean_error_pct": g.mean_error_pct,
                    "std_error_pct": g.std_error_pct,
                }
                for g in self.summary
            },
            "rejected": len(self.rejected),
        }


def _std(values: list[float]) -> float:
    return statistics.stdev(values) if len(values) > 1 else 0.0


def build_report(trials: Iterable[tuple[float, float, str]]) -> ErrorReport:
    """Per-trial error and accuracy plus per-label mean and sample std.

    error_pct = 100 * |d_est - d_true| / d_true, accuracy_pct = 100 - error_pct.
    Trials with non-positive ``d_true`` or a non-finite estimate are
    rejected and listed in ``ErrorReport.rejected``.
    """
    rows: list[TrialRow] = []
    rejected: list[tuple[int, str]] = []
    for i, (d_true, d_est, label) in enumerate(trials):
        try:
            d_true, d_est = float(d_true), float(d_est)
        except (TypeError, ValueError):
            rejected.append((i, "non-numeric distance"))
            continue
        if not (math.isfinite(d_true) and d_true > 0):
            rejected.append((i, "d_true must be positive"))
            continue
        if not math.isfinite(d_est):
            rejected.append((i, "d_est must be finite"))
            continue
        error = 100.0 * abs(d_est - d_true) / d_true
        rows.append(TrialRow(i, str(label), d_true, d_est, error, 100.0 - error))

    groups: dict[str, list[TrialRow]] = {}
    for row in rows:
        groups.setdefault(row.label, []).append(row)
    summary = []
    for label, members in groups.items():
        errors = [m.error_pct for m in members]
        accs = [m.accuracy_pct for m in members]
        summary.append(
            GroupSummary(label, len(members), statistics.fmean(errors), _std(errors), statistics.fmean(accs), _std(accs))
        )
    return ErrorReport(tuple(rows), tuple(summary), tuple(rejected))


def read_trials(path) -> list[tuple[str, str, str]]:
    """Trials CSV with columns ``d_true_m,d_est_m,label``."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        need = {"d_true_m", "d_est_m", "label"}
        if reader.fieldnames is None or not need <= set(reader.fieldnames):
            raise TelemetryError("trials CSV needs columns d_true_m,d_est_m,label")
        return [(row["d_true_m"], row["d_est_m"], row["label"]) for row in reader]


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="")
