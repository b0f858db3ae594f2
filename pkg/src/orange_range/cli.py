"""Command-line interface.

Exit codes: 0 success, 2 invalid input (schema or parameter violations),
3 numerical outcome without a finite answer (unbounded range,
non-terminating simulation, underdetermined fit), 4 I/O failure.
Errors are reported on stderr as one JSON object with an ``error`` category.
Set ``ORANGE_LOG_LEVEL`` (e.g. ``DEBUG``) for diagnostics.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import calibration, config, simulator, telemetry
from .calibration import CalibrationError, UnderdeterminedError
from .core import AncillaryPowerModel, InvalidParameterError, LossFractions, Unbounded
from .generalized import TelemetryError, estimate_range_offline, solve_range_implicit
from .simplified import max_range

log = logging.getLogger("orange_range")

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


class NumericalOutcome(Exception):
    def __init__(self, message: str, payload: dict):
        super().__init__(message)
        self.payload = payload


def dumps(payload: dict) -> str:
    """Canonical JSON: sorted keys, shortest round-trip floats."""
    return json.dumps(payload, sort_keys=True, allow_nan=False)


def _distance(key: str, result) -> dict:
    if isinstance(result, Unbounded):
        raise NumericalOutcome(f"range is unbounded: {result.reason}", result.to_dict())
    return {key: result}


def _mission_overrides(mission, args):
    changes = {}
    if args.velocity is not None:
        changes.update(velocity_mps=args.velocity, v_opt_mps=args.velocity)
    if args.duty is not None:
        changes["duty_cycle"] = args.duty
    return replace(mission, **changes) if changes else mission


# Library-level payload builders; the CLI only adds file handling around them.

def estimate_simple_payload(robot, battery, ancillary, mission) -> dict:
    return _distance("d_max_m", max_range(robot, battery, ancillary, mission))


def estimate_offline_payload(robot, battery, ancillary, profile, approx, v, duty) -> dict:
    return _distance("d_offline_m", estimate_range_offline(robot, battery, ancillary, profile, approx, v, duty))


def solve_implicit_payload(robot, battery, ancillary, profile, v, duty) -> dict:
    return _distance("d_implicit_m", solve_range_implicit(robot, battery, ancillary, profile, v, duty))


def simulate_payload(result: simulator.SimResult) -> dict:
    ae, te = result.energy_breakdown
    return {
        "true_range_m": result.true_range_m,
        "ancillary_energy_j": ae,
        "traversal_energy_j": te,
        "duration_s": result.duration_s,
        "samples": len(result.telemetry),
    }


def replay_payload(trace: telemetry.ReplayTrace) -> dict:
    return {"final_estimate_m": trace.final_estimate, "rows": trace.rows, "malformed": trace.malformed}


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise config.ConfigError(f"{args.command} requires {', '.join(missing)}")


def _load_common(args):
    _require(args, "robot", "battery")
    robot = config.load_robot(args.robot)
    battery = config.load_battery(args.battery)
    ancillary = config.load_ancillary(args.ancillary) if args.ancillary else AncillaryPowerModel()
    return robot, battery, ancillary


def _speed(args):
    mission = _mission_overrides(config.load_mission(args.mission), args) if args.mission else None
    v = args.velocity if args.velocity is not None else (mission.velocity_mps if mission else None)
    duty = args.duty if args.duty is not None else (mission.duty_cycle if mission else 1.0)
    if v is None:
        raise config.ConfigError("velocity required: pass --mission or --velocity")
    return v, duty


def cmd_estimate_simple(args):
    robot, battery, ancillary = _load_common(args)
    _require(args, "mission")
    mission = _mission_overrides(config.load_mission(args.mission), args)
    payload = estimate_simple_payload(robot, battery, ancillary, mission)
    return payload, f"simplified max range: {payload['d_max_m']:.3f} m", None


def cmd_estimate_offline(args):
    robot, battery, ancillary = _load_common(args)
    _require(args, "profile")
    profile, approx = config.load_profile(args.profile)
    v, duty = _speed(args)
    payload = estimate_offline_payload(robot, battery, ancillary, profile, approx, v, duty)
    return payload, f"offline range estimate: {payload['d_offline_m']:.3f} m", None


def cmd_solve_implicit(args):
    robot, battery, ancillary = _load_common(args)
    _require(args, "profile")
    profile, _ = config.load_profile(args.profile)
    v, duty = _speed(args)
    payload = solve_implicit_payload(robot, battery, ancillary, profile, v, duty)
    return payload, f"implicit range solution: {payload['d_implicit_m']:.3f} m", None


def cmd_simulate(args):
    _require(args, "scenario")
    scenario = config.load_scenario(args.scenario)
    changes = {}
    if args.dt is not None:
        changes["dt_s"] = args.dt
    if args.seed is not None:
        changes["seed"] = args.seed
    if changes:
        scenario = replace(scenario, **changes)
    try:
        result = simulator.run(scenario)
    except simulator.SimulationError as exc:
        raise NumericalOutcome(str(exc), {"non_terminating": True}) from exc
    payload = simulate_payload(result)
    artifact = (args.out, telemetry.telemetry_to_csv(result.telemetry)) if args.out else None
    return payload, f"simulated range: {result.true_range_m:.3f} m over {result.duration_s:.1f} s", artifact


def cmd_replay(args):
    _require(args, "log", "battery")
    battery = config.load_battery(args.battery)
    rows = telemetry.read_rows(args.log)
    trace = telemetry.replay(rows, battery, window_m=args.window_m)
    payload = replay_payload(trace)
    artifact = (args.out, trace.to_csv()) if args.out else None
    final = trace.final_estimate
    summary = f"replayed {trace.rows} rows ({trace.malformed} malformed); final estimate: " + (
        f"{final:.3f} m" if final is not None else "unavailable"
    )
    return payload, summary, artifact


def cmd_report(args):
    _require(args, "trials")
    report = telemetry.build_report(telemetry.read_trials(args.trials))
    payload = report.to_dict()
    if args.out:
        telemetry.write_text(Path(args.out).with_suffix(".txt"), report.summary_text())
        artifact = (args.out, report.to_csv())
    else:
        artifact = None
    return payload, f"report over {len(report.rows)} trials in {len(report.summary)} groups", artifact


def cmd_calibrate(args):
    fragment: dict = {}
    residuals: dict = {}
    if args.power_log:
        fit = calibration.fit_ancillary(calibration.read_power_samples(args.power_log))
        fragment["ancillary"] = {"s0_w": fit.s0_w, "s1_w_per_hz": fit.s1_w_per_hz}
        residuals["ancillary_rms_w"] = fit.residual
    if args.decay_log:
        _require(args, "battery")
        rated = config.load_battery(args.battery).rated_energy_j
        fit = calibration.fit_battery_decay(calibration.read_decay_observations(args.decay_log), rated)
        fragment["battery"] = {"k1": fit.k1, "k2": fit.k2}
        residuals["decay_rms_log"] = fit.residual
    if args.wheels_up or args.loaded:
        _require(args, "wheels_up", "loaded", "ancillary")
        anc = config.load_ancillary(args.ancillary).total_power
        fit = calibration.fit_maneuvering_efficiency(
            calibration.read_wheels_up(args.wheels_up), calibration.read_loaded(args.loaded), anc
        )
        losses = LossFractions.from_maneuvering_efficiency(fit.omega_man)
        fragment["robot"] = {"losses": {"eta2_drive_motor": losses.eta2_drive_motor, "eta3_mechanical": 0.0}}
        residuals["omega_man"] = fit.omega_man
        residuals["omega_man_spread"] = fit.residual
    if not fragment:
        raise config.ConfigError("calibrate needs --power-log, --decay-log or --wheels-up/--loaded")
    payload = {**fragment, "residuals": residuals}
    return payload, f"calibrated {', '.join(sorted(fragment))}", None


COMMANDS = {
    "estimate-simple": cmd_estimate_simple,
    "estimate-offline": cmd_estimate_offline,
    "solve-implicit": cmd_solve_implicit,
    "simulate": cmd_simulate,
    "calibrate": cmd_calibrate,
    "replay": cmd_replay,
    "report": cmd_report,
}

JSON_OUT = {"estimate-simple", "estimate-offline", "solve-implicit", "calibrate"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orange", description="Operational range estimation for mobile robots.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--robot")
    parser.add_argument("--battery")
    parser.add_argument("--ancillary")
    parser.add_argument("--mission")
    parser.add_argument("--profile")
    parser.add_argument("--scenario")
    parser.add_argument("--log", help="telemetry CSV to replay")
    parser.add_argument("--trials", help="CSV with d_true_m,d_est_m,label for report")
    parser.add_argument("--power-log", help="calibration CSV: f_s_hz,power_w")
    parser.add_argument("--decay-log", help="calibration CSV: cycles,age_days,measured_energy_j")
    parser.add_argument("--wheels-up", help="calibration CSV: commanded_v_mps,mean_power_w")
    parser.add_argument("--loaded", help="calibration CSV: commanded_v_mps,mean_power_w,mean_traction_n")
    parser.add_argument("--out")
    parser.add_argument("--velocity", type=float)
    parser.add_argument("--duty", type=float)
    parser.add_argument("--window-m", type=float)
    parser.add_argument("--dt", type=float)
    parser.add_argument("--seed", type=int)
    return parser


def _error(category: str, message: str, code: int, payload: dict | None = None) -> int:
    body = {"error": category, "message": message}
    if payload:
        body.update(payload)
    print(dumps(body), file=sys.stderr)
    return code


def run_command(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload, summary, artifact = COMMANDS[args.command](args)
        text = dumps(payload) + "\n"
        if artifact is not None:
            path, content = artifact
            telemetry.write_text(path, content)
            sys.stdout.write(text)
        elif args.out and args.command in JSON_OUT:
            telemetry.write_text(args.out, text)
        else:
            sys.stdout.write(text)
    except NumericalOutcome as exc:
        return _error("numerical", str(exc), EXIT_NUMERIC, exc.payload)
    except UnderdeterminedError as exc:
        return _error("numerical", str(exc), EXIT_NUMERIC)
    except (config.ConfigError, InvalidParameterError, CalibrationError, TelemetryError) as exc:
        return _error("invalid_input", str(exc), EXIT_INVALID)
    except OSError as exc:
        return _error("io", str(exc), EXIT_IO)
    print(summary, file=sys.stderr)
    return EXIT_OK


def main(argv: list[str] | None = None) -> None:
    level = os.environ.get("ORANGE_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run_command(argv))


if __name__ == "__main__":
    main()
