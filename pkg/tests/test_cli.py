import json
import subprocess
import sys

import pytest

from orange_range import cli, config, simulator
from orange_range.telemetry import read_rows, replay


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def files(tmp_path):
    return {
        "robot": write(tmp_path / "robot.json", {"mass_kg": 10, "c_rr": 0.1, "drag_coeff": 0.0}),
        "battery": write(tmp_path / "battery.json", {"rated_energy_j": 981}),
        "ancillary": write(tmp_path / "anc.json", {}),
        "mission": write(tmp_path / "mission.json", {"v_opt_mps": 1.0, "duty_cycle": 1.0}),
        "profile": write(tmp_path / "profile.json", {"f_const_n": 9.81, "offline_mean_specific_force_n": 0.0}),
        "scenario": write(
            tmp_path / "scenario.json",
            {
                "robot": {"mass_kg": 10, "c_rr": 0.1, "drag_coeff": 0.2, "losses": {"eta2_drive_motor": 0.1}},
                "battery": {"rated_energy_j": 3000},
                "ancillary": {"s0_w": 3.0},
                "duty_pattern": {"move_s": 5, "pause_s": 1},
            },
        ),
    }


def run_cli(capsys, *argv):
    code = cli.run_command(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_estimate_simple(capsys, files):
    code, out, err = run_cli(capsys, "estimate-simple", "--robot", files["robot"], "--battery", files["battery"],
                             "--ancillary", files["ancillary"], "--mission", files["mission"])
    assert code == 0
    assert json.loads(out) == {"d_max_m": pytest.approx(100.0)}
    assert "100.000 m" in err


def test_cli_output_equals_library(capsys, files):
    code, out, _ = run_cli(capsys, "estimate-simple", "--robot", files["robot"], "--battery", files["battery"],
                           "--mission", files["mission"])
    direct = cli.estimate_simple_payload(
        config.load_robot(files["robot"]), config.load_battery(files["battery"]),
        config.load_ancillary(files["ancillary"]), config.load_mission(files["mission"]),
    )
    assert out == cli.dumps(direct) + "\n"


def test_estimate_offline_and_implicit(capsys, files):
    common = ["--robot", files["robot"], "--battery", files["battery"], "--profile", files["profile"], "--mission", files["mission"]]
    code, out, _ = run_cli(capsys, "estimate-offline", *common)
    assert code == 0 and json.loads(out)["d_offline_m"] == pytest.approx(100.0)
    code, out, _ = run_cli(capsys, "solve-implicit", *common)
    assert code == 0 and json.loads(out)["d_implicit_m"] == pytest.approx(100.0, rel=1e-6)


def test_unbounded_exit_3(capsys, files, tmp_path):
    frictionless = write(tmp_path / "r.json", {"mass_kg": 10, "c_rr": 0.0, "drag_coeff": 0.0})
    code, _, err = run_cli(capsys, "estimate-simple", "--robot", frictionless, "--battery", files["battery"],
                           "--mission", files["mission"])
    assert code == 3
    assert json.loads(err.splitlines()[0])["unbounded"] is True


def test_missing_file_exit_4(capsys, files):
    code, _, err = run_cli(capsys, "estimate-simple", "--robot", "/nonexistent/robot.json", "--battery", files["battery"],
                           "--mission", files["mission"])
    assert code == 4
    assert json.loads(err)["error"] == "io"


def test_schema_violation_exit_2(capsys, files, tmp_path):
    bad = write(tmp_path / "bad.json", {"mass_kg": 10, "c_rr": 0.1, "drag_coeff": 0.0, "extra": 1})
    code, _, err = run_cli(capsys, "estimate-simple", "--robot", bad, "--battery", files["battery"], "--mission", files["mission"])
    assert code == 2 and json.loads(err)["error"] == "invalid_input"


def test_simulate_then_replay(capsys, files, tmp_path):
    log = tmp_path / "telemetry.csv"
    code, out, _ = run_cli(capsys, "simulate", "--scenario", files["scenario"], "--out", str(log))
    assert code == 0
    sim = json.loads(out)
    battery = write(tmp_path / "b.json", {"rated_energy_j": 3000})
    trace_path = tmp_path / "trace.csv"
    code, out, _ = run_cli(capsys, "replay", "--log", str(log), "--battery", battery, "--out", str(trace_path))
    assert code == 0
    final = json.loads(out)["final_estimate_m"]
    assert final == pytest.approx(sim["true_range_m"], rel=0.02)
    assert trace_path.read_text().startswith("t_s,estimate_m,true_range_m\n")
    direct = replay(read_rows(log), config.load_battery(battery))
    assert out == cli.dumps(cli.replay_payload(direct)) + "\n"


def test_simulate_matches_library(capsys, files, tmp_path):
    code, out, _ = run_cli(capsys, "simulate", "--scenario", files["scenario"], "--dt", "0.02")
    from dataclasses import replace
    direct = simulator.run(replace(config.load_scenario(files["scenario"]), dt_s=0.02))
    assert out == cli.dumps(cli.simulate_payload(direct)) + "\n"


def test_calibrate(capsys, files, tmp_path):
    power = tmp_path / "power.csv"
    power.write_text("f_s_hz,power_w\n0,2\n20,3\n40,4\n")
    decay = tmp_path / "decay.csv"
    import math
    rows = [(c, t, 5000 * math.exp(-(0.002 * c + 0.001 * t))) for c, t in [(0, 0), (50, 30), (100, 200)]]
    decay.write_text("cycles,age_days,measured_energy_j\n" + "".join(f"{c},{t},{e!r}\n" for c, t, e in rows))
    wu = tmp_path / "wu.csv"
    wu.write_text("commanded_v_mps,mean_power_w\n1.0,4.0\n")
    ld = tmp_path / "ld.csv"
    ld.write_text(f"commanded_v_mps,mean_power_w,mean_traction_n\n1.0,{4.0 + 9.81 / 0.72!r},9.81\n")
    anc = write(tmp_path / "anc.json", {"s0_w": 4.0})
    battery = write(tmp_path / "b.json", {"rated_energy_j": 5000})
    out_path = tmp_path / "fit.json"
    code, _, _ = run_cli(capsys, "calibrate", "--power-log", str(power), "--decay-log", str(decay), "--battery", battery,
                         "--wheels-up", str(wu), "--loaded", str(ld), "--ancillary", anc, "--out", str(out_path))
    assert code == 0
    fit = json.loads(out_path.read_text())
    assert fit["ancillary"]["s0_w"] == pytest.approx(2.0)
    assert fit["battery"]["k1"] == pytest.approx(0.002)
    assert 1 - fit["robot"]["losses"]["eta2_drive_motor"] == pytest.approx(0.72)
    # fragments merge into valid config documents
    config.ancillary_from_dict(fit["ancillary"])
    config.robot_from_dict({"mass_kg": 1, "c_rr": 0, "drag_coeff": 0, **fit["robot"]})


def test_report(capsys, tmp_path):
    trials = tmp_path / "trials.csv"
    trials.write_text("d_true_m,d_est_m,label\n100,93.87,online\n100,82.97,offline\n")
    out = tmp_path / "report.csv"
    code, stdout, _ = run_cli(capsys, "report", "--trials", str(trials), "--out", str(out))
    assert code == 0
    assert json.loads(stdout)["groups"]["online"]["mean_accuracy_pct"] == pytest.approx(93.87)
    assert out.with_suffix(".txt").exists()


def test_console_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "orange_range", "estimate-simple", "--robot", files["robot"], "--battery", files["battery"],
         "--mission", files["mission"]],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["d_max_m"] == pytest.approx(100.0)
