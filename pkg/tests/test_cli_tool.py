"""Command-line front end: parsing, reports, files, diagrams, exit codes."""

import json

import numpy as np
import pytest

from tropigait import Gait, GaitParams, NotPartition
from tropigait.cli_tool import main, parse_gait_spec, render_diagram
from tropigait.errors import BadQuantum
from tropigait.gait_model import gait_to_config
from tropigait.locomotion_sim import Segment, SimulationPlan, extract_schedule, simulate

TROT = Gait.of(4, [[1, 4], [2, 3]])
NOMINAL = GaitParams(1.0, 3.0, 2.0)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- parse_gait_spec ---


def test_parse_gait_spec_dsl_with_params():
    g, p = parse_gait_spec("{1,4}<{2,3}", NOMINAL)
    assert g == TROT and p == NOMINAL


def test_parse_gait_spec_dsl_default_params():
    _, p = parse_gait_spec("{1}<{2}<{3}<{4}<{5}<{6}")
    assert p == NOMINAL


def test_parse_gait_spec_json_config():
    text = json.dumps(gait_to_config(TROT, GaitParams(2.0, 4.0, 1.0)))
    g, p = parse_gait_spec(text)
    assert g == TROT and p == GaitParams(2.0, 4.0, 1.0)


def test_parse_gait_spec_duplicate_leg():
    with pytest.raises(NotPartition):
        parse_gait_spec("{1,4}<{2,4}")


def test_parse_gait_spec_round_trip():
    for g, p in [(TROT, NOMINAL), (Gait.of(2, [[1], [2]]), GaitParams(1, 2, 1))]:
        text = json.dumps(gait_to_config(g, p))
        assert parse_gait_spec(text) == (g, p)


# --- analyze ---


def test_analyze_trot_report(capsys):
    code, out, _ = run(capsys, "analyze", "--dsl", "{1,4}<{2,3}")
    assert code == 0
    report = json.loads(out)
    assert report["eigenvalue"] == {"max_cycle_mean": 6.0, "closed_form": 6.0}
    assert report["eigenvector"] == [1, 4, 4, 1, 0, 3, 3, 0]
    assert report["eigenvector_normalized"] == [1, 1, 4, 4, 0, 0, 3, 3]
    assert report["eigenpair_verified"] is True
    assert report["irreducible"] is True
    assert report["assumptions"] == {"a1": True, "a2": True}
    assert report["critical_graph"]["scc_count"] == 1
    assert report["coupling"]["cyclicity"] == 1
    assert report["coupling"]["coupling_time"] <= 2


def test_analyze_trot_slow_stance(capsys):
    code, out, err = run(
        capsys, "analyze", "--dsl", "{1,4}<{2,3}", "--tau-g", "8"
    )
    assert code == 0
    report = json.loads(out)
    assert report["eigenvalue"]["max_cycle_mean"] == 9.0
    assert report["assumptions"]["a2"] is False
    assert report["critical_graph"]["scc_count"] > 1
    assert "assumption A2 fails" in err


def test_analyze_biped(capsys):
    code, out, _ = run(capsys, "analyze", "--dsl", "{1}<{2}")
    assert code == 0
    assert json.loads(out)["eigenvalue"]["closed_form"] == 6.0


def test_analyze_ascii_format(capsys):
    code, out, _ = run(capsys, "analyze", "--dsl", "{1,4}<{2,3}", "--format", "ascii")
    assert code == 0
    assert "eigenvalue    6" in out
    assert "coupling" in out


def test_analyze_writes_report_file(capsys, tmp_path):
    out_dir = tmp_path / "reports"
    code, _, _ = run(
        capsys, "analyze", "--dsl", "{1,4}<{2,3}", "--out", str(out_dir)
    )
    assert code == 0
    report = json.loads((out_dir / "report.json").read_text())
    assert report["eigenvalue"]["closed_form"] == 6.0


def test_analyze_from_config_file(capsys, tmp_path):
    cfg = tmp_path / "gait.json"
    cfg.write_text(json.dumps(gait_to_config(TROT, NOMINAL)))
    code, out, _ = run(capsys, "analyze", "--input", str(cfg))
    assert code == 0
    assert json.loads(out)["eigenvalue"]["closed_form"] == 6.0


# --- exit codes ---


def test_bad_dsl_exits_2(capsys):
    code, _, err = run(capsys, "analyze", "--dsl", "{1,}<{2}")
    assert code == 2 and "error" in err


def test_duplicate_leg_exits_2(capsys):
    code, _, _ = run(capsys, "analyze", "--dsl", "{1}<{1,2}")
    assert code == 2


def test_missing_input_file_exits_4(capsys):
    code, _, err = run(capsys, "analyze", "--input", "/nonexistent/gait.json")
    assert code == 4 and "i/o error" in err


def test_both_input_and_dsl_exits_2(capsys, tmp_path):
    cfg = tmp_path / "gait.json"
    cfg.write_text("{}")
    code, _, _ = run(
        capsys, "analyze", "--input", str(cfg), "--dsl", "{1}<{2}"
    )
    assert code == 2


def test_neither_input_nor_dsl_exits_2(capsys):
    code, _, _ = run(capsys, "analyze")
    assert code == 2


def test_unknown_command_exits_2(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == 2


def test_small_power_cap_exits_2(capsys):
    code, _, _ = run(capsys, "analyze", "--dsl", "{1}<{2}", "--p-max", "1")
    assert code == 2


# --- simulate ---


def test_simulate_csv_eigenray(capsys):
    code, out, _ = run(
        capsys, "simulate", "--dsl", "{1,4}<{2,3}", "--steps", "10",
        "--format", "csv",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "k,t1,t2,t3,t4,l1,l2,l3,l4"
    assert len(lines) == 12
    rows = np.array([[float(c) for c in line.split(",")] for line in lines[1:]])
    assert np.all(np.diff(rows[:, 1:], axis=0) == 6.0)


def test_simulate_json_reports_clean_verification(capsys):
    code, out, _ = run(
        capsys, "simulate", "--dsl", "{1,4}<{2,3}", "--steps", "4"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["verify"]["ok"] is True
    assert payload["verify"]["checked_steps"] == 4
    assert len(payload["trajectory"]["states"]) == 5
    assert payload["schedule"]["legs"][0]["leg"] == 1


def test_simulate_writes_file_set(capsys, tmp_path):
    out_dir = tmp_path / "run"
    code, _, _ = run(
        capsys, "simulate", "--dsl", "{1,4}<{2,3}", "--steps", "6",
        "--out", str(out_dir),
    )
    assert code == 0
    names = {p.name for p in out_dir.iterdir()}
    assert names == {
        "trajectory.csv",
        "trajectory.json",
        "schedule.json",
        "verify_report.json",
        "diagram.txt",
    }
    assert json.loads((out_dir / "verify_report.json").read_text())["ok"] is True


def test_simulate_plan_config_with_disturbance(capsys, tmp_path):
    plan = {
        "segments": [
            {**gait_to_config(TROT, NOMINAL), "steps": 4},
            {**gait_to_config(Gait.of(4, [[1], [2], [3], [4]]), NOMINAL), "steps": 4},
        ],
        "disturbances": [{"step": 2, "event": "t1", "delay": 5.0}],
        "x0": [1, 4, 4, 1, 0, 3, 3, 0],
    }
    cfg = tmp_path / "plan.json"
    cfg.write_text(json.dumps(plan))
    code, out, _ = run(capsys, "simulate", "--input", str(cfg))
    assert code == 0
    payload = json.loads(out)
    assert payload["verify"]["ok"] is True
    assert payload["verify"]["checked_steps"] == 8
    assert "2" in payload["trajectory"]["inputs"]


def test_simulate_negative_delay_exits_2(capsys, tmp_path):
    plan = {
        **gait_to_config(TROT, NOMINAL),
        "disturbances": [{"step": 2, "event": "t1", "delay": -1.0}],
    }
    cfg = tmp_path / "plan.json"
    cfg.write_text(json.dumps(plan))
    code, _, err = run(capsys, "simulate", "--input", str(cfg))
    assert code == 2 and "advance" in err


def test_simulate_random_x0_is_seeded(capsys):
    _, out_a, _ = run(
        capsys, "simulate", "--dsl", "{1,4}<{2,3}", "--x0", "random",
        "--seed", "7", "--format", "csv",
    )
    _, out_b, _ = run(
        capsys, "simulate", "--dsl", "{1,4}<{2,3}", "--x0", "random",
        "--seed", "7", "--format", "csv",
    )
    assert out_a == out_b


# --- matrices ---


def test_matrices_json_names(capsys):
    code, out, _ = run(capsys, "matrices", "--dsl", "{1,4}<{2,3}")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"P", "Q", "C_bar", "C", "A0", "A1", "A", "A_bar"}
    assert payload["A"]["rows"] == 8


def test_matrices_include_blocks_for_normal_gait(capsys):
    code, out, _ = run(capsys, "matrices", "--dsl", "{1,2}<{3,4}")
    assert code == 0
    payload = json.loads(out)
    assert {"Delta", "DeltaPrime", "V"} <= set(payload)


# --- diagrams ---


def test_diagram_trot_anti_phase(capsys):
    code, out, _ = run(capsys, "diagram", "--dsl", "{1,4}<{2,3}")
    assert code == 0
    lines = out.splitlines()
    rows = {line.split("|")[0].strip(): line.split("|", 1)[1] for line in lines[:4]}
    assert rows["leg 1"] == rows["leg 4"]
    assert rows["leg 2"] == rows["leg 3"]
    assert rows["leg 1"] != rows["leg 2"]
    assert "+" in lines[4]


def test_diagram_stance_cell_count(capsys):
    code, out, _ = run(
        capsys, "diagram", "--dsl", "{1,4}<{2,3}", "--steps", "4"
    )
    assert code == 0
    leg1 = out.splitlines()[0].split("|", 1)[1]
    runs = [run_ for run_ in leg1.split(".") if "#" in run_]
    # (eigenvalue - swing) / quantum = (6 - 1) / 0.25 stance cells per cycle
    assert runs and all(len(r.strip()) == 20 for r in runs)


def test_diagram_zero_quantum_exits_2(capsys):
    code, _, _ = run(
        capsys, "diagram", "--dsl", "{1,4}<{2,3}", "--quantum", "0"
    )
    assert code == 2


def test_diagram_column_explosion_exits_2(capsys):
    code, _, err = run(
        capsys, "diagram", "--dsl", "{1,4}<{2,3}", "--quantum", "1e-9"
    )
    assert code == 2 and "columns" in err


def test_render_diagram_rejects_bad_quantum():
    traj = simulate(SimulationPlan([Segment(TROT, NOMINAL, 2)]))
    sched = extract_schedule(traj, NOMINAL)
    for bad in (0, -1.0, float("nan")):
        with pytest.raises(BadQuantum):
            render_diagram(sched, bad)
