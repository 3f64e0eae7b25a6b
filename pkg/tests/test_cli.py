import json
from pathlib import Path

import pytest

from naqsim.cli import cli_dispatch
from naqsim.profile import builtin_profile, profile_to_json


@pytest.fixture
def bell_file(tmp_path) -> str:
    path = tmp_path / "bell.naq"
    path.write_text("qubits 2\nh 0\ncnot 0 1\nmeasure all\n")
    return str(path)


@pytest.fixture
def profile_file(tmp_path) -> str:
    path = tmp_path / "profile.json"
    path.write_text(profile_to_json(builtin_profile("rb87-2023")))
    return str(path)


class TestExitCodes:
    def test_no_arguments_usage_error(self, capsys):
        assert cli_dispatch([]) == 2
        assert "usage" in capsys.readouterr().err.lower()

    def test_unknown_subcommand(self, capsys):
        assert cli_dispatch(["frobnicate"]) == 2

    def test_unknown_flag(self, capsys):
        assert cli_dispatch(["parse", "--bogus"]) == 2

    def test_missing_circuit_file_is_domain_error(self, capsys):
        code = cli_dispatch(
            ["run", "--circuit", "/nonexistent/c.naq", "--shots", "1"]
        )
        assert code == 1
        assert "/nonexistent/c.naq" in capsys.readouterr().err

    def test_parse_error_is_domain_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.naq"
        bad.write_text("qubits 2\nfoo 0\n")
        assert cli_dispatch(["parse", str(bad)]) == 1
        assert "unknown gate" in capsys.readouterr().err


class TestProfileValidate:
    def test_valid_profile(self, profile_file, capsys):
        assert cli_dispatch(["profile", "validate", profile_file]) == 0
        assert "valid" in capsys.readouterr().out

    def test_invalid_profile(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"t1": 1.0, "t2": 9.0}))
        assert cli_dispatch(["profile", "validate", str(path)]) == 1
        assert "t2" in capsys.readouterr().err


class TestParse:
    def test_canonical_echo(self, bell_file, capsys):
        assert cli_dispatch(["parse", bell_file]) == 0
        out = capsys.readouterr().out
        assert out.startswith("qubits 2\n")
        assert "measure all" in out


class TestPrepare:
    def test_prepare_emits_plan(self, tmp_path, capsys):
        plan_path = tmp_path / "plan.json"
        code = cli_dispatch(
            ["prepare", "--qubits", "9", "--seed", "4", "--emit-plan", str(plan_path)]
        )
        assert code == 0
        doc = json.loads(plan_path.read_text())
        assert "moves" in doc and "summary" in doc
        for move in doc["moves"]:
            assert len(move["from"]) == 2 and len(move["to"]) == 2


class TestTranspile:
    def test_schedule_and_report_documents(self, bell_file, tmp_path):
        sched_path = tmp_path / "sched.json"
        report_path = tmp_path / "report.json"
        code = cli_dispatch(
            [
                "transpile",
                "--circuit",
                bell_file,
                "--mode",
                "swap",
                "--emit-schedule",
                str(sched_path),
                "--report",
                str(report_path),
            ]
        )
        assert code == 0
        sched = json.loads(sched_path.read_text())
        assert sched["layers"][-1]["kind"] == "measure"
        for layer in sched["layers"]:
            assert "duration_us" in layer and "operands" in layer
        report = json.loads(report_path.read_text())
        assert report["t_shot_ms"] > 410.0


class TestRun:
    def test_histogram_document(self, bell_file, tmp_path):
        out = tmp_path / "hist.json"
        code = cli_dispatch(
            [
                "run", "--circuit", bell_file, "--shots", "200", "--seed", "5",
                "--noise", "off", "--out", str(out),
            ]
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert set(doc["histogram"]) == {"00", "11"}
        assert sum(doc["histogram"].values()) == 200
        assert doc["timing"]["n_shots"] == 200
        assert "noise_events" in doc

    def test_json_flag_outputs_document(self, bell_file, capsys):
        code = cli_dispatch(
            ["--json", "run", "--circuit", bell_file, "--shots", "50", "--noise", "off"]
        )
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert sum(doc["histogram"].values()) == 50


class TestMis:
    def test_mis_document(self, tmp_path):
        positions = tmp_path / "pos.json"
        rb = 8.7
        positions.write_text(json.dumps([[0, 0], [0.8 * rb, 0], [1.6 * rb, 0]]))
        out = tmp_path / "mis.json"
        code = cli_dispatch(
            [
                "mis", "--positions", str(positions), "--rb", str(rb),
                "--omega", "1.0", "--sweep-time", "20", "--shots", "60",
                "--seed", "3", "--out", str(out),
            ]
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["edges"] == [[0, 1], [1, 2]]
        assert doc["best_size"] == 2
        assert doc["oracle_size"] == 2
        assert len(doc["shots"]) == 60


class TestBench:
    def test_ghz_suite_record_count(self, tmp_path):
        out = tmp_path / "report.jsonl"
        code = cli_dispatch(
            [
                "bench", "--suite", "ghz", "--widths", "2..6", "--shots", "50",
                "--seed", "1", "--noise", "off", "--out", str(out),
            ]
        )
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert len(lines) == 6  # 5 records + summary
        assert json.loads(lines[-1])["summary"]["n_records"] == 5

    def test_plot_csv_emitted(self, tmp_path):
        csv_path = tmp_path / "plot.csv"
        code = cli_dispatch(
            [
                "bench", "--suite", "clops", "--widths", "3", "--layers", "20",
                "--shots", "2", "--plot-csv", str(csv_path),
            ]
        )
        assert code == 0
        assert csv_path.read_text().startswith("width,depth,metric")

    def test_env_var_profile(self, tmp_path, monkeypatch, profile_file):
        monkeypatch.setenv("NAQ_PROFILE", profile_file)
        code = cli_dispatch(
            ["bench", "--suite", "clops", "--widths", "2", "--layers", "5", "--shots", "1"]
        )
        assert code == 0
