import json

import numpy as np
import pytest

from tempcert.cli import EXIT_IO, EXIT_NUMERIC, EXIT_OK, EXIT_PARSE, main
from tempcert.scenario import (
    PureState,
    canonical_scenario,
    load_scenario,
    save_scenario,
    scenario_to_dict,
)
from tempcert.robustness import Depolarizing, apply_noise


@pytest.fixture
def canonical_file(tmp_path):
    path = tmp_path / "canonical.json"
    save_scenario(canonical_scenario(), path)
    return str(path)


class TestEvaluate:
    def test_canonical(self, canonical_file, capsys):
        assert main(["evaluate", "--scenario", canonical_file]) == EXIT_OK
        out = capsys.readouterr().out
        assert "I_T         = 5.000000000000" in out
        assert "I_NC        = 5.000000000000" in out
        assert "compatible" in out

    def test_depolarized(self, tmp_path, capsys):
        s = apply_noise(canonical_scenario(), Depolarizing(0.1))
        path = tmp_path / "depol.json"
        save_scenario(s, path)
        assert main(["evaluate", "--scenario", str(path)]) == EXIT_OK
        assert "I_T         = 4.700000000000" in capsys.readouterr().out

    def test_zero_state_parse_error(self, tmp_path, capsys):
        doc = scenario_to_dict(canonical_scenario())
        doc["state"]["vector"] = [[0.0, 0.0]] * 4
        path = tmp_path / "zero.json"
        path.write_text(json.dumps(doc))
        assert main(["evaluate", "--scenario", str(path)]) == EXIT_PARSE

    def test_missing_file_io_error(self, tmp_path):
        assert main(["evaluate", "--scenario", str(tmp_path / "nope.json")]) == EXIT_IO

    def test_report_file(self, canonical_file, tmp_path, capsys):
        out = tmp_path / "eval.json"
        assert main(["evaluate", "--scenario", canonical_file, "--out", str(out)]) == EXIT_OK
        doc = json.loads(out.read_text())
        assert abs(doc["I_T"] - 5.0) <= 1e-12
        assert doc["compatible"] is True


class TestClassicalBound:
    def test_prints_three_first(self, capsys):
        assert main(["classical-bound"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "3"
        assert lines[1] == "maximizers: 20"
        assert len(lines) == 22


class TestOptimize:
    def test_writes_round_trippable_scenario(self, tmp_path, capsys):
        out = tmp_path / "best.json"
        trace = tmp_path / "trace.json"
        code = main(["optimize", "--dim", "4", "--seeds", "3", "--seed", "0",
                     "--out", str(out), "--trace", str(trace)])
        assert code == EXIT_OK
        s = load_scenario(out)
        text1 = out.read_text()
        save_scenario(s, out)
        assert out.read_text() == text1  # bit-identical re-serialization
        doc = json.loads(trace.read_text())
        assert len(doc["traces"]) == 3

    def test_deterministic_output(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        main(["optimize", "--dim", "4", "--seeds", "2", "--seed", "5", "--out", str(a)])
        out_a = capsys.readouterr().out
        main(["optimize", "--dim", "4", "--seeds", "2", "--seed", "5", "--out", str(b)])
        out_b = capsys.readouterr().out
        assert a.read_text() == b.read_text()
        assert out_a.replace(str(a), "") == out_b.replace(str(b), "")


class TestCertify:
    def test_canonical_report(self, canonical_file, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert main(["certify", "--scenario", canonical_file, "--out", str(out)]) == EXIT_OK
        doc = json.loads(out.read_text())
        assert abs(doc["fidelity"] - 1.0) <= 1e-10

    def test_degenerate_exit_code(self, tmp_path):
        s = canonical_scenario().with_state(PureState([1, 0, 0, 0]))
        path = tmp_path / "prod.json"
        save_scenario(s, path)
        assert main(["certify", "--scenario", str(path)]) == EXIT_NUMERIC


class TestSimulate:
    def test_canonical_close_to_five(self, canonical_file, capsys):
        assert main(["simulate", "--scenario", canonical_file,
                     "--shots", "1000000", "--seed", "42"]) == EXIT_OK
        out = capsys.readouterr().out
        line = [l for l in out.splitlines() if l.startswith("I_T")][0]
        assert "5.000000000000" in line

    def test_byte_identical_repeat(self, canonical_file, capsys):
        main(["simulate", "--scenario", canonical_file, "--shots", "10000", "--seed", "9"])
        a = capsys.readouterr().out
        main(["simulate", "--scenario", canonical_file, "--shots", "10000", "--seed", "9"])
        b = capsys.readouterr().out
        assert a == b


class TestSweep:
    def test_depolarizing_csv(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        report = tmp_path / "bounds.json"
        code = main(["sweep", "--model", "depolarizing", "--grid", "1e-4:1e-2:4:log",
                     "--out", str(out), "--report", str(report)])
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "param,epsilon,I_T,fidelity,max_op_distance,bounds_all_hold"
        assert len(lines) == 5
        assert all(l.endswith(",true") for l in lines[1:])
        doc = json.loads(report.read_text())
        assert len(doc["rows"]) == 4

    def test_grid_comma_list(self, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["sweep", "--model", "tilt", "--slot", "1",
                     "--grid", "1e-3,1e-2", "--out", str(out)]) == EXIT_OK
        assert len(out.read_text().splitlines()) == 3

    def test_bad_grid_spec(self, tmp_path, capsys):
        code = main(["sweep", "--model", "depolarizing", "--grid", "a:b:c",
                     "--out", str(tmp_path / "x.csv")])
        assert code == EXIT_PARSE

    def test_explicit_scenario(self, canonical_file, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["sweep", "--scenario", canonical_file, "--model", "jitter",
                     "--grid", "1e-3", "--seed", "4", "--out", str(out)]) == EXIT_OK


class TestParser:
    def test_usage_error_exit_code(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["evaluate"])  # missing --scenario
        assert exc.value.code == 2

    def test_unknown_command(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2
