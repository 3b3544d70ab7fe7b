import json

import pytest

from fhgames.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGadgetAndSolve:
    def test_gadget_to_file_then_solve(self, tmp_path, capsys):
        path = tmp_path / "g5.json"
        code, out, _ = run(capsys, "gadget", "--family", "G", "--param", "5", "-o", str(path))
        assert code == 0
        code, out, _ = run(capsys, "solve", "-g", str(path), "-T", "7")
        assert code == 0
        assert "2 = 127/2^7" in out

    def test_solve_json_and_decimal(self, capsys):
        code, out, _ = run(capsys, "solve", "--gadget", "M", "-T", "2", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema"] == "fhgames/1"
        assert doc["result"]["values"]["x"] == "1/2^1"
        code, out, _ = run(capsys, "solve", "--gadget", "M", "-T", "2", "--decimal", "3")
        assert "x = 1/2^1  (~0.500)" in out

    def test_solve_csv(self, capsys):
        code, out, _ = run(capsys, "solve", "--gadget", "M", "-T", "2", "--csv")
        assert code == 0
        assert out.splitlines()[0] == "t,start,x,h,top,2,1,bot"

    def test_gadget_stdout_is_loadable(self, capsys):
        from fhgames.game import load

        code, out, _ = run(capsys, "gadget", "--family", "H", "--param", "3")
        assert code == 0
        assert load(out).start == "3s"


class TestStrategyAndMinimize:
    def test_strategy_output(self, capsys):
        code, out, _ = run(capsys, "strategy", "--gadget", "M", "-T", "3")
        assert code == 0
        assert "remaining=3 state=x arc=0 -> 2" in out
        assert "remaining=2 state=x arc=1 -> h" in out

    def test_minimize_sets_finds_primorial(self, capsys):
        code, out, _ = run(capsys, "minimize", "--gadget", "F:2", "-T", "22", "--sets")
        assert code == 0
        assert "N=0 p=6 states=6 bits=3" in out

    def test_minimize_markov_json(self, capsys):
        code, out, _ = run(
            capsys, "minimize", "--gadget", "M", "-T", "5", "--json"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["states"] == doc["result"]["N"] + doc["result"]["p"]
        assert doc["result"]["strategy"]["actions"]


class TestVerifyCommand:
    def test_passing_check_exits_zero(self, capsys):
        code, out, _ = run(capsys, "verify", "fib-ratio", "--i", "3", "--amax", "256")
        assert code == 0
        assert "verdict: pass" in out

    def test_failing_check_exits_one(self, capsys):
        code, out, _ = run(capsys, "verify", "shortcut-memory", "--c", "5")
        assert code == 1
        assert "verdict: fail" in out

    def test_unknown_check_is_usage_error(self, capsys):
        code, _, err = run(capsys, "verify", "definitely-not-a-check")
        assert code == 2
        assert "unknown check" in err

    def test_missing_parameter_is_usage_error(self, capsys):
        code, _, err = run(capsys, "verify", "fib-ratio")
        assert code == 2

    def test_verify_json_report(self, capsys):
        code, out, _ = run(
            capsys, "verify", "cycle-values", "--p", "3", "--tmax", "64", "--json"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["report"]["verdict"] == "pass"
        assert "runtime_seconds" not in doc["report"]

    def test_memoryless_horizon_via_gadget(self, capsys):
        code, out, _ = run(
            capsys,
            "verify", "memoryless-horizon", "--gadget", "M",
            "--eps-exp", "1", "--eps-exp", "4", "--json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["report"]["verdict"] == "pass"


class TestOracleSimulateScan:
    def test_oracle_infinite(self, capsys):
        code, out, _ = run(capsys, "oracle", "--gadget", "M", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["values"]["start"] == "1/1"
        assert doc["result"]["strategy"] == {"x": 0}

    def test_oracle_memory_search(self, capsys):
        code, out, _ = run(
            capsys,
            "oracle", "--gadget", "M", "--maxmem", "6", "-T", "5",
            "--eps", "1/2^6",
        )
        assert code == 0
        assert "minimal memory states = 3" in out

    def test_oracle_memory_needs_eps_and_horizon(self, capsys):
        code, _, err = run(capsys, "oracle", "--gadget", "M", "--maxmem", "4")
        assert code == 2

    def test_simulate_reports_exact_reference(self, capsys):
        code, out, _ = run(
            capsys,
            "simulate", "--gadget", "M", "-T", "5", "--trials", "400",
            "--seed", "11",
        )
        assert code == 0
        assert "exact value under the same strategy = 13/2^4" in out

    def test_scan_runs(self, capsys):
        code, out, _ = run(
            capsys, "scan", "-n", "3", "--samples", "10", "-T", "16",
            "--seed", "4", "--json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["report"]["name"] == "period-scan"


class TestDeterminismAndErrors:
    def test_json_outputs_byte_identical(self, capsys):
        fixtures = [
            ("scan", "-n", "4", "--samples", "12", "-T", "24", "--seed", "9", "--json"),
            ("simulate", "--gadget", "M", "-T", "5", "--trials", "250",
             "--seed", "3", "--json"),
            ("verify", "threshold-growth", "--imax", "6", "--json"),
            ("solve", "--gadget", "G:3", "-T", "9", "--json"),
        ]
        for argv in fixtures:
            _, first, _ = run(capsys, *argv)
            _, second, _ = run(capsys, *argv)
            assert first == second

    def test_missing_game_file(self, capsys):
        code, _, err = run(capsys, "solve", "-g", "/nonexistent.json", "-T", "3")
        assert code == 2

    def test_invalid_game_document(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{"start": "a", "states": []}')
        code, _, err = run(capsys, "solve", "-g", str(path), "-T", "3")
        assert code == 2

    def test_guard_exit_code(self, capsys):
        code, _, err = run(
            capsys, "verify", "primorial-period", "--k", "5"
        )
        assert code == 3
        assert "guard" in err

    def test_usage_error_from_argparse(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["solve", "--gadget", "M"])  # missing -T
        assert exc.value.code == 2
