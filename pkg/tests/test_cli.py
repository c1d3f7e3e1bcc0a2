import json
import random
from pathlib import Path

import pytest

from satkit.cli import main
from satkit.dimacs import parse_dimacs, write_dimacs_file
from satkit.generators import generate_dataset, planted_ksat
from satkit.rl.policy import Policy, PpoConfig, save_policy_file

FIXTURE_PATH = Path(__file__).parent / "data" / "translations.tsv"
SMALL = PpoConfig(hidden_sizes=(16, 16))


@pytest.fixture
def uf_file(tmp_path):
    path = tmp_path / "instance.cnf"
    write_dimacs_file(planted_ksat(20, 91, random.Random(0)), path)
    return path


@pytest.fixture
def small_policy_file(tmp_path):
    path = tmp_path / "policy.bin"
    save_policy_file(Policy(20, 91, SMALL, seed=0), path)
    return path


class TestConvert:
    def test_expr_file_to_dimacs(self, tmp_path, capsys):
        src = tmp_path / "exprs.txt"
        src.write_text("# comment\nAnd(Not(P), Or(Q, R))\n", encoding="utf-8")
        assert main(["convert", str(src)]) == 0
        out = capsys.readouterr().out
        formula = parse_dimacs(out)
        assert formula.num_vars == 3
        assert formula.clause_codes() == [(-1,), (2, 3)]

    def test_english_mode_with_stub(self, tmp_path, capsys):
        src = tmp_path / "doc.txt"
        src.write_text("The circus has a Ferris wheel or a rollercoaster.", encoding="utf-8")
        out_path = tmp_path / "out.cnf"
        map_path = tmp_path / "out.map"
        code = main(
            [
                "convert",
                str(src),
                "--mode",
                "english",
                "--translator",
                f"stub:{FIXTURE_PATH}",
                "--out",
                str(out_path),
                "--map",
                str(map_path),
            ]
        )
        assert code == 0
        formula = parse_dimacs(out_path.read_text())
        assert formula.num_vars == 2
        assert formula.clause_codes() == [(1, 2)]
        rows = [line.split("\t") for line in map_path.read_text().splitlines()]
        assert rows[0][0] == "P" and rows[0][1] == "1"
        assert rows[0][2] == "The circus has a ferris wheel"

    def test_empty_input_exits_2(self, tmp_path, capsys):
        src = tmp_path / "empty.txt"
        src.write_text("   ", encoding="utf-8")
        code = main(
            ["convert", str(src), "--mode", "english", "--translator", f"stub:{FIXTURE_PATH}"]
        )
        assert code == 2

    def test_bad_expression_exits_2_with_line(self, tmp_path, capsys):
        src = tmp_path / "exprs.txt"
        src.write_text("P\nOr(P)\n", encoding="utf-8")
        assert main(["convert", str(src)]) == 2
        assert "line 2" in capsys.readouterr().err


class TestSolve:
    def test_sat_exit_10_with_model(self, tmp_path, capsys):
        path = tmp_path / "f.cnf"
        path.write_text("p cnf 3 2\n1 -2 0\n-1 3 0\n", encoding="ascii")
        code = main(["solve", str(path)])
        assert code == 10
        out = capsys.readouterr().out
        assert "s SATISFIABLE" in out
        v_line = next(line for line in out.splitlines() if line.startswith("v "))
        model = [int(tok) for tok in v_line[2:].split() if tok != "0"]
        phase = {abs(c): c > 0 for c in model}
        assert (phase[1] or not phase[2]) and (not phase[1] or phase[3])

    def test_unsat_exit_20(self, tmp_path, capsys):
        path = tmp_path / "f.cnf"
        path.write_text("p cnf 1 2\n1 0\n-1 0\n", encoding="ascii")
        assert main(["solve", str(path)]) == 20
        assert "s UNSATISFIABLE" in capsys.readouterr().out

    def test_unknown_exit_0(self, uf_file, capsys):
        assert main(["solve", str(uf_file), "--max-decisions", "0"]) == 0
        assert "s UNKNOWN" in capsys.readouterr().out

    def test_rl_heuristic_with_policy(self, uf_file, small_policy_file, capsys):
        code = main(
            ["solve", str(uf_file), "--heuristic", "rl", "--policy", str(small_policy_file)]
        )
        assert code == 10

    def test_rl_without_policy_is_usage_error(self, uf_file, capsys):
        assert main(["solve", str(uf_file), "--heuristic", "rl"]) == 1

    def test_wrong_shape_policy_exits_2(self, tmp_path, small_policy_file, capsys):
        path = tmp_path / "small.cnf"
        write_dimacs_file(planted_ksat(10, 40, random.Random(1)), path)
        code = main(["solve", str(path), "--heuristic", "rl", "--policy", str(small_policy_file)])
        assert code == 2

    def test_missing_file_exits_2(self, capsys):
        assert main(["solve", "/nonexistent/file.cnf"]) == 2

    def test_random_heuristic(self, uf_file):
        assert main(["solve", str(uf_file), "--heuristic", "random", "--seed", "4"]) == 10


class TestFeatures:
    def test_prints_48_name_value_lines(self, uf_file, capsys):
        assert main(["features", str(uf_file)]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 48
        values = dict(line.split("=") for line in lines)
        assert values["num_vars"] == "20"
        assert values["num_clauses"] == "91"
        assert float(values["clause_var_ratio"]) == pytest.approx(4.55)

    def test_schema_dump(self, capsys):
        assert main(["features", "--schema"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 48
        assert lines[0] == "num_vars"


class TestTrainAndBench:
    def test_train_then_bench_end_to_end(self, tmp_path, capsys):
        data_dir = tmp_path / "data"
        generate_dataset(data_dir, count=8, num_vars=8, num_clauses=24, seed=5)
        policy_path = tmp_path / "p.bin"
        code = main(
            [
                "train",
                "--dataset",
                str(data_dir),
                "--steps",
                "120",
                "--seed",
                "3",
                "--out",
                str(policy_path),
                "--hidden",
                "16",
                "--window",
                "60",
            ]
        )
        assert code == 0
        assert policy_path.exists()
        log_path = Path(f"{policy_path}.log.csv")
        log_lines = log_path.read_text().splitlines()
        assert log_lines[0] == "window,steps,mean_reward,mean_decisions"
        assert len(log_lines) >= 2

        csv_path = tmp_path / "records.csv"
        code = main(
            [
                "bench",
                "--dataset",
                str(data_dir),
                "--policy",
                str(policy_path),
                "--split-ratio",
                "0.5",
                "--reps",
                "2",
                "--out",
                str(csv_path),
            ]
        )
        assert code == 0
        lines = csv_path.read_text().splitlines()
        assert lines[0].startswith("instance,heuristic,verdict,time_s,decisions,")
        assert len(lines) == 1 + 2 * 4  # half of 8 instances, two heuristics
        summary = json.loads(Path(f"{csv_path}.summary.json").read_text())
        assert "median_time_s.rl" in summary
        assert "median_time_s.vsids" in summary
        assert 0.0 <= summary["fraction_rl_faster"] <= 1.0

    def test_bench_shape_mismatch_exits_2(self, tmp_path, small_policy_file):
        data_dir = tmp_path / "data"
        generate_dataset(data_dir, count=2, num_vars=8, num_clauses=24, seed=6)
        code = main(
            [
                "bench",
                "--dataset",
                str(data_dir),
                "--policy",
                str(small_policy_file),
                "--split-ratio",
                "0",
                "--out",
                str(tmp_path / "r.csv"),
            ]
        )
        assert code == 2


class TestTopLevel:
    def test_version_prints_schema_versions(self, capsys):
        assert main(["--version"]) == 0
        out = capsys.readouterr().out
        assert "satkit" in out
        assert "policy-checkpoint-format" in out
        assert "feature-schema" in out
        assert "bench-csv-schema" in out

    def test_unknown_flag_is_usage_error(self, capsys):
        assert main(["solve", "--frobnicate"]) == 1

    def test_no_command_is_usage_error(self, capsys):
        assert main([]) == 1

    def test_verbose_prints_effective_config(self, uf_file, capsys):
        main(["--verbose", "features", str(uf_file)])
        assert "c config:" in capsys.readouterr().err
