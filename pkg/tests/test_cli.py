import json
import math
import subprocess
import sys
from fractions import Fraction

import pytest

from frostree import SimulationReport, TreeArena
from frostree.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExact:
    def test_both_constructions_agree(self, capsys):
        code, out, _ = run_cli(
            capsys, "exact", "--seq", "(+-)^3", "--construction", "both"
        )
        assert code == 0
        obj = json.loads(out)
        assert obj["laws_equal"] is True
        masses = dict(
            zip(
                obj["distribution"]["support"],
                zip(obj["distribution"]["mass_num"], obj["distribution"]["mass_den"]),
            )
        )
        assert masses == {1: (1, 4), 2: (1, 2), 3: (1, 4)}

    def test_csv_mentions_equality(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "exact",
            "--seq",
            "+^2",
            "--construction",
            "both",
            "--format",
            "csv",
        )
        assert code == 0
        assert "# laws equal: true" in out
        assert "height,probability" in out

    def test_reverse_only(self, capsys):
        code, out, _ = run_cli(
            capsys, "exact", "--seq", "+-+", "--construction", "reverse"
        )
        obj = json.loads(out)
        assert obj["construction"] == "reverse"
        assert obj["distribution"]["support"] == [1, 2]


class TestSimulate:
    def test_byte_identical_across_threads(self, capsys):
        args = ["simulate", "--seq", "+^100", "--replicas", "4000", "--seed", "7"]
        code1, out1, _ = run_cli(capsys, *args, "--threads", "1")
        code2, out2, _ = run_cli(capsys, *args, "--threads", "8")
        assert code1 == code2 == 0
        assert out1 == out2

    def test_report_round_trips(self, capsys):
        code, out, _ = run_cli(
            capsys, "simulate", "--seq", "(+-)^10", "--replicas", "500", "--seed", "2"
        )
        assert code == 0
        report = SimulationReport.from_json(out)
        assert report.replicas == 500
        assert report.to_json() == out

    def test_dump_tree(self, capsys):
        code, out, _ = run_cli(
            capsys, "simulate", "--seq", "+^5-^2", "--seed", "4", "--dump-tree"
        )
        assert code == 0
        arena = TreeArena.from_dump(out)
        assert len(arena) == 6
        assert arena.active_count() == 4

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "report.json"
        code, out, _ = run_cli(
            capsys,
            "simulate",
            "--seq",
            "+",
            "--replicas",
            "10",
            "--seed",
            "0",
            "--out",
            str(path),
        )
        assert code == 0 and out == ""
        assert json.loads(path.read_text())["histogram"] == {"1": 10}

    def test_env_seed_fallback(self, capsys, monkeypatch):
        monkeypatch.setenv("FROSTREE_SEED", "99")
        _, out1, _ = run_cli(capsys, "simulate", "--seq", "+^30", "--replicas", "50")
        _, out2, _ = run_cli(
            capsys, "simulate", "--seq", "+^30", "--replicas", "50", "--seed", "99"
        )
        assert out1 == out2


class TestCouple:
    def test_reduce_enumerate(self, capsys):
        code, out, _ = run_cli(
            capsys, "couple", "--which", "reduce", "--seq", "+-+", "--mode", "enumerate"
        )
        assert code == 0
        obj = json.loads(out)
        assert obj["pathwise_violation_mass"] == {"num": 0, "den": 1}
        assert obj["height_xhat_law"]["support"] == [1]

    def test_prop_iii_enumerate_identity(self, capsys):
        code, out, _ = run_cli(
            capsys, "couple", "--which", "prop_iii", "--n", "3", "--mode", "enumerate"
        )
        obj = json.loads(out)
        mean_xhat = Fraction(
            obj["mean_height_xhat"]["num"], obj["mean_height_xhat"]["den"]
        )
        mean_rrt = Fraction(
            obj["mean_height_rrt"]["num"], obj["mean_height_rrt"]["den"]
        )
        assert mean_xhat == mean_rrt + Fraction(1, 2)

    def test_mc_csv_batch(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "couple",
            "--which",
            "prop_ii",
            "--m",
            "2",
            "--n",
            "2",
            "--replicas",
            "5",
            "--seed",
            "1",
            "--format",
            "csv",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "replica,height_x,height_xhat,case"
        assert len(lines) == 6

    def test_missing_seq_is_domain_error(self, capsys):
        code, _, err = run_cli(capsys, "couple", "--which", "reduce")
        assert code == 1
        assert "seq" in err


class TestCompare:
    def test_enumerate_incomparable(self, capsys):
        code, out, _ = run_cli(
            capsys, "compare", "--seq", "(+-)^3", "--seq2", "+^3"
        )
        obj = json.loads(out)
        assert obj["verdict"] == "incomparable"
        assert obj["seq_dominates_seq2"] is False
        assert obj["seq2_dominates_seq"] is False

    def test_enumerate_equal(self, capsys):
        code, out, _ = run_cli(capsys, "compare", "--seq", "+-+", "--seq2", "+^2-")
        obj = json.loads(out)
        assert obj["verdict"] == "equal"

    def test_mc_verdict(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "compare",
            "--seq",
            "+^3",
            "--seq2",
            "+",
            "--mode",
            "mc",
            "--replicas",
            "20000",
            "--seed",
            "3",
        )
        assert json.loads(out)["verdict"] == "dominates"

    def test_family_floor_search(self, capsys, tmp_path):
        family = tmp_path / "family.txt"
        family.write_text("(+-)^3\n+^3\n", encoding="utf-8")
        code, out, _ = run_cli(
            capsys, "compare", "--n", "3", "--family", str(family)
        )
        obj = json.loads(out)
        assert obj == {"family_size": 2, "min_floor": 2, "n": 3}


class TestReduceAndBound:
    def test_reduce(self, capsys):
        code, out, _ = run_cli(capsys, "reduce", "--seq", "+^2-^2")
        obj = json.loads(out)
        assert obj == {"original": "+^2-^2", "reduced": "+-", "removed_at": 2}

    def test_reduce_to_prefix(self, capsys):
        code, out, _ = run_cli(
            capsys, "reduce", "--seq", "+-+^3-^2", "--to-prefix", "3"
        )
        assert json.loads(out)["result"] == "+^3-^2"

    def test_reduce_unreachable_is_domain_error(self, capsys):
        code, _, err = run_cli(
            capsys, "reduce", "--seq", "(+-)^2", "--to-prefix", "2"
        )
        assert code == 1 and "cannot reach" in err

    def test_bound(self, capsys):
        code, out, _ = run_cli(capsys, "bound", "--mean-sum", "10", "--t", "10")
        obj = json.loads(out)
        assert math.isclose(obj["bound"], math.exp(-10 * (2 * math.log(2) - 1)))

    def test_bound_domain_error(self, capsys):
        code, _, err = run_cli(capsys, "bound", "--mean-sum", "-1", "--t", "1")
        assert code == 1

    def test_scalar_csv_format(self, capsys):
        code, out, _ = run_cli(
            capsys, "bound", "--mean-sum", "4", "--t", "2", "--format", "csv"
        )
        assert code == 0
        assert out.splitlines()[0] == "key,value"
        assert any(line.startswith("bound,") for line in out.splitlines())

    def test_couple_enumerate_csv(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "couple",
            "--which",
            "prop_iii",
            "--n",
            "2",
            "--mode",
            "enumerate",
            "--format",
            "csv",
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "law,height,mass_num,mass_den"
        assert "height_x,1,1,18" in lines  # (1/3) * 1/3!
        assert "height_rrt,1,1,2" in lines


class TestTheorem:
    def test_alternating_fraction_is_one(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "theorem",
            "--seq",
            "(+-)^10000",
            "--n",
            "10000",
            "--replicas",
            "60",
            "--seed",
            "1",
            "--threads",
            "4",
        )
        assert code == 0
        obj = json.loads(out)
        assert obj["fraction"] == 1.0
        assert abs(obj["threshold"] - 13.93) < 0.01


class TestErrors:
    def test_usage_error_exit_code(self):
        with pytest.raises(SystemExit) as info:
            main(["simulate"])  # missing --seq
        assert info.value.code == 2

    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit) as info:
            main(["frobnicate"])
        assert info.value.code == 2

    def test_domain_error_exit_code(self, capsys):
        # leading-dash sequence texts need the --seq=TEXT spelling
        code, _, err = run_cli(capsys, "exact", "--seq=-^2")
        assert code == 1
        assert "frostree:" in err

    def test_syntax_error_offset(self, capsys):
        code, _, err = run_cli(capsys, "exact", "--seq", "+^x")
        assert code == 1
        assert "offset" in err


def test_console_script_subprocess():
    result = subprocess.run(
        [sys.executable, "-m", "frostree.cli", "bound", "--mean-sum", "4", "--t", "2"],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert json.loads(result.stdout)["bound"] > 0
