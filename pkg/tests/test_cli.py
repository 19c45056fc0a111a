"""CLI behaviour: exit codes, report shape, determinism and round trips."""

import json
import subprocess
import sys

import pytest

from geomforge.cli import main
from geomforge.geom import Geometry, isomorphic


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    report = json.loads(captured.out) if captured.out.strip() else None
    return code, report


def strip_elapsed(report):
    return {k: v for k, v in report.items() if k != "elapsed_ms"}


class TestExitCodes:
    def test_ok(self, capsys):
        code, report = run_cli(capsys, "natrep", "dim", "--builtin", "petersen")
        assert code == 0 and report["status"] == "ok"
        assert report["results"] == {"dim": 6, "points": 15, "rank": 9}

    def test_bad_input_same_type_incidence(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({
            "rank": 2,
            "elements": [{"id": "a", "type": 1}, {"id": "b", "type": 1}],
            "incidences": [["a", "b"]],
        }))
        code, report = run_cli(capsys, "verify", "--input", str(bad))
        assert code == 4 and report["status"] == "bad-input"

    def test_check_failed_on_non_geometry(self, capsys, tmp_path):
        path = tmp_path / "dangling.json"
        path.write_text(json.dumps({
            "rank": 2,
            "elements": [
                {"id": "a", "type": 1},
                {"id": "b", "type": 2},
                {"id": "c", "type": 1},
            ],
            "incidences": [["a", "b"]],
        }))
        code, report = run_cli(capsys, "verify", "--input", str(path))
        assert code == 2 and report["status"] == "check-failed"

    def test_capacity_on_overflow(self, capsys, tmp_path):
        pres = tmp_path / "free.json"
        pres.write_text(json.dumps({"generators": ["a"], "relators": [], "subgroup": []}))
        code, report = run_cli(capsys, "tc", "--input", str(pres), "--limit", "100")
        assert code == 3 and report["status"] == "capacity"
        assert report["results"] == {"limit": 100, "status": "overflow"}

    def test_unknown_subcommand(self, capsys):
        code = main(["frobnicate"])
        assert code == 4

    def test_missing_file(self, capsys):
        code, report = run_cli(capsys, "verify", "--input", "/nonexistent.json")
        assert code == 4


class TestCommands:
    def test_tilde_build_writes_file(self, capsys, tmp_path):
        out = tmp_path / "t0.json"
        code, report = run_cli(
            capsys, "tilde", "build", "--seed", "42", "--out", str(out)
        )
        assert code == 0
        assert report["results"]["counts"] == [45, 45]
        geometry = Geometry.load(out)
        assert geometry.rank == 2 and geometry.size == 90

    def test_tc_a5(self, capsys, tmp_path):
        pres = tmp_path / "a5.json"
        pres.write_text(json.dumps({
            "generators": ["a", "b"],
            "relators": ["aa", "bbb", "ababababab"],
            "subgroup": [],
        }))
        code, report = run_cli(capsys, "tc", "--input", str(pres))
        assert code == 0 and report["results"]["index"] == 60

    def test_diagram_builtin(self, capsys):
        code, report = run_cli(capsys, "diagram", "--builtin", "gq22")
        assert code == 0
        assert report["results"]["edges"] == {"1,2": "gq-2-2"}

    def test_pi1_and_cover(self, capsys, tmp_path):
        complex_path = tmp_path / "square.json"
        complex_path.write_text(json.dumps({
            "vertices": [0, 1, 2, 3],
            "edges": [[0, 1], [1, 2], [2, 3], [0, 3]],
            "triangles": [],
        }))
        code, report = run_cli(capsys, "pi1", "--input", str(complex_path))
        assert code == 0 and report["results"]["generators"] == ["a"]
        code, report = run_cli(
            capsys, "cover", "--input", str(complex_path), "--subgroup", "aa"
        )
        assert code == 0 and report["results"]["vertices"] == 8

    def test_cover_triangulable(self, capsys, tmp_path):
        complex_path = tmp_path / "c5.json"
        complex_path.write_text(json.dumps({
            "vertices": [0, 1, 2, 3, 4],
            "edges": [[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]],
            "triangles": [],
        }))
        code, report = run_cli(
            capsys, "cover", "--input", str(complex_path), "--triangulable",
            "--homology-prime", "2",
        )
        assert code == 0
        assert report["results"]["triangulable"] == "no"
        assert report["results"]["homology_rank"] == 1

    def test_local_kernels(self, capsys):
        code, report = run_cli(
            capsys, "local", "kernels", "--builtin", "petersen",
            "--vertex", "0", "--smax", "2",
        )
        assert code == 0
        assert report["results"]["orders"] == [12, 2, 1]
        assert report["results"]["condition_star"] is True

    def test_local_star(self, capsys):
        code, report = run_cli(
            capsys, "local", "star", "--builtin", "petersen", "--vertex", "1"
        )
        assert code == 0 and report["results"]["subgraphs"] == 3

    def test_hyp61_petersen(self, capsys):
        code, report = run_cli(capsys, "hyp61", "--builtin", "petersen")
        assert code == 0
        assert report["results"]["verdict"] == "fail"
        assert (
            report["results"]["first_failure"]
            == "absence of regular normal subgroups"
        )

    def test_bench(self, capsys):
        code, report = run_cli(capsys, "bench", "--sizes", "100", "--seed", "9")
        assert code == 0
        table = report["results"]["table"]
        assert len(table) == 1 and table[0]["size"] == 100
        assert table[0]["rank"] >= 90

    def test_bench_empty(self, capsys):
        code, report = run_cli(capsys, "bench", "--sizes", "", "--seed", "9")
        assert code == 0 and report["results"]["table"] == []


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ("natrep", "dim", "--builtin", "petersen"),
            ("build", "--builtin", "gq22"),
            ("build", "--builtin", "tilde", "--seed", "42"),
            ("diagram", "--builtin", "pg", "--n", "3"),
            ("bench", "--sizes", "64,100", "--seed", "5"),
            ("hyp61", "--builtin", "petersen"),
            ("local", "kernels", "--builtin", "petersen", "--vertex", "0"),
        ],
    )
    def test_rerun_is_byte_identical(self, capsys, argv):
        code1, report1 = run_cli(capsys, *argv)
        code2, report2 = run_cli(capsys, *argv)
        assert code1 == code2 == 0
        assert json.dumps(strip_elapsed(report1), sort_keys=True) == json.dumps(
            strip_elapsed(report2), sort_keys=True
        )

    def test_threads_flag_does_not_change_output(self, capsys):
        _, rep1 = run_cli(capsys, "--threads", "1", "natrep", "dim", "--builtin", "gq22")
        _, rep4 = run_cli(capsys, "--threads", "4", "natrep", "dim", "--builtin", "gq22")
        assert strip_elapsed(rep1) == strip_elapsed(rep4)

    def test_entry_point_subprocess(self, tmp_path):
        result = subprocess.run(
            [sys.executable, "-m", "geomforge.cli", "natrep", "dim", "--builtin", "petersen"],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        report = json.loads(result.stdout)
        assert report["results"]["dim"] == 6


class TestRoundTrips:
    @pytest.mark.parametrize(
        "argv",
        [
            ("build", "--builtin", "petersen"),
            ("build", "--builtin", "pg", "--n", "3"),
            ("build", "--builtin", "sp", "--n", "2"),
            ("build", "--builtin", "gq22"),
            ("build", "--builtin", "tilde", "--seed", "42"),
        ],
    )
    def test_export_import_isomorphic(self, capsys, tmp_path, argv):
        out = tmp_path / "g.json"
        code, report = run_cli(capsys, *argv, "--out", str(out))
        assert code == 0
        from geomforge.cli import _builtin_metadata

        args = list(argv)
        name = args[args.index("--builtin") + 1]
        n = int(args[args.index("--n") + 1]) if "--n" in args else None
        seed = int(args[args.index("--seed") + 1]) if "--seed" in args else None
        built = _builtin_metadata(name, n, seed).geometry
        loaded = Geometry.load(out)
        assert isomorphic(built, loaded) is not None

    @pytest.mark.stretch
    def test_m22_round_trip(self, capsys, tmp_path):
        out = tmp_path / "p1.json"
        code, report = run_cli(
            capsys, "build", "--builtin", "m22", "--seed", "11", "--out", str(out)
        )
        assert code == 0
        from geomforge.cli import _builtin_metadata

        built = _builtin_metadata("m22", None, 11).geometry
        loaded = Geometry.load(out)
        # 1716 elements: resolved by the canonical string bijection
        assert isomorphic(built, loaded) is not None
