"""Command-line surface: artifacts, exit codes, determinism."""
from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from errdiff.cli import main

SCENES = Path(__file__).resolve().parent.parent / "scenes"


def read_json(path: Path) -> dict:
    return json.loads(path.read_text())


def run_cli(*argv) -> int:
    return main([str(a) for a in argv])


@pytest.fixture()
def out(tmp_path):
    return tmp_path / "artifacts"


class TestMinGset:
    def test_four_iterations_on_the_eight_point_star(self, out, capsys):
        code = run_cli("min-gset", "--scene", SCENES / "sset1.json", "--out", out)
        assert code == 0
        payload = read_json(out / "sset1.gset.json")
        assert payload["iterations"] == 4
        assert payload["converged"] is True
        assert payload["rounding_free"] is True
        assert "after 4 iterations" in capsys.readouterr().out

    def test_one_iteration_on_the_three_by_three_grid(self, out):
        assert run_cli("min-gset", "--scene", SCENES / "sset4.json",
                       "--out", out) == 0
        payload = read_json(out / "sset4.gset.json")
        assert payload["iterations"] == 1
        corners = {tuple(v) for v in payload["vertices"]}
        assert corners == {("-1", "-1"), ("1", "-1"), ("1", "1"), ("-1", "1")}

    def test_log_lines_are_json_records(self, out):
        run_cli("min-gset", "--scene", SCENES / "sset1.json", "--out", out)
        lines = (out / "sset1.gset.log.jsonl").read_text().splitlines()
        records = [json.loads(line) for line in lines]
        assert records[-1]["converged"] is True
        assert all("vertices" in r for r in records[:-1])

    def test_exit_two_when_iteration_is_cut_short(self, out):
        code = run_cli("min-gset", "--scene", SCENES / "sset2.json",
                       "--out", out, "--max-iter", 2)
        assert code == 2
        assert read_json(out / "sset2.gset.json")["converged"] is False

    def test_convex_variant(self, out):
        code = run_cli("min-gset", "--convex", "--scene", SCENES / "sset1.json",
                       "--out", out)
        assert code == 0
        payload = read_json(out / "sset1.gset.json")
        assert payload["operator"] == "G"
        assert payload["iterations"] == 4


class TestMinFset:
    def test_unit_square_region_is_the_half_margin_box(self, out):
        assert run_cli("min-fset", "--scene", SCENES / "unit_square.json",
                       "--out", out) == 0
        payload = read_json(out / "unit-square.fset.json")
        assert payload["operator"] == "p"
        assert {tuple(v) for v in payload["vertices"]} == {
            ("-1/2", "-1/2"), ("3/2", "-1/2"), ("3/2", "3/2"), ("-1/2", "3/2")}


class TestSimulate:
    def test_trace_artifact_shape(self, out):
        assert run_cli("simulate", "--scene", SCENES / "sset1.json",
                       "--out", out, "--steps", 20) == 0
        lines = (out / "random-walk.trace.jsonl").read_text().splitlines()
        assert len(lines) == 21
        first, last = json.loads(lines[0]), json.loads(lines[-1])
        assert first["step"] == 0 and first["e"] == ["0", "0"]
        assert last["steps"] == 20 and last["mode"] == "undelayed"

    def test_same_seed_same_bytes(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for d in (a, b):
            run_cli("simulate", "--scene", SCENES / "sset1.json",
                    "--out", d, "--steps", 50)
        assert (a / "random-walk.trace.jsonl").read_bytes() == \
            (b / "random-walk.trace.jsonl").read_bytes()

    def test_seed_override_changes_the_walk(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run_cli("simulate", "--scene", SCENES / "sset1.json", "--out", a,
                "--steps", 50)
        run_cli("simulate", "--scene", SCENES / "sset1.json", "--out", b,
                "--steps", 50, "--seed", 99)
        assert (a / "random-walk.trace.jsonl").read_bytes() != \
            (b / "random-walk.trace.jsonl").read_bytes()

    def test_delayed_triangle_scene(self, out):
        assert run_cli("simulate", "--scene", SCENES / "triangle.json",
                       "--out", out, "--steps", 40) == 0
        lines = (out / "delayed-random-heights.trace.jsonl").read_text().splitlines()
        assert json.loads(lines[-1])["mode"] == "delayed"


class TestVerify:
    def test_good_artifacts_pass(self, out, capsys):
        run_cli("min-gset", "--scene", SCENES / "sset1.json", "--out", out)
        code = run_cli("verify", "--scene", SCENES / "sset1.json", "--out", out)
        assert code == 0
        checks = read_json(out / "sset1.verify.json")["checks"]
        assert [c["check"] for c in checks] == [
            "is_invariant_g", "is_star_convex_origin",
            "covers_translated_inner_cells"]
        assert all(c["passed"] for c in checks)
        assert "FAIL" not in capsys.readouterr().out

    def test_fset_checks(self, out):
        run_cli("min-fset", "--scene", SCENES / "unit_square.json", "--out", out)
        assert run_cli("verify", "--scene", SCENES / "unit_square.json",
                       "--out", out) == 0
        checks = read_json(out / "unit-square.verify.json")["checks"]
        assert [c["check"] for c in checks] == [
            "is_invariant_p", "contains_union_of_hulls"]

    def test_exit_four_on_a_non_invariant_artifact(self, out):
        run_cli("min-gset", "--scene", SCENES / "sset2.json", "--out", out,
                "--max-iter", 2)
        code = run_cli("verify", "--scene", SCENES / "sset2.json", "--out", out)
        assert code == 4
        checks = read_json(out / "sset2.verify.json")["checks"]
        bad = [c for c in checks if not c["passed"]]
        assert bad and all(c["witnesses"] for c in bad)

    def test_exit_three_when_nothing_to_verify(self, out):
        out.mkdir(parents=True)
        assert run_cli("verify", "--scene", SCENES / "sset1.json",
                       "--out", out) == 3

    def test_triangle_family_scene(self, out):
        assert run_cli("verify", "--scene", SCENES / "triangle.json",
                       "--out", out) == 0
        checks = read_json(out / "pv.verify.json")["checks"]
        assert checks[0]["check"] == "triangle_family_check"
        assert checks[0]["passed"] is True


class TestOtherCommands:
    def test_report_assumptions(self, out):
        assert run_cli("report-assumptions", "--scene", SCENES / "ssprime.json",
                       "--out", out) == 0
        payload = read_json(out / "assumptions.json")
        assert set(payload) == {"ssprime"}
        assert payload["ssprime"]["max_hull_diameter_sq"] == "8"

    def test_render_writes_svg(self, out):
        run_cli("min-gset", "--scene", SCENES / "sset1.json", "--out", out)
        run_cli("simulate", "--scene", SCENES / "sset1.json", "--out", out,
                "--steps", 30)
        assert run_cli("render", "--scene", SCENES / "sset1.json",
                       "--out", out) == 0
        svg = (out / "sset1.svg").read_text()
        assert svg.startswith("<svg ")
        assert "<polyline" in svg and "<circle" in svg

    def test_render_without_artifacts(self, out):
        assert run_cli("render", "--scene", SCENES / "unit_square.json",
                       "--out", out) == 0
        assert (out / "unit_square.svg").exists()


class TestFailureModes:
    def test_missing_scene_file(self, out):
        assert run_cli("min-gset", "--scene", "/no/such/scene.json",
                       "--out", out) == 3

    def test_malformed_scene(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{broken")
        assert run_cli("min-gset", "--scene", bad, "--out", tmp_path) == 3

    def test_degenerate_scene(self, tmp_path, capsys):
        bad = tmp_path / "degenerate.json"
        bad.write_text(json.dumps(
            {"collections": {"c": [{"points": [["0", "0"], ["1", "1"]]}]}}))
        assert run_cli("min-gset", "--scene", bad, "--out", tmp_path) == 3
        assert "DegenerateHull" in capsys.readouterr().err

    def test_bad_epsilon_flag(self, out):
        assert run_cli("min-gset", "--scene", SCENES / "sset1.json",
                       "--out", out, "--epsilon", "zero") == 3

    def test_module_entry_point(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "errdiff.cli", "min-gset",
             "--scene", str(SCENES / "sset4.json"), "--out", str(tmp_path)],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert "after 1 iteration," in proc.stdout
