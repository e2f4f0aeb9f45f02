import json
import subprocess
import sys

import pytest

from thermstack.cooling import parse_pattern
from thermstack.floorplan import parse_floorplan
from thermstack.gateway.cli import main
from thermstack.scenarios import baseline_document, write_baseline_files


def run_cli(args, **kw):
    return subprocess.run(
        [sys.executable, "-m", "thermstack.gateway.cli", *args],
        capture_output=True,
        text=True,
        **kw,
    )


@pytest.fixture(scope="module")
def demo_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("demo")
    write_baseline_files(d)
    return d


class TestRun:
    def test_baseline_emits_three_heatmaps_and_summary(self, demo_dir, tmp_path):
        out = tmp_path / "out"
        doc = demo_dir / "design.json"
        content = json.loads(doc.read_text())
        content["grid"] = {"rows": 16, "cols": 16}
        small = tmp_path / "design16.json"
        small.write_text(json.dumps(content))
        rc = main(["run", str(small), "-o", str(out)])
        assert rc == 0
        heatmaps = sorted(p.name for p in out.glob("heatmap_layer*.txt"))
        assert heatmaps == ["heatmap_layer0.txt", "heatmap_layer1.txt", "heatmap_layer2.txt"]
        summary = (out / "summary.txt").read_text()
        assert summary.splitlines()[-1].startswith("stack\t-\t-\t")

    def test_loose_files_mode(self, demo_dir, tmp_path):
        out = tmp_path / "out"
        rc = main(
            [
                "run",
                "--stack", str(demo_dir / "stack.txt"),
                "--power", str(demo_dir / "powermodels.json"),
                "--activity", str(demo_dir / "activity.act"),
                "--grid", "16x16",
                "-o", str(out),
            ]
        )
        assert rc == 0
        assert (out / "summary.json").exists()

    def test_malformed_floorplan_cites_line(self, demo_dir, tmp_path, capsys):
        content = baseline_document(16, 16)
        lines = content["floorplans"]["cores.flp"].splitlines()
        lines[3] = "broken line"  # file line 4, one-based
        content["floorplans"]["cores.flp"] = "\n".join(lines)
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(content))
        rc = main(["run", str(bad), "-o", str(tmp_path / "out")])
        assert rc == 2
        err = capsys.readouterr().err
        assert "line 4" in err and "cores.flp" in err

    def test_exit_code_via_subprocess(self, tmp_path):
        r = run_cli(["run", str(tmp_path / "missing.json"), "-o", str(tmp_path / "o")])
        assert r.returncode == 2


class TestSweep:
    def test_three_stackings_table(self, tmp_path):
        content = baseline_document(16, 16)
        content["sweep"] = (
            "[stackings]\npolicy named_list\n"
            "order baseline 0 1 2\norder case1a 1 0 2\norder case1b 1 2 0\n"
            "[points]\n"
            "point baseline stacking baseline cooling none\n"
            "point case1a stacking case1a cooling none\n"
            "point case1b stacking case1b cooling none\n"
            "[workloads]\nuse default\n[baseline]\npoint baseline\n"
        )
        doc = tmp_path / "d.json"
        doc.write_text(json.dumps(content))
        out = tmp_path / "out"
        rc = main(["sweep", str(doc), "-o", str(out)])
        assert rc == 0
        table = (out / "table.txt").read_text()
        rows = [l for l in table.splitlines() if l and not l.startswith(("#", "point"))]
        assert len(rows) == 3
        assert "# ranking" in table
        ranking = json.loads((out / "ranking.json").read_text())
        assert ranking["ranking"][0] == "case1b"


class TestGenerators:
    def test_floorplan_gen_parses_back(self, tmp_path):
        out = tmp_path / "f.flp"
        rc = main(
            ["floorplan", "gen", "--outline", "0.008", "0.008", "--template",
             "bank_grid", "--count", "16", "-o", str(out)]
        )
        assert rc == 0
        fp = parse_floorplan(out.read_text())
        assert len(fp.blocks) == 16

    def test_floorplan_gen_areas_mode(self, tmp_path):
        out = tmp_path / "f.flp"
        rc = main(
            ["floorplan", "gen", "--outline", "0.01", "0.01",
             "--areas", "big=6e-5", "small=4e-5:2.0", "-o", str(out)]
        )
        assert rc == 0
        fp = parse_floorplan(out.read_text())
        assert {b.name for b in fp.blocks} == {"big", "small"}

    def test_cooling_gen_parses_back(self, tmp_path):
        out = tmp_path / "p.pat"
        rc = main(
            ["cooling", "gen", "--grid", "16x16", "--outline", "0.008", "0.008",
             "--style", "bent90", "-o", str(out)]
        )
        assert rc == 0
        pattern = parse_pattern(out.read_text())
        assert pattern.fluid_cell_count() > 0

    def test_geometry_error_reported(self, tmp_path):
        rc = main(
            ["cooling", "gen", "--grid", "16x16", "--outline", "0.008", "0.008",
             "--style", "vertical", "--width-cells", "3", "--pitch-cells", "2",
             "-o", str(tmp_path / "p.pat")]
        )
        assert rc == 2


class TestConfigEnv:
    def test_config_path_env_applies_defaults(self, tmp_path, monkeypatch):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"grid": {"rows": 16, "cols": 16}}))
        monkeypatch.setenv("THERMSTACK_CONFIG", str(cfg))
        content = baseline_document()
        del content["grid"]
        doc = tmp_path / "d.json"
        doc.write_text(json.dumps(content))
        out = tmp_path / "out"
        rc = main(["run", str(doc), "-o", str(out)])
        assert rc == 0
        head = (out / "heatmap_layer0.txt").read_text().splitlines()[0]
        assert "rows 16 cols 16" in head
