import hashlib
import json
from pathlib import Path

import pytest

from co2fronts.cli import main
from co2fronts.config import load_scenario, validate_scenario


def write_config(tmp_path: Path, name: str, payload: dict) -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(payload, indent=1))
    return path


RIEMANN_CFG = {
    "model": {"M": 1.0, "epsilon": 0.4},
    "initial": {"kind": "riemann", "x0": 0.0, "left": 0.2, "right": 1.0},
    "run": {"mode": "riemann", "T": 1.0, "snapshot_times": [0.5]},
}

FIG6_CFG = {
    "model": {"M": 1.0, "epsilon": 0.4},
    "initial": {"kind": "lmr", "x1": 0.0, "x2": 1.0,
                "left": 0.2, "middle": 1.0, "right": 0.3},
    "run": {"mode": "track", "h": 0.01, "T": 60.0,
            "snapshot_times": [1.0, 20.0], "window": [-2.0, 32.0]},
}


def read_csv(path: Path) -> list[dict]:
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    return [dict(zip(header, row.split(","))) for row in lines[1:]]


class TestRiemannMode:
    def test_single_shock_row(self, tmp_path):
        cfg = write_config(tmp_path, "r.json", RIEMANN_CFG)
        assert main(["riemann", "--config", str(cfg), "--out", str(tmp_path / "out")]) == 0
        rows = read_csv(tmp_path / "out" / "fronts.csv")
        assert len(rows) == 1
        row = rows[0]
        assert row["kind"] == "shock"
        assert float(row["sigma"]) == pytest.approx(0.6)
        assert float(row["speed"]) == pytest.approx(-0.12)

    def test_all_files_written(self, tmp_path):
        cfg = write_config(tmp_path, "r.json", RIEMANN_CFG)
        main(["riemann", "--config", str(cfg), "--out", str(tmp_path / "out")])
        for name in ("fronts.csv", "events.csv", "snapshots.csv", "diag.csv",
                     "manifest.json"):
            assert (tmp_path / "out" / name).exists()


class TestTrackMode:
    def test_fig6_terminal_plateaus(self, tmp_path):
        cfg = write_config(tmp_path, "f.json", FIG6_CFG)
        assert main(["track", "--config", str(cfg), "--out", str(tmp_path / "out")]) == 0
        rows = read_csv(tmp_path / "out" / "events.csv")
        assert rows
        snaps = read_csv(tmp_path / "out" / "snapshots.csv")
        final = [r for r in snaps if float(r["t"]) == 60.0]
        values = {float(r["u"]) for r in final}
        assert values == {0.2, 0.3}

    def test_byte_identical_reruns(self, tmp_path):
        cfg = write_config(tmp_path, "f.json", FIG6_CFG)
        main(["track", "--config", str(cfg), "--out", str(tmp_path / "a")])
        main(["track", "--config", str(cfg), "--out", str(tmp_path / "b")])
        for name in ("fronts.csv", "events.csv", "snapshots.csv", "diag.csv"):
            ha = hashlib.sha256((tmp_path / "a" / name).read_bytes()).hexdigest()
            hb = hashlib.sha256((tmp_path / "b" / name).read_bytes()).hexdigest()
            assert ha == hb

    def test_float_roundtrip_through_csv(self, tmp_path):
        cfg = write_config(tmp_path, "f.json", FIG6_CFG)
        main(["track", "--config", str(cfg), "--out", str(tmp_path / "out")])
        rows = read_csv(tmp_path / "out" / "fronts.csv")
        shock = [r for r in rows if r["kind"] == "shock"][0]
        assert float(shock["speed"]) == -0.12000000000000002

    def test_refuses_to_overwrite(self, tmp_path):
        cfg = write_config(tmp_path, "f.json", FIG6_CFG)
        out = tmp_path / "out"
        assert main(["track", "--config", str(cfg), "--out", str(out)]) == 0
        assert main(["track", "--config", str(cfg), "--out", str(out)]) == 3
        assert main(["track", "--config", str(cfg), "--out", str(out),
                     "--force"]) == 0


class TestValidation:
    def test_invalid_config_exit_code_and_no_output(self, tmp_path):
        bad = dict(RIEMANN_CFG)
        bad["model"] = {"M": 1.0, "epsilon": 1.5}
        cfg = write_config(tmp_path, "bad.json", bad)
        out = tmp_path / "out"
        assert main(["riemann", "--config", str(cfg), "--out", str(out)]) == 3
        assert not out.exists()

    def test_parse_error_exit_code(self, tmp_path):
        cfg = tmp_path / "broken.json"
        cfg.write_text("{ not json")
        assert main(["track", "--config", str(cfg), "--out",
                     str(tmp_path / "o")]) == 2

    def test_mode_mismatch(self, tmp_path):
        cfg = write_config(tmp_path, "f.json", FIG6_CFG)
        assert main(["riemann", "--config", str(cfg), "--out",
                     str(tmp_path / "o")]) == 3

    def test_validate_subcommand_lists_violations(self, tmp_path, capsys):
        bad = {"model": {"M": 0.5}, "initial": {}, "run": {}}
        cfg = write_config(tmp_path, "bad.json", bad)
        assert main(["validate", "--config", str(cfg)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert any("M" in v for v in report["violations"])
        assert any("mode" in v for v in report["violations"])

    def test_validate_clean_config_is_empty(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "ok.json", RIEMANN_CFG)
        assert main(["validate", "--config", str(cfg)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["violations"] == []

    def test_manifest_roundtrip_validates(self, tmp_path):
        cfg = write_config(tmp_path, "f.json", FIG6_CFG)
        main(["track", "--config", str(cfg), "--out", str(tmp_path / "out")])
        manifest = tmp_path / "out" / "manifest.json"
        scn = load_scenario(manifest)
        assert validate_scenario(scn) == []


class TestOtherModes:
    def test_interact_mode_classification(self, tmp_path):
        cfg = write_config(tmp_path, "i.json", {
            "model": {"M": 1.0, "epsilon": 0.7},
            "initial": {"kind": "lmr", "x1": 0.0, "x2": 1.0,
                        "left": 0.7, "middle": 0.0, "right": 0.9},
            "run": {"mode": "interact", "h": 0.02, "T": 5.0},
        })
        assert main(["interact", "--config", str(cfg), "--out",
                     str(tmp_path / "out")]) == 0
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        cls = manifest["notes"]["classification"]
        assert cls["exact"] == "C_interact"
        assert cls["persistent"] is True
        assert cls["asymptotic"] == pytest.approx(0.570588, abs=1e-5)

    def test_characteristics_mode_writes_chars(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {
            "model": {"M": 1.0, "epsilon": 0.4},
            "initial": {"kind": "riemann", "x0": 0.5, "left": 0.2, "right": 1.0},
            "run": {"mode": "characteristics", "h": 0.1, "T": 2.0,
                    "chars": {"n_seeds": 6, "x_range": [-1.0, 0.4],
                              "per_front": 1}},
        })
        assert main(["characteristics", "--config", str(cfg), "--out",
                     str(tmp_path / "out")]) == 0
        rows = read_csv(tmp_path / "out" / "chars.csv")
        assert rows
        assert {r["family"] for r in rows} == {"fast", "slow"}

    def test_oracle_compare_mode(self, tmp_path):
        cfg = write_config(tmp_path, "o.json", {
            "model": {"M": 1.0, "epsilon": 0.4},
            "initial": {"kind": "box", "x_lo": 0.0, "x_hi": 1.0, "height": 0.6},
            "run": {"mode": "oracle-compare", "h": 0.02, "T": 1.0,
                    "snapshot_times": [1.0],
                    "grid": {"dxi": 0.005, "cfl": 0.5, "bounds": [-1.0, 2.0]}},
        })
        assert main(["oracle-compare", "--config", str(cfg), "--out",
                     str(tmp_path / "out")]) == 0
        assert (tmp_path / "out" / "fv_snapshots.csv").exists()
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        l1 = manifest["notes"]["comparison"]["l1"]
        assert all(float(v) < 0.05 for v in l1.values())

    def test_batch(self, tmp_path):
        confdir = tmp_path / "confs"
        confdir.mkdir()
        write_config(confdir, "one.json", RIEMANN_CFG)
        write_config(confdir, "two.json", FIG6_CFG)
        assert main(["batch", "--batch", str(confdir), "--out",
                     str(tmp_path / "runs")]) == 0
        assert (tmp_path / "runs" / "one" / "manifest.json").exists()
        assert (tmp_path / "runs" / "two" / "manifest.json").exists()
