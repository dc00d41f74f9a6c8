"""Readers for the delimited outputs of a co2fronts run directory.

This package deliberately has no in-process coupling to the solver: the CSV
schemas and the manifest are the entire contract.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any


class RunDataError(Exception):
    """Missing, empty or schema-violating input file."""


def _read_rows(path: Path, required: list[str]) -> list[dict[str, str]]:
    if not path.exists():
        raise RunDataError(f"missing input file {path}")
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise RunDataError(f"{path} is empty")
        missing = [c for c in required if c not in reader.fieldnames]
        if missing:
            raise RunDataError(f"{path} lacks required columns {missing}")
        return list(reader)


@dataclass
class RunDir:
    root: Path
    manifest: dict[str, Any]

    @classmethod
    def open(cls, root: str | Path) -> "RunDir":
        root = Path(root)
        manifest_path = root / "manifest.json"
        if not manifest_path.exists():
            raise RunDataError(f"missing manifest.json in {root}")
        try:
            manifest = json.loads(manifest_path.read_text())
        except json.JSONDecodeError as exc:
            raise RunDataError(f"unreadable manifest: {exc}") from exc
        return cls(root=root, manifest=manifest)

    @property
    def run_id(self) -> str:
        return str(self.manifest.get("run_id", "unknown"))

    def model(self) -> tuple[float, float]:
        model = self.manifest.get("config", {}).get("model", {})
        return float(model.get("M", 1.0)), float(model.get("epsilon", 0.0))

    def fronts(self) -> list[dict[str, Any]]:
        rows = _read_rows(self.root / "fronts.csv",
                          ["front_id", "t_start", "t_end", "x_start", "x_end",
                           "u_left", "u_right", "kind", "sigma", "speed"])
        out = []
        for r in rows:
            out.append({
                "front_id": int(r["front_id"]),
                "t_start": float(r["t_start"]),
                "t_end": float(r["t_end"]),
                "x_start": float(r["x_start"]),
                "x_end": float(r["x_end"]),
                "u_left": float(r["u_left"]),
                "u_right": float(r["u_right"]),
                "kind": r["kind"],
                "sigma": float(r["sigma"]) if r["sigma"] else None,
                "speed": float(r["speed"]),
            })
        return out

    def events(self) -> list[dict[str, Any]]:
        rows = _read_rows(self.root / "events.csv",
                          ["t", "x", "type", "in_ids", "out_ids",
                           "tv_before", "tv_after"])
        return [{"t": float(r["t"]), "x": float(r["x"]), "type": r["type"],
                 "tv_before": float(r["tv_before"]),
                 "tv_after": float(r["tv_after"])} for r in rows]

    def snapshots(self) -> dict[float, list[tuple[float, float, float]]]:
        rows = _read_rows(self.root / "snapshots.csv", ["t", "x_lo", "x_hi", "u"])
        if not rows:
            raise RunDataError("snapshots.csv holds no intervals")
        out: dict[float, list[tuple[float, float, float]]] = {}
        for r in rows:
            out.setdefault(float(r["t"]), []).append(
                (float(r["x_lo"]), float(r["x_hi"]), float(r["u"])))
        return out

    def chars(self) -> dict[int, dict[str, Any]]:
        rows = _read_rows(self.root / "chars.csv",
                          ["polyline_id", "family", "t", "x"])
        if not rows:
            raise RunDataError("chars.csv holds no polylines")
        lines: dict[int, dict[str, Any]] = {}
        for r in rows:
            pid = int(r["polyline_id"])
            rec = lines.setdefault(pid, {"family": r["family"], "t": [], "x": []})
            rec["t"].append(float(r["t"]))
            rec["x"].append(float(r["x"]))
        return lines

    def diagnostics(self) -> dict[str, list[float]]:
        rows = _read_rows(self.root / "diag.csv",
                          ["t", "tv", "front_count", "plume_area",
                           "support_width"])
        if not rows:
            raise RunDataError("diag.csv holds no samples")
        cols: dict[str, list[float]] = {k: [] for k in
                                        ("t", "tv", "front_count",
                                         "plume_area", "support_width")}
        for r in rows:
            for k in cols:
                cols[k].append(float(r[k]))
        return cols
