"""Scenario orchestration: run one mode end to end and serialize results.

All delimited output is written with 17 significant digits so that floats
survive a parse round-trip exactly; repeated runs of the same scenario
produce byte-identical CSV files (the manifest additionally records wall
time, which is the one volatile field).
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from . import __version__
from .characteristics import CharGrid, char_field
from .config import ConfigError, Scenario, load_scenario, validate_scenario
from .flux import FluxParams, sup_slope
from .interactions import classify_pair
from .oracle import compare_l1, fv_solve
from .riemann import FrontKind
from .tracker import (PiecewiseConstantState, Trace, diagnostics, evolve,
                      initialize_fronts, lipschitz_bound, track)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_RUNTIME = 4


class ValidationFailure(Exception):
    def __init__(self, violations: list[str]) -> None:
        super().__init__("; ".join(violations))
        self.violations = violations


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(c) if isinstance(c, float) else str(c) for c in row))
    path.write_text("\n".join(lines) + "\n")


def run_id_of(config: dict[str, Any]) -> str:
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:12]


def _window(scn: Scenario, trace: Trace) -> tuple[float, float]:
    w = scn.run.get("window")
    if w is not None:
        return float(w[0]), float(w[1])
    xs = [s.x_start for s in trace.segments] + [s.x_end for s in trace.segments]
    if not xs:
        xs = [0.0]
    pad = 0.5
    return min(xs) - pad, max(xs) + pad


def _snapshot_rows(state: PiecewiseConstantState, t: float,
                   window: tuple[float, float]) -> list[tuple]:
    lo, hi = window
    cuts = [lo] + [b for b in state.breakpoints if lo < b < hi] + [hi]
    return [(t, a, b, state.value_at(0.5 * (a + b)))
            for a, b in zip(cuts, cuts[1:])]


def _front_rows(trace: Trace) -> list[tuple]:
    rows = []
    for s in trace.segments:
        sigma = s.regime.sigma(trace.params.epsilon)
        rows.append((s.front_id, s.t_start, s.t_end, s.x_start, s.x_end,
                     s.u_left, s.u_right, s.kind.value,
                     "" if sigma is None else fmt(sigma), s.speed))
    return rows


def _event_rows(trace: Trace) -> list[tuple]:
    return [(e.t, e.x, e.kind,
             ";".join(str(i) for i in e.in_ids),
             ";".join(str(i) for i in e.out_ids),
             e.tv_before, e.tv_after) for e in trace.events]


def _write_trace_outputs(out: Path, scn: Scenario, trace: Trace) -> list[str]:
    window = _window(scn, trace)
    snap_times = sorted({0.0, trace.horizon,
                         *(float(t) for t in scn.run.get("snapshot_times", []))})
    written = []
    _write_csv(out / "fronts.csv",
               ["front_id", "t_start", "t_end", "x_start", "x_end",
                "u_left", "u_right", "kind", "sigma", "speed"],
               _front_rows(trace))
    written.append("fronts.csv")
    _write_csv(out / "events.csv",
               ["t", "x", "type", "in_ids", "out_ids", "tv_before", "tv_after"],
               _event_rows(trace))
    written.append("events.csv")
    rows = []
    for t in snap_times:
        rows.extend(_snapshot_rows(trace.state_at(t), t, window))
    _write_csv(out / "snapshots.csv", ["t", "x_lo", "x_hi", "u"], rows)
    written.append("snapshots.csv")
    series = diagnostics(trace, extra_times=snap_times)
    _write_csv(out / "diag.csv",
               ["t", "tv", "front_count", "plume_area", "support_width"],
               list(zip(series.times, series.tv, series.front_count,
                        series.plume_area, series.support_width)))
    written.append("diag.csv")
    return written


def _run_trace_mode(scn: Scenario, out: Path) -> tuple[list[str], dict[str, Any]]:
    params = scn.params()
    profile = scn.profile()
    horizon = scn.horizon()
    h = float(scn.run.get("h", 0.1))
    delta = scn.run.get("delta")
    trace = track(params, profile, horizon, h,
                  delta=float(delta) if delta is not None else None)
    notes: dict[str, Any] = {
        "tv_initial": trace.initial.tv(),
        "sup_slope": sup_slope(params),
        "l1_lipschitz_constant": lipschitz_bound(trace),
        "events": len(trace.events),
    }
    written = _write_trace_outputs(out, scn, trace)

    if scn.mode == "interact":
        init = scn.initial
        u_l, u_m, u_r = (float(init["left"]), float(init["middle"]),
                         float(init["right"]))
        exact = classify_pair(params, u_l, u_m, u_r, exact=True)
        surrogate = classify_pair(params, u_l, u_m, u_r, h=h, exact=False)
        notes["classification"] = {
            "exact": exact.case.value,
            "expansion": surrogate.case.value,
            "threshold": exact.threshold,
            "asymptotic": exact.asymptotic,
            "persistent": exact.persistent,
        }
    if scn.mode == "characteristics":
        chars_cfg = scn.run.get("chars", {})
        grid = CharGrid(
            n_seeds=int(chars_cfg.get("n_seeds", 9)),
            x_range=tuple(chars_cfg["x_range"]) if "x_range" in chars_cfg else None,
            t_end=float(chars_cfg["t_end"]) if "t_end" in chars_cfg else None,
            per_front=int(chars_cfg.get("per_front", 1)),
        )
        fieldv = char_field(params, trace, grid)
        rows = [(p.polyline_id, p.family, t, x)
                for p in fieldv.polylines for (t, x) in p.vertices]
        _write_csv(out / "chars.csv", ["polyline_id", "family", "t", "x"], rows)
        written.append("chars.csv")
    if scn.mode == "oracle-compare":
        grid_cfg = scn.run["grid"]
        trace_window = _window(scn, trace)
        bounds = tuple(map(float, grid_cfg.get("bounds", trace_window)))
        snap_times = sorted({horizon,
                             *(float(t) for t in scn.run.get("snapshot_times", []))})
        pe = grid_cfg.get("pe")
        sol = fv_solve(params, scn.profile(), bounds, float(grid_cfg["dxi"]),
                       float(grid_cfg.get("cfl", 0.5)), horizon,
                       snapshot_times=snap_times,
                       pe=float(pe) if pe is not None else None)
        rows = []
        for t in sol.times:
            rows.extend(_snapshot_rows(sol.as_piecewise(t), t, bounds))
        _write_csv(out / "fv_snapshots.csv", ["t", "x_lo", "x_hi", "u"], rows)
        written.append("fv_snapshots.csv")
        margin = 2.0 * float(grid_cfg["dxi"])
        cmp_window = (bounds[0] + margin, bounds[1] - margin)
        notes["comparison"] = {
            "window": list(cmp_window),
            "sigma_rule": sol.sigma_rule,
            "l1": {fmt(t): compare_l1(trace.state_at(t), sol.as_piecewise(t),
                                      cmp_window)
                   for t in sol.times},
        }
    return written, notes


def run(config_path: str | Path, out_dir: str | Path, force: bool = False,
        cli_mode: Optional[str] = None) -> Path:
    """Execute one scenario into a fresh output directory."""
    t0 = time.monotonic()
    scn = load_scenario(config_path)
    violations = validate_scenario(scn)
    if cli_mode is not None and not violations and scn.mode != cli_mode:
        violations.append(
            f"command-line mode {cli_mode!r} does not match run.mode {scn.mode!r}")
    if violations:
        raise ValidationFailure(violations)
    out = Path(out_dir)
    if out.exists() and any(out.iterdir()) and not force:
        raise ValidationFailure(
            [f"output directory {out} exists and is not empty (use --force)"])
    out.mkdir(parents=True, exist_ok=True)

    written, notes = _run_trace_mode(scn, out)

    config_echo = {"model": scn.model, "initial": scn.initial, "run": scn.run}
    manifest = {
        "tool": "co2fronts",
        "version": __version__,
        "run_id": run_id_of(config_echo),
        "mode": scn.mode,
        "config": config_echo,
        "outputs": written + ["manifest.json"],
        "notes": notes,
        "wall_time_s": round(time.monotonic() - t0, 6),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return out


def run_batch(batch_dir: str | Path, out_dir: str | Path, force: bool = False,
              jobs: int = 1) -> list[Path]:
    """Run every scenario file in a directory into per-scenario subfolders."""
    batch = Path(batch_dir)
    configs = sorted(batch.glob("*.json"))
    if not configs:
        raise ValidationFailure([f"no scenario files in {batch}"])
    results: list[Path] = []
    if jobs <= 1:
        for cfg in configs:
            results.append(run(cfg, Path(out_dir) / cfg.stem, force=force))
        return results
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futs = [pool.submit(run, cfg, Path(out_dir) / cfg.stem, force)
                for cfg in configs]
        for fut in futs:
            results.append(fut.result())
    return results
