"""Scenario files: parsing and validation.

A scenario is a single JSON document holding the material model, the initial
plume, and one run specification.  Validation reports every violation rather
than stopping at the first; violations are data, not exceptions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .flux import FluxParams
from .profiles import PiecewiseProfile, box, step, three_state

MODES = ("riemann", "interact", "track", "characteristics", "oracle-compare")


class ConfigError(Exception):
    """Unreadable or syntactically invalid scenario file."""


@dataclass
class Scenario:
    model: dict[str, float]
    initial: dict[str, Any]
    run: dict[str, Any]

    @property
    def mode(self) -> str:
        return self.run.get("mode", "")

    def params(self) -> FluxParams:
        return FluxParams(float(self.model["M"]), float(self.model["epsilon"]))

    def profile(self) -> PiecewiseProfile:
        return build_profile(self.initial)

    def horizon(self) -> float:
        return float(self.run.get("T", 1.0))


def load_scenario(path: str | Path) -> Scenario:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot parse scenario {path}: {exc}") from exc
    if isinstance(raw, dict) and "config" in raw and "model" not in raw:
        raw = raw["config"]  # accept a run manifest echo
    if not isinstance(raw, dict):
        raise ConfigError("scenario must be a JSON object")
    return Scenario(
        model=raw.get("model", {}),
        initial=raw.get("initial", {}),
        run=raw.get("run", {}),
    )


def build_profile(initial: dict[str, Any]) -> PiecewiseProfile:
    kind = initial.get("kind")
    if kind == "riemann":
        return step(float(initial.get("x0", 0.0)),
                    float(initial["left"]), float(initial["right"]))
    if kind == "lmr":
        return three_state(float(initial["x1"]), float(initial["x2"]),
                           float(initial["left"]), float(initial["middle"]),
                           float(initial["right"]))
    if kind == "box":
        return box(float(initial["x_lo"]), float(initial["x_hi"]),
                   float(initial["height"]), float(initial.get("background", 0.0)))
    if kind == "piecewise":
        return PiecewiseProfile(tuple(float(b) for b in initial["breakpoints"]),
                                tuple(float(v) for v in initial["values"]))
    if kind == "pieces":
        return PiecewiseProfile.from_pieces(
            [tuple(map(float, p)) for p in initial["pieces"]],
            float(initial.get("background", 0.0)))
    raise ConfigError(f"unknown initial data kind {kind!r}")


def validate_scenario(scn: Scenario) -> list[str]:
    """Full schema and domain check; returns every violation found."""
    violations: list[str] = []
    model = scn.model
    if "M" not in model:
        violations.append("model.M required")
    elif not float(model["M"]) >= 1.0:
        violations.append(f"model.M must satisfy M >= 1, got {model['M']}")
    if "epsilon" not in model:
        violations.append("model.epsilon required")
    elif not 0.0 <= float(model["epsilon"]) <= 1.0:
        violations.append(f"model.epsilon must lie in [0, 1], got {model['epsilon']}")

    mode = scn.run.get("mode")
    if mode is None:
        violations.append("run.mode required")
    elif mode not in MODES:
        violations.append(f"run.mode must be one of {MODES}, got {mode!r}")

    try:
        profile = build_profile(scn.initial)
    except (ConfigError, KeyError, ValueError, TypeError) as exc:
        violations.append(f"initial data invalid: {exc}")
        profile = None
    if profile is not None:
        bad = [v for v in profile.values if not 0.0 <= v <= 1.0]
        if bad:
            violations.append(f"initial values outside [0, 1]: {bad}")

    needs_h = mode in ("track", "interact", "characteristics", "oracle-compare")
    h = scn.run.get("h")
    if needs_h and (h is None or not float(h) > 0.0):
        violations.append(f"run.h must be positive for mode {mode!r}")
    if h is not None and not float(h) > 0.0:
        violations.append(f"run.h must be positive, got {h}")

    horizon = scn.run.get("T", 1.0)
    if not float(horizon) > 0.0:
        violations.append(f"run.T must be positive, got {horizon}")
    for t in scn.run.get("snapshot_times", []):
        if not 0.0 <= float(t) <= float(horizon):
            violations.append(f"snapshot time {t} outside [0, T]")

    if mode == "riemann" and scn.initial.get("kind") not in (None, "riemann"):
        violations.append("riemann mode expects initial data of kind 'riemann'")
    if mode == "interact" and scn.initial.get("kind") != "lmr":
        violations.append("interact mode expects initial data of kind 'lmr'")
    if mode == "oracle-compare":
        grid = scn.run.get("grid")
        if not isinstance(grid, dict):
            violations.append("run.grid required for oracle-compare")
        else:
            if not float(grid.get("dxi", 0.0)) > 0.0:
                violations.append("run.grid.dxi must be positive")
            cfl = float(grid.get("cfl", 0.5))
            if not 0.0 < cfl <= 1.0:
                violations.append(f"run.grid.cfl must lie in (0, 1], got {cfl}")
            bounds = grid.get("bounds")
            if bounds is not None and not float(bounds[0]) < float(bounds[1]):
                violations.append("run.grid.bounds must be an increasing pair")
    window = scn.run.get("window")
    if window is not None and not float(window[0]) < float(window[1]):
        violations.append("run.window must be an increasing pair")
    return violations
