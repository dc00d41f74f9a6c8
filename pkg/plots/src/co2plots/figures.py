"""The four figure kinds rendered from a run directory.

char-plane   fronts as heavy curves, characteristic families as light lines,
             events as markers, in the (x, t) plane
flux-chords  both flux curves with the jump chord of the principal shock at
             selected times
profiles     plume height snapshots overlaid
diagnostics  total variation, front count, plume area and support width
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import RunDataError, RunDir

FIGURE_KINDS = ("char-plane", "flux-chords", "profiles", "diagnostics")

FRONT_STYLE = {"shock": dict(color="crimson", lw=2.2),
               "expansion": dict(color="darkorange", lw=1.4)}
FAMILY_STYLE = {"fast": dict(color="steelblue", lw=0.6, alpha=0.8),
                "slow": dict(color="seagreen", lw=0.6, alpha=0.8)}


def _flux(M: float, u: np.ndarray) -> np.ndarray:
    return u * (1.0 - u) / (u * (M - 1.0) + 1.0)


def _stamp(fig, run: RunDir) -> None:
    fig.text(0.995, 0.005, f"run {run.run_id}", ha="right", va="bottom",
             fontsize=6, color="0.4")


def _window4(window: Optional[Sequence[float]]):
    if window is None:
        return None, None
    if len(window) == 2:
        return (window[0], window[1]), None
    if len(window) == 4:
        return (window[0], window[1]), (window[2], window[3])
    raise ValueError("window takes x0,x1 or x0,x1,t0,t1")


def render_char_plane(run: RunDir, window=None):
    xw, tw = _window4(window)
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    try:
        lines = run.chars()
    except RunDataError:
        lines = {}
    seen = set()
    for rec in lines.values():
        style = FAMILY_STYLE.get(rec["family"], {})
        label = rec["family"] if rec["family"] not in seen else None
        seen.add(rec["family"])
        ax.plot(rec["x"], rec["t"], label=label, **style)
    for fr in run.fronts():
        ax.plot([fr["x_start"], fr["x_end"]], [fr["t_start"], fr["t_end"]],
                **FRONT_STYLE.get(fr["kind"], dict(color="black")))
    events = run.events()
    if events:
        ax.plot([e["x"] for e in events], [e["t"] for e in events], "ko",
                ms=3.5, label="events")
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    ax.set_title("fronts and characteristics")
    if xw:
        ax.set_xlim(*xw)
    if tw:
        ax.set_ylim(*tw)
    if seen or events:
        ax.legend(loc="upper right", fontsize=7)
    _stamp(fig, run)
    return fig


def render_flux_chords(run: RunDir, window=None):
    M, eps = run.model()
    fronts = run.fronts()
    shocks = [fr for fr in fronts if fr["kind"] == "shock"]
    if not shocks:
        shocks = fronts
    if not shocks:
        raise RunDataError("no fronts to draw chords for")
    fig, ax = plt.subplots(figsize=(6.0, 4.6))
    u = np.linspace(0.0, 1.0, 400)
    ax.plot(u, _flux(M, u), color="0.2", lw=1.6, label="draining flux")
    ax.plot(u, (1.0 - eps) * _flux(M, u), color="0.2", lw=1.6, ls="--",
            label="invading flux")
    t_lo = min(fr["t_start"] for fr in shocks)
    t_hi = max(fr["t_end"] for fr in shocks)
    times = np.linspace(t_lo, t_hi, 5)
    cmap = plt.get_cmap("viridis")
    for k, t in enumerate(times):
        alive = [fr for fr in shocks if fr["t_start"] <= t <= fr["t_end"]]
        if not alive:
            continue
        fr = max(alive, key=lambda r: abs(r["u_right"] - r["u_left"]))
        sigma = fr["sigma"] if fr["sigma"] is not None else 1.0
        ul, ur = fr["u_left"], fr["u_right"]
        ax.plot([ul, ur], [sigma * _flux(M, np.array(ul)),
                           sigma * _flux(M, np.array(ur))],
                color=cmap(k / max(1, len(times) - 1)), lw=1.2, marker="o",
                ms=3, label=f"chord t={t:.3g}")
    ax.set_xlabel("plume height u")
    ax.set_ylabel("flux")
    ax.set_title(f"flux curves and jump chords (M={M:g}, eps={eps:g})")
    ax.legend(fontsize=7)
    _stamp(fig, run)
    return fig


def render_profiles(run: RunDir, window=None):
    xw, _ = _window4(window)
    snaps = run.snapshots()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    cmap = plt.get_cmap("viridis")
    times = sorted(snaps)
    for k, t in enumerate(times):
        xs: list[float] = []
        us: list[float] = []
        for x_lo, x_hi, u in sorted(snaps[t]):
            xs.extend([x_lo, x_hi])
            us.extend([u, u])
        ax.plot(xs, us, color=cmap(k / max(1, len(times) - 1)), lw=1.4,
                label=f"t={t:g}")
    ax.set_xlabel("x")
    ax.set_ylabel("plume height u")
    ax.set_ylim(-0.05, 1.05)
    ax.set_title("plume profiles")
    if xw:
        ax.set_xlim(*xw)
    ax.legend(fontsize=7)
    _stamp(fig, run)
    return fig


def render_diagnostics(run: RunDir, window=None):
    diag = run.diagnostics()
    fig, axes = plt.subplots(2, 2, figsize=(7.6, 5.4), sharex=True)
    panels = [("tv", "total variation"), ("front_count", "front count"),
              ("plume_area", "plume area"), ("support_width", "support width")]
    for ax, (key, label) in zip(axes.flat, panels):
        ax.step(diag["t"], diag[key], where="post", lw=1.4)
        ax.set_ylabel(label)
        ax.grid(alpha=0.3)
    for ax in axes[-1]:
        ax.set_xlabel("t")
    fig.suptitle("run diagnostics")
    _stamp(fig, run)
    return fig


RENDERERS = {
    "char-plane": render_char_plane,
    "flux-chords": render_flux_chords,
    "profiles": render_profiles,
    "diagnostics": render_diagnostics,
}


def render(run_dir: str | Path, kind: str, out_path: str | Path,
           window: Optional[Sequence[float]] = None) -> Path:
    """Render one figure kind from a run directory to an image file."""
    if kind not in RENDERERS:
        raise ValueError(f"unknown figure kind {kind!r}; "
                         f"choose from {FIGURE_KINDS}")
    run = RunDir.open(run_dir)
    fig = RENDERERS[kind](run, window=window)
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    metadata = None
    if out.suffix.lower() == ".png":
        metadata = {"Description": f"co2fronts run {run.run_id}, {kind} figure"}
    fig.savefig(out, dpi=150, metadata=metadata)
    plt.close(fig)
    return out
