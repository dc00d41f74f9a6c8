"""Method-of-characteristics machinery for smooth data, plus characteristic
field generation for piecewise-constant tracked solutions.

Smooth initial data propagates each value at one of the two characteristic
speeds, chosen by the signs of the local slope and of f'.  An isolated
minimum opens a constant fan between the two speeds through that point; an
isolated maximum propagates as a corner whose speed blends the one-sided
slopes.  Where the solution is constant the speed choice is genuinely
ambiguous and both families are drawn (the cross-hatch pattern); this is
what keeps a shock admissible when its speed grazes one family.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .flux import FluxParams, char_speeds, d2f, df, f
from .profiles import SmoothProfile
from .rootfind import bisect_root
from .tracker import Trace, TrajectorySegment

BLOWUP_FLOOR = 1e-8


@dataclass
class CornerPath:
    """Trajectory of the corner carrying an isolated maximum.

    One-sided slopes stay of opposite sign while the corner persists; the
    speed starts at the average of the two characteristic speeds of the peak
    value and remains a convex blend of them.
    """

    t: np.ndarray
    gamma: np.ndarray
    gamma_dot: np.ndarray
    ux_minus: np.ndarray
    ux_plus: np.ndarray
    initial_speed: float
    blowup: bool
    blowup_time: Optional[float]

    def position_at(self, t: float) -> float:
        return float(np.interp(t, self.t, self.gamma))


def _sides_for(c: float, sigma_lower: float) -> tuple[float, float]:
    """Switch values on the two flanks of a maximum with peak speed c."""
    if c > 0.0:
        return 1.0, sigma_lower   # left flank drains, right flank invades
    return sigma_lower, 1.0


class _Blowup(Exception):
    def __init__(self, t: float) -> None:
        self.t = t


def _foot_point(params: FluxParams, profile: SmoothProfile, sigma: float,
                gamma: float, t: float, x_bar: float, edge: float) -> float:
    """Foot of the characteristic through (gamma, t) on one flank of a
    maximum at x_bar (edge is the profile-domain end on that flank).

    The characteristic map loses injectivity once the flank steepens, so the
    root nearest the peak is selected by walking outward from x_bar until
    the defect changes sign.  If the near root has merged with its twin and
    vanished, the characteristics feeding the corner have crossed: that is
    gradient blow-up at the corner.
    """

    def g(xi: float) -> float:
        return xi + sigma * df(params, profile(xi)) * t - gamma

    g_peak = g(x_bar)
    if abs(g_peak) <= 1e-12 * (1.0 + abs(gamma)):
        return x_bar  # degenerate flank (epsilon = 0): foot rides the peak
    sign = 1.0 if g_peak > 0.0 else -1.0

    def walk(a: float, b: float, n: int):
        prev, g_prev = a, g(a) * sign
        best, best_k = g_prev, 0
        for k in range(1, n + 1):
            xi = a + (b - a) * k / n
            g_xi = g(xi) * sign
            if g_xi <= 0.0:
                return bisect_root(g, min(prev, xi), max(prev, xi), xtol=1e-13), None
            if g_xi < best:
                best, best_k = g_xi, k
            prev, g_prev = xi, g_xi
        return None, best_k

    root, argmin = walk(x_bar, edge, 128)
    if root is not None:
        return root
    lo = x_bar + (edge - x_bar) * max(argmin - 1, 0) / 128
    hi = x_bar + (edge - x_bar) * min(argmin + 1, 128) / 128
    root, argmin2 = walk(lo, hi, 256)
    if root is not None:
        return root
    if argmin == 128:
        raise ValueError("corner characteristic foot left the profile domain; "
                         "shorten the horizon or widen the domain")
    raise _Blowup(t)


def corner_path(
    params: FluxParams,
    profile: SmoothProfile,
    horizon: float,
    n_steps: int = 1000,
) -> CornerPath:
    """Integrate the corner carried by the profile's isolated maximum.

    The corner speed follows
        gamma' = f'(u) (s_m ux_m - s_p ux_p) / (ux_m - ux_p)
    with the flank switches s_m, s_p and the one-sided slopes recovered from
    the characteristic foot-points.  The right-hand side is 0/0 at t = 0, so
    the first step uses the closed-form limit (1 - eps/2) f'(peak).  Fixed
    fourth-order Runge-Kutta steps of horizon / n_steps.
    """
    maxima = [x for x, kind in profile.extrema if kind == "max"]
    if len(maxima) != 1:
        raise ValueError("profile must carry exactly one isolated maximum")
    x_bar = maxima[0]
    peak = profile(x_bar)
    c = df(params, peak)
    if abs(c) < 1e-12:
        raise ValueError(
            "maximum sits at the flux maximizer; corner speed is undefined there")
    s_minus, s_plus = _sides_for(c, params.sigma_lower)
    lo, hi = profile.domain
    dt = horizon / n_steps
    gamma0_dot = (1.0 - 0.5 * params.epsilon) * c

    def slopes_at(t: float, gamma: float) -> tuple[float, float, float]:
        xi_m = _foot_point(params, profile, s_minus, gamma, t, x_bar, lo)
        xi_p = _foot_point(params, profile, s_plus, gamma, t, x_bar, hi)
        u_m, u_p = profile(xi_m), profile(xi_p)
        den_m = 1.0 + s_minus * profile.slope(xi_m) * d2f(params, u_m) * t
        den_p = 1.0 + s_plus * profile.slope(xi_p) * d2f(params, u_p) * t
        if den_m <= BLOWUP_FLOOR or den_p <= BLOWUP_FLOOR:
            raise _Blowup(t)
        ux_m = profile.slope(xi_m) / den_m
        ux_p = profile.slope(xi_p) / den_p
        return ux_m, ux_p, 0.5 * (u_m + u_p)

    def rhs(t: float, gamma: float) -> float:
        if t < 0.25 * dt:
            return gamma0_dot
        ux_m, ux_p, u_val = slopes_at(t, gamma)
        if abs(ux_m - ux_p) < 1e-300:
            # coincident feet (single-flux limit): symmetric blend
            return df(params, u_val) * 0.5 * (s_minus + s_plus)
        return df(params, u_val) * (s_minus * ux_m - s_plus * ux_p) / (ux_m - ux_p)

    ts = [0.0]
    gs = [x_bar]
    gdots = [gamma0_dot]
    uxm = [0.0]
    uxp = [0.0]
    blowup, blowup_time = False, None
    t, gamma = 0.0, x_bar
    try:
        for _ in range(n_steps):
            k1 = rhs(t, gamma)
            k2 = rhs(t + 0.5 * dt, gamma + 0.5 * dt * k1)
            k3 = rhs(t + 0.5 * dt, gamma + 0.5 * dt * k2)
            k4 = rhs(t + dt, gamma + dt * k3)
            gamma = gamma + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
            t = t + dt
            ux_m, ux_p, _ = slopes_at(t, gamma)
            ts.append(t)
            gs.append(gamma)
            gdots.append(rhs(t, gamma))
            uxm.append(ux_m)
            uxp.append(ux_p)
    except _Blowup as stop:
        blowup, blowup_time = True, stop.t
    return CornerPath(np.array(ts), np.array(gs), np.array(gdots),
                      np.array(uxm), np.array(uxp), gamma0_dot,
                      blowup, blowup_time)


def _switch_speed(params: FluxParams, profile: SmoothProfile, xi: float) -> float:
    """Characteristic speed at foot xi under the slope/sign rule."""
    s = df(params, profile(xi))
    p = s * profile.slope(xi)
    if p > 0.0:
        return s          # draining: full flux
    if p < 0.0:
        return params.sigma_lower * s
    return 0.0 if s == 0.0 else s  # slope zero away from extrema: constant run


def shock_formation_time(params: FluxParams, profile: SmoothProfile,
                         n_grid: int = 2000) -> float:
    """First gradient blow-up time along any characteristic.

    The slope transported from foot xi blows up when
    1 + sigma * u0'(xi) * f''(u0(xi)) * t reaches zero.
    """
    lo, hi = profile.domain
    t_min = math.inf
    for k in range(n_grid + 1):
        xi = lo + (hi - lo) * k / n_grid
        s = df(params, profile(xi))
        p = s * profile.slope(xi)
        sigma = 1.0 if p > 0.0 else params.sigma_lower
        rate = sigma * profile.slope(xi) * d2f(params, profile(xi))
        if rate < 0.0:
            t_min = min(t_min, -1.0 / rate)
    return t_min


def smooth_solve(
    params: FluxParams,
    profile: SmoothProfile,
    t: float,
    xs: Iterable[float],
    corner: Optional[CornerPath] = None,
) -> list[float]:
    """Evaluate the pre-shock smooth solution at time t and positions xs.

    Monotone stretches are inverted through the characteristic map
    xi -> xi + sigma(xi) f'(u0(xi)) t; an isolated minimum contributes an
    expanding constant fan, an isolated maximum splits the axis at the
    integrated corner position.  Queries outside the domain of influence of
    the profile's domain return the frozen edge values.
    """
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    if t == 0.0:
        return [profile(x) for x in xs]
    t_shock = shock_formation_time(params, profile)
    if t >= t_shock * (1.0 - 1e-10):
        raise ValueError(f"query at t = {t} is past gradient blow-up at {t_shock}")

    lo, hi = profile.domain
    crit = sorted(profile.extrema)
    cuts = [lo] + [x for x, _ in crit] + [hi]
    kinds = [k for _, k in crit]

    # assemble ordered pieces: ("segment", a, b, X(a), X(b)) and
    # ("plateau", value, x_lo, x_hi) insertions between them
    pieces: list[tuple] = []
    for i, (a, b) in enumerate(zip(cuts, cuts[1:])):
        xa = a + _switch_speed(params, profile, a) * t
        xb = b + _switch_speed(params, profile, b) * t
        pieces.append(("segment", a, b, xa, xb))
        if i < len(kinds):
            x_e = cuts[i + 1]
            u_e = profile(x_e)
            fast, slow = char_speeds(params, u_e)
            if kinds[i] == "min":
                pieces.append(("plateau", u_e, x_e + slow * t, x_e + fast * t))
            else:
                if corner is None:
                    corner = corner_path(params, profile, max(t * 1.01, 1e-6))
                pieces.append(("corner", corner.position_at(t)))

    def invert(a: float, b: float, x: float) -> float:
        def g(xi: float) -> float:
            return xi + _switch_speed(params, profile, xi) * t - x

        ga, gb = g(a), g(b)
        if ga > 0.0 and gb > 0.0:
            return a
        if ga < 0.0 and gb < 0.0:
            return b
        return bisect_root(g, a, b, xtol=1e-13)

    out = []
    for x in xs:
        value: Optional[float] = None
        for i, piece in enumerate(pieces):
            if piece[0] == "plateau":
                _, u_e, p_lo, p_hi = piece
                if p_lo <= x <= p_hi:
                    value = u_e
                    break
            elif piece[0] == "corner":
                continue
            else:
                _, a, b, xa, xb = piece
                lo_x, hi_x = xa, xb
                # clip at the corner boundary and at plateau edges
                if i + 1 < len(pieces) and pieces[i + 1][0] == "corner":
                    hi_x = min(hi_x, pieces[i + 1][1])
                if i + 1 < len(pieces) and pieces[i + 1][0] == "plateau":
                    hi_x = min(hi_x, pieces[i + 1][2])
                if i - 1 >= 0 and pieces[i - 1][0] == "corner":
                    lo_x = max(lo_x, pieces[i - 1][1])
                if i - 1 >= 0 and pieces[i - 1][0] == "plateau":
                    lo_x = max(lo_x, pieces[i - 1][3])
                if lo_x <= x <= hi_x:
                    value = profile(invert(a, b, x))
                    break
        if value is None:
            value = profile(lo) if x < pieces[0][3] else profile(hi)
        out.append(value)
    return out


@dataclass(frozen=True)
class Polyline:
    polyline_id: int
    family: str            # "fast" | "slow"
    vertices: tuple[tuple[float, float], ...]
    cross_hatch: bool = True


@dataclass(frozen=True)
class CharField:
    polylines: tuple[Polyline, ...]


@dataclass(frozen=True)
class CharGrid:
    """Seeding recipe for characteristic fields."""

    n_seeds: int = 9
    x_range: Optional[tuple[float, float]] = None
    t_end: Optional[float] = None
    per_front: int = 2


def _live_fronts(trace: Trace, t: float) -> list[TrajectorySegment]:
    live = [s for s in trace.segments
            if s.t_start <= t and (t < s.t_end or not s.closed_by_event)]
    live.sort(key=lambda s: (s.x_start + s.speed * (t - s.t_start), s.speed))
    return live


def _seg_pos(seg: TrajectorySegment, t: float) -> float:
    return seg.x_start + seg.speed * (t - seg.t_start)


def _advance_line(trace: Trace, params: FluxParams, t0: float, x0: float,
                  family: str, t_end: float) -> tuple[tuple[float, float], ...]:
    """Propagate one characteristic exactly through the piecewise field."""
    verts = [(t0, x0)]
    t, x = t0, x0
    times = sorted({e.t for e in trace.events if e.t > t0} | {t_end})
    idx = 0
    while t < t_end - 1e-15:
        while idx < len(times) and times[idx] <= t + 1e-15:
            idx += 1
        t_next = times[idx] if idx < len(times) else t_end
        t_next = min(t_next, t_end)
        live = _live_fronts(trace, t)
        positions = [_seg_pos(s, t) for s in live]
        i = bisect_right(positions, x)
        # value of the region the point sits in
        if not live:
            u = trace.initial.values[0]
            bound_left = bound_right = None
        else:
            u = live[i - 1].u_right if i > 0 else live[0].u_left
            bound_left = live[i - 1] if i > 0 else None
            bound_right = live[i] if i < len(live) else None
        fast, slow = char_speeds(params, u)
        v = fast if family == "fast" else slow
        hit_t = None
        for seg in (bound_left, bound_right):
            if seg is None:
                continue
            rel = v - seg.speed
            if rel == 0.0:
                continue
            tau = t + (_seg_pos(seg, t) - x) / rel
            if t + 1e-15 < tau <= t_next + 1e-14:
                if hit_t is None or tau < hit_t:
                    hit_t = tau
        if hit_t is not None:
            verts.append((hit_t, x + v * (hit_t - t)))
            return tuple(verts)
        x = x + v * (t_next - t)
        t = t_next
        verts.append((t, x))
    return tuple(verts)


def char_field(
    params: FluxParams,
    source: Union[Trace, float],
    grid: CharGrid = CharGrid(),
) -> CharField:
    """Characteristic field of a tracked solution (or a constant state).

    Every region of a tracked solution is constant, so both families are
    emitted from each seed (cross-hatch).  Lines terminate on any front they
    run into; additional lines are seeded along front trajectories on each
    side whose family leaves the front (the slow family leaving an admissible
    shock on the left, both families leaving an expansion shock).
    """
    polylines: list[Polyline] = []
    pid = 0
    if isinstance(source, float):
        t_end = grid.t_end if grid.t_end is not None else 1.0
        x_lo, x_hi = grid.x_range if grid.x_range else (0.0, 1.0)
        fast, slow = char_speeds(params, source)
        for k in range(grid.n_seeds):
            x0 = x_lo + (x_hi - x_lo) * k / max(1, grid.n_seeds - 1)
            for family, v in (("fast", fast), ("slow", slow)):
                polylines.append(Polyline(pid, family,
                                          ((0.0, x0), (t_end, x0 + v * t_end))))
                pid += 1
        return CharField(tuple(polylines))

    trace = source
    t_end = grid.t_end if grid.t_end is not None else trace.horizon
    if grid.x_range is not None:
        x_lo, x_hi = grid.x_range
    else:
        span = [s.x_start for s in trace.segments] + [s.x_end for s in trace.segments]
        pad = 0.25 * (max(span) - min(span) + 1.0)
        x_lo, x_hi = min(span) - pad, max(span) + pad
    seeds = [x_lo + (x_hi - x_lo) * k / max(1, grid.n_seeds - 1)
             for k in range(grid.n_seeds)]
    front_x0 = {s.x_start for s in trace.segments if s.t_start == 0.0}
    for x0 in seeds:
        if any(abs(x0 - b) < 1e-9 for b in front_x0):
            x0 += 1e-6 * (x_hi - x_lo)
        for family in ("fast", "slow"):
            verts = _advance_line(trace, params, 0.0, x0, family, t_end)
            polylines.append(Polyline(pid, family, verts))
            pid += 1
    # emanating lines along each front
    for seg in trace.segments:
        life = min(seg.t_end, t_end) - seg.t_start
        if life <= 0.0 or grid.per_front <= 0:
            continue
        for side, u_side in ((-1, seg.u_left), (+1, seg.u_right)):
            fast, slow = char_speeds(params, u_side)
            for family, v in (("fast", fast), ("slow", slow)):
                leaves = v < seg.speed - 1e-12 if side < 0 else v > seg.speed + 1e-12
                if not leaves:
                    continue
                for m in range(grid.per_front):
                    tau0 = seg.t_start + life * (m + 1) / (grid.per_front + 1)
                    x0 = _seg_pos(seg, tau0) + side * 1e-9
                    verts = _advance_line(trace, params, tau0, x0, family, t_end)
                    if len(verts) > 1:
                        polylines.append(Polyline(pid, family, verts))
                        pid += 1
    return CharField(tuple(polylines))
