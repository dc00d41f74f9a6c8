"""Independent reference solutions used to validate the tracker.

Two routes: a high-accuracy ODE for a shock eating its way through an exact
rarefaction fan (the fan sampled analytically, never discretized), and an
explicit Godunov finite-volume scheme for the switched conservation law on a
uniform grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .flux import FluxParams, df, f, sup_slope, ustar
from .interactions import asymptotic_eta_bar, asymptotic_eta_tilde
from .riemann import Front, RarefactionFan, make_front, sample_rarefaction, shock_speed
from .tracker import PiecewiseConstantState

ODE_RTOL = 1e-8
ASYMPTOTIC_TOL = 1e-4


@dataclass
class ShockPath:
    """Trajectory of a shock interacting with an adjacent rarefaction fan.

    status: "absorbed" once the fan has been fully consumed (after t_star the
    path continues as the terminal constant-speed shock), "asymptotic" when
    the speed locks onto the characteristic value lambda_inf, or "horizon"
    when the run ends mid-interaction.
    """

    t: np.ndarray
    y: np.ndarray
    speed: np.ndarray
    fan_value: np.ndarray
    fan_side: str  # "left" | "right"
    status: str
    t_star: Optional[float]
    lambda_inf: Optional[float]
    terminal_front: Optional[Front]

    def position_at(self, t: float) -> float:
        return float(np.interp(t, self.t, self.y))

    def speed_at(self, t: float) -> float:
        return float(np.interp(t, self.t, self.speed))


def shock_through_rarefaction(
    params: FluxParams,
    outer: float,
    fan: RarefactionFan,
    x_shock: float,
    horizon: float,
) -> ShockPath:
    """Integrate the exact motion of a shock adjacent to a rarefaction fan.

    The fan supplies the state on one side of the shock; the other side holds
    the constant ``outer``.  The speed is re-evaluated every step from the
    jump condition with the switch chosen by the jump direction, so the path
    stays on the jump condition to integrator accuracy.  Classical
    fourth-order Runge-Kutta with step-doubling control.
    """
    x0, t0 = fan.center
    fan_side = "right" if x0 > x_shock else "left"
    if fan_side == "right":
        near, far = fan.u_left, fan.u_right
        near_edge = fan.trailing_speed(params)
        far_edge = fan.leading_speed(params)
    else:
        near, far = fan.u_right, fan.u_left
        near_edge = fan.leading_speed(params)
        far_edge = fan.trailing_speed(params)

    def lam(state: float) -> float:
        if fan_side == "right":
            return shock_speed(params, outer, state)
        return shock_speed(params, state, outer)

    lam0 = lam(near)
    # meeting time of the straight shock with the fan's near-edge characteristic
    denom = lam0 - near_edge
    rel0 = x_shock - (x0 + near_edge * (0.0 - t0))
    approaching = denom > 0 if fan_side == "right" else denom < 0
    ts: list[float] = [0.0]
    ys: list[float] = [x_shock]
    if not approaching:
        raise ValueError("configuration does not interact: shock and fan separate")
    t_enter = -rel0 / denom
    if t_enter <= 0.0:
        raise ValueError("shock starts inside the fan")

    us = ustar(params)
    lam_inf: Optional[float] = None
    if fan_side == "left":
        if outer > us:
            eta = asymptotic_eta_tilde(params, outer)
            if eta is not None:
                lam_inf = df(params, eta)
        else:
            eta = asymptotic_eta_bar(params, outer, lo=fan.u_right)
            if eta is not None:
                lam_inf = params.sigma_lower * df(params, eta)
    elif fan.u_right < outer < fan.u_left:
        # shock strength vanishes inside the fan: speed approaches the
        # characteristic speed carried by the outer value
        sigma = 1.0 if outer > us else params.sigma_lower
        lam_inf = sigma * df(params, outer)

    if t_enter >= horizon:
        t_end = horizon
        ts.append(t_end)
        ys.append(x_shock + lam0 * t_end)
        n = len(ts)
        return ShockPath(np.array(ts), np.array(ys),
                         np.full(n, lam0), np.full(n, near), fan_side,
                         "horizon", None, lam_inf, None)
    ts.append(t_enter)
    ys.append(x_shock + lam0 * t_enter)

    def fan_value(y: float, t: float) -> float:
        sim = (y - x0) / (t - t0)
        lo = fan.trailing_speed(params)
        hi = fan.leading_speed(params)
        sim = min(max(sim, lo), hi)
        return sample_rarefaction(params, fan, sim)

    def rhs(t: float, y: float) -> float:
        return lam(fan_value(y, t))

    def rk4(t: float, y: float, dt: float) -> float:
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2)
        k4 = rhs(t + dt, y + dt * k3)
        return y + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0

    t, y = t_enter, ys[-1]
    speeds = [lam0, lam0]
    values = [near, near]
    dt = min(1e-3 * (horizon - t_enter) + 1e-12, 0.05)
    status, t_star = "horizon", None
    far_sim = far_edge

    def past_far_edge(yy: float, tt: float) -> bool:
        sim = (yy - x0) / (tt - t0)
        if fan_side == "right":
            return sim >= far_sim - 1e-14
        return sim <= far_sim + 1e-14

    while t < horizon:
        dt = min(dt, horizon - t)
        y_full = rk4(t, y, dt)
        y_half = rk4(t + 0.5 * dt, rk4(t, y, 0.5 * dt), 0.5 * dt)
        err = abs(y_full - y_half) / 15.0
        tol = ODE_RTOL * (1.0 + abs(y_half))
        if err > tol and dt > 1e-12:
            dt = max(0.2 * dt, 0.9 * dt * (tol / err) ** 0.2)
            continue
        t = t + dt
        y = y_half
        if err > 0.0:
            dt = min(5.0 * dt, 0.9 * dt * (tol / err) ** 0.2, 0.05 * (horizon - t_enter) + 1e-12)
        ts.append(t)
        ys.append(y)
        value = fan_value(y, t)
        values.append(value)
        speeds.append(lam(value))
        if past_far_edge(y, t):
            status, t_star = "absorbed", t
            break
        if lam_inf is not None and abs(speeds[-1] - lam_inf) < ASYMPTOTIC_TOL:
            status = "asymptotic"
            break

    terminal = None
    if status == "absorbed":
        u_l, u_r = (outer, far) if fan_side == "right" else (far, outer)
        terminal = make_front(params, y, u_l, u_r)
        if t_star < horizon:
            ts.append(horizon)
            ys.append(y + terminal.speed * (horizon - t_star))
            speeds.append(terminal.speed)
            values.append(far)
    return ShockPath(np.array(ts), np.array(ys), np.array(speeds),
                     np.array(values), fan_side, status, t_star, lam_inf, terminal)


@dataclass
class GridSolution:
    """Cell-averaged solution of the finite-volume oracle."""

    centers: np.ndarray
    dxi: float
    times: list[float]
    states: list[np.ndarray]
    sigma_rule: str = "cell-centered two-pass predictor-corrector"

    def state_at(self, t: float) -> np.ndarray:
        for tt, state in zip(self.times, self.states):
            if abs(tt - t) <= 1e-9 * (1.0 + abs(t)):
                return state
        raise KeyError(f"no stored snapshot at t = {t}")

    def as_piecewise(self, t: float) -> PiecewiseConstantState:
        u = self.state_at(t)
        edges = np.concatenate((self.centers - 0.5 * self.dxi,
                                [self.centers[-1] + 0.5 * self.dxi]))
        return PiecewiseConstantState(tuple(edges[1:-1]), tuple(u))


def _flux_arrays(params: FluxParams):
    if params.curve is None:
        M = params.M

        def fv(u: np.ndarray) -> np.ndarray:
            return u * (1.0 - u) / (u * (M - 1.0) + 1.0)
    else:
        fv = np.vectorize(params.curve.value)
    return fv


def _godunov_flux(params: FluxParams, ul: np.ndarray, ur: np.ndarray) -> np.ndarray:
    """Exact-solver interface flux for the unscaled concave curve.

    Up-jumps take the smaller endpoint flux; down-jumps take the larger one,
    capped by the peak value when the jump straddles the maximizer.
    """
    fv = _flux_arrays(params)
    us = ustar(params)
    fl, fr = fv(ul), fv(ur)
    up = np.minimum(fl, fr)
    down = np.maximum(fl, fr)
    straddle = (ur <= us) & (us <= ul)
    down = np.where(straddle, float(f(params, us)), down)
    return np.where(ul <= ur, up, down)


def fv_solve(
    params: FluxParams,
    eta0: Callable[[float], float],
    bounds: tuple[float, float],
    dxi: float,
    cfl: float,
    horizon: float,
    snapshot_times: Sequence[float] = (),
    pe: Optional[float] = None,
) -> GridSolution:
    """Explicit Godunov scheme for the switched conservation law.

    The switch multiplies the flux *gradient*, not the flux itself, so it is
    applied per cell: each step first predicts updates with the previous
    switch field, re-selects the switch from the sign of the predicted cell
    change (rising cells invade on the reduced flux, falling cells drain on
    the full one), then applies the corrected update.  Exactly two passes.
    With a finite Peclet number a central-difference dissipative term
    pe^-1 * sigma * (f(u) u_x)_x is added.
    """
    if dxi <= 0.0:
        raise ValueError("dxi must be positive")
    if not 0.0 < cfl <= 1.0:
        raise ValueError("CFL number must lie in (0, 1]")
    lo, hi = bounds
    n = int(round((hi - lo) / dxi))
    if n < 4:
        raise ValueError("grid too coarse")
    edges = np.linspace(lo, hi, n + 1)
    centers = 0.5 * (edges[:-1] + edges[1:])
    u = np.array([eta0(x) for x in centers], dtype=float)
    if np.any(u < -1e-12) or np.any(u > 1.0 + 1e-12):
        raise ValueError("initial data outside [0, 1]")
    u = np.clip(u, 0.0, 1.0)

    smax = sup_slope(params)
    dt_adv = cfl * dxi / smax
    dt = dt_adv
    if pe is not None and math.isfinite(pe):
        fmax = float(f(params, ustar(params)))
        dt = min(dt, 0.4 * pe * dxi * dxi / max(fmax, 1e-300))

    fv = _flux_arrays(params)
    want = sorted(set(snapshot_times) | {horizon})
    for tt in want:
        if not 0.0 <= tt <= horizon + 1e-12:
            raise ValueError("snapshot outside run window")
    times: list[float] = []
    states: list[np.ndarray] = []
    if want and want[0] == 0.0:
        times.append(0.0)
        states.append(u.copy())
        want = want[1:]

    sigma = np.ones(n)
    lam = dt / dxi
    t = 0.0
    while t < horizon - 1e-14:
        step = min(dt, horizon - t)
        lam = step / dxi
        # n + 1 interfaces with zero-gradient ghost cells at both ends
        left_states = np.concatenate(([u[0]], u))
        right_states = np.concatenate((u, [u[-1]]))
        flux = _godunov_flux(params, left_states, right_states)
        dflux = flux[1:] - flux[:-1]
        if pe is not None and math.isfinite(pe):
            mid = 0.5 * (left_states + right_states)
            grad = (right_states - left_states) / dxi
            diff = fv(mid) * grad / pe
            dflux = dflux - (diff[1:] - diff[:-1])
        predicted = -lam * sigma * dflux
        sign = np.sign(predicted)
        mask = np.abs(predicted) > 1e-14
        sigma = np.where(mask & (sign > 0.0), params.sigma_lower,
                         np.where(mask & (sign < 0.0), 1.0, sigma))
        u = u - lam * sigma * dflux
        if np.any(~np.isfinite(u)):
            raise FloatingPointError("finite-volume update produced NaN/inf")
        u = np.clip(u, 0.0, 1.0)
        t += step
        while want and t >= want[0] - 1e-12:
            times.append(want[0])
            states.append(u.copy())
            want = want[1:]
    return GridSolution(centers, dxi, times, states)


def compare_l1(
    a: PiecewiseConstantState,
    b: PiecewiseConstantState,
    window: tuple[float, float],
) -> float:
    """Exact L1 distance between two piecewise-constant overlays on a window."""
    lo, hi = window
    if hi <= lo:
        raise ValueError("empty comparison window")
    return a.l1_distance(b, window=(lo, hi))
