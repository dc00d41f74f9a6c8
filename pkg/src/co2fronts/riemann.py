"""Exact solution of the single Riemann problem for the two-flux model.

A jump with u_left < u_right propagates as an admissible shock; a jump with
u_left > u_right resolves into a centered rarefaction fan, which wave-front
tracking replaces by a staircase of inadmissible expansion shocks.  The flux
switch sigma is fixed per discontinuity by the direction the saturation jumps
past a fixed observer, which reduces to comparing flux values at the two
states (the chord-slope sign is sigma-independent, so the rule is
self-consistent on piecewise-constant data).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .flux import FluxParams, Regime, char_speeds, clamp01, d2f, df, f, ustar
from .rootfind import bisect_root

SAMPLE_TOL = 1e-12
RH_TOL = 1e-12


class FrontKind(Enum):
    SHOCK = "shock"          # admissible: u_left < u_right
    EXPANSION = "expansion"  # inadmissible surrogate for a rarefaction piece


@dataclass(frozen=True)
class Front:
    """A propagating discontinuity: position, states, speed, kind, regime."""

    x: float
    u_left: float
    u_right: float
    speed: float
    kind: FrontKind
    regime: Regime

    @property
    def jump(self) -> float:
        return abs(self.u_right - self.u_left)


@dataclass(frozen=True)
class RarefactionFan:
    """Centered fan joining u_left > u_right across decreasing values.

    The fan is self-similar in y = (x - x0) / (t - t0).  Values above the
    flux maximizer travel on the full curve (y < 0 side), values below it on
    the reduced curve (y > 0 side); a fan straddling the maximizer therefore
    carries an interior slope kink at its center.
    """

    u_left: float
    u_right: float
    center: tuple[float, float] = (0.0, 0.0)

    def trailing_speed(self, params: FluxParams) -> float:
        s = df(params, self.u_left)
        sigma = 1.0 if self.u_left > ustar(params) else params.sigma_lower
        return sigma * s

    def leading_speed(self, params: FluxParams) -> float:
        s = df(params, self.u_right)
        sigma = params.sigma_lower if self.u_right < ustar(params) else 1.0
        return sigma * s

    def straddles(self, params: FluxParams) -> bool:
        return self.u_right < ustar(params) < self.u_left


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class Shock:
    front: Front


@dataclass(frozen=True)
class Rarefaction:
    fan: RarefactionFan


RiemannSolution = Constant | Shock | Rarefaction


def chord_slope(params: FluxParams, u_left: float, u_right: float) -> float:
    """Raw (unscaled) secant slope of f between the two states."""
    if u_left == u_right:
        raise ValueError("chord undefined for equal states")
    return (f(params, u_right) - f(params, u_left)) / (u_right - u_left)


def classify_sigma(params: FluxParams, u_left: float, u_right: float) -> Regime:
    """Flow regime of the jump, from the sign of the saturation change seen
    by a fixed observer as the front passes.

    Equivalent closed rule: UPPER iff f(u_right) > f(u_left), LOWER iff
    f(u_right) < f(u_left), STATIONARY on equal flux values (zero speed under
    either curve, so no sigma is needed).  Flux values agreeing to within a
    few ulps count as equal, so states generated by equal-step staircase
    arithmetic still classify as stationary.
    """
    if u_left == u_right:
        raise ValueError("equal states carry no wave")
    fl, fr = f(params, u_left), f(params, u_right)
    if abs(fr - fl) <= 1e-14 * (1.0 + abs(fl)):
        return Regime.STATIONARY
    return Regime.UPPER if fr > fl else Regime.LOWER


def shock_speed(params: FluxParams, u_left: float, u_right: float) -> float:
    """Jump speed sigma * (f(u_right) - f(u_left)) / (u_right - u_left)."""
    regime = classify_sigma(params, u_left, u_right)
    if regime is Regime.STATIONARY:
        return 0.0
    sigma = regime.sigma(params.epsilon)
    return sigma * chord_slope(params, u_left, u_right)


def make_front(params: FluxParams, x: float, u_left: float, u_right: float) -> Front:
    """Build the discontinuity joining the two states at position x."""
    regime = classify_sigma(params, u_left, u_right)
    if regime is Regime.STATIONARY:
        speed = 0.0
    else:
        speed = regime.sigma(params.epsilon) * chord_slope(params, u_left, u_right)
    kind = FrontKind.SHOCK if u_left < u_right else FrontKind.EXPANSION
    return Front(x=x, u_left=u_left, u_right=u_right, speed=speed, kind=kind, regime=regime)


def solve_riemann(
    params: FluxParams, u_left: float, u_right: float, x: float = 0.0, t: float = 0.0
) -> RiemannSolution:
    """Exact self-similar solution of the jump (u_left | u_right) at x."""
    u_left = clamp01(u_left)
    u_right = clamp01(u_right)
    if u_left == u_right:
        return Constant(u_left)
    if u_left < u_right:
        return Shock(make_front(params, x, u_left, u_right))
    return Rarefaction(RarefactionFan(u_left, u_right, center=(x, t)))


def sample_rarefaction(params: FluxParams, fan: RarefactionFan, y: float) -> float:
    """Fan value at similarity variable y = (x - x0) / (t - t0).

    Inverts sigma * f'(u) = y over [u_right, u_left] by bisection on the
    strictly decreasing slope, with sigma = 1 on the y < 0 side and
    sigma = 1 - epsilon on the y > 0 side; the center value is the flux
    maximizer.
    """
    lo_speed = fan.trailing_speed(params)
    hi_speed = fan.leading_speed(params)
    if y < lo_speed - SAMPLE_TOL or y > hi_speed + SAMPLE_TOL:
        raise ValueError(f"similarity variable {y} outside fan range "
                         f"[{lo_speed}, {hi_speed}]")
    y = min(max(y, lo_speed), hi_speed)
    us = ustar(params)
    if y == 0.0:
        return min(max(us, fan.u_right), fan.u_left)
    if y < 0.0:
        sigma = 1.0
        lo, hi = max(fan.u_right, us), fan.u_left
    else:
        sigma = params.sigma_lower
        if sigma == 0.0:
            # epsilon = 1 excludes positive fan speeds; tolerated overshoot only
            return fan.u_right
        lo, hi = fan.u_right, min(fan.u_left, us)

    def g(u: float) -> float:
        return sigma * df(params, u) - y

    return bisect_root(g, lo, hi, xtol=1e-15, residual_tol=SAMPLE_TOL)


def fan_center_slopes(params: FluxParams, tau: float) -> tuple[float, float]:
    """One-sided spatial slopes of a straddling fan at its center, age tau.

    Differentiating sigma * f'(u) = x / tau on each side gives
    1 / (tau * sigma * f''(u*)): the draining side uses sigma = 1, the
    invading side sigma = 1 - epsilon.
    """
    if tau <= 0.0:
        raise ValueError("fan age must be positive")
    curv = d2f(params, ustar(params))
    left = 1.0 / (tau * curv)
    right = 1.0 / (tau * params.sigma_lower * curv)
    return left, right


def slope_jump(params: FluxParams, tau: float) -> float:
    """Slope discontinuity 1 / (tau * eps * f''(u*)) at the center of a
    straddling fan of age tau; for the built-in flux this is
    -sqrt(M) / (2 * tau * eps)."""
    if params.epsilon == 0.0:
        raise ValueError("no flux switch for epsilon = 0")
    if tau <= 0.0:
        raise ValueError("fan age must be positive")
    return 1.0 / (tau * params.epsilon * d2f(params, ustar(params)))


@dataclass(frozen=True)
class AdmissibilityReport:
    """Outcome of the faster-family entry test, with diagnostics.

    A jump is admissible iff the faster characteristics enter it from both
    sides (non-strict, so a characteristic grazing the shock at exactly its
    speed still counts).  For admissible shocks the slower family on the
    right always enters as well; the slower family on the left may leave,
    which is reported separately.
    """

    admissible: bool
    faster_left: float
    faster_right: float
    slower_left: float
    slower_right: float
    speed: float
    grazing: bool
    left_slower_leaves: bool
    right_slower_enters: bool

    def __bool__(self) -> bool:
        return self.admissible


def check_admissibility(params: FluxParams, front: Front, tol: float = RH_TOL) -> AdmissibilityReport:
    """Test faster(u_left) >= speed >= faster(u_right)."""
    fast_l, slow_l = char_speeds(params, front.u_left)
    fast_r, slow_r = char_speeds(params, front.u_right)
    lam = front.speed
    ok = (front.u_left < front.u_right
          and fast_l >= lam - tol
          and lam >= fast_r - tol)
    return AdmissibilityReport(
        admissible=ok,
        faster_left=fast_l,
        faster_right=fast_r,
        slower_left=slow_l,
        slower_right=slow_r,
        speed=lam,
        grazing=ok and min(abs(slow_l - lam), abs(fast_l - lam), abs(fast_r - lam)) <= tol,
        left_slower_leaves=ok and slow_l < lam - tol,
        right_slower_enters=ok and lam >= slow_r - tol,
    )


def discretize_rarefaction(params: FluxParams, fan: RarefactionFan, h: float) -> list[Front]:
    """Replace the fan by expansion shocks through equally spaced values.

    ceil((u_left - u_right) / h) fronts, each jump at most h, speeds strictly
    increasing left to right by concavity.  Equal-value spacing (rather than
    equal-speed) is what bounds every jump by h.
    """
    if h <= 0.0:
        raise ValueError("step bound h must be positive")
    drop = fan.u_left - fan.u_right
    if drop <= 0.0:
        raise ValueError("fan requires u_left > u_right")
    n = max(1, math.ceil(drop / h - 1e-12))
    x0 = fan.center[0]
    values = [fan.u_left - drop * k / n for k in range(n + 1)]
    values[-1] = fan.u_right
    return [make_front(params, x0, values[k], values[k + 1]) for k in range(n)]
