"""Pairwise wave analysis: collision prediction, resolution and the
separation thresholds for a shock next to a rarefaction (or its
expansion-shock surrogate).

With two flux curves, a shock's speed can match a characteristic speed taken
from the other curve, so some shock/rarefaction pairs that would always
interact under a single flux instead separate, and interacting pairs may
stall at an asymptotic middle state instead of eliminating it in finite
time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .flux import FluxParams, df, f, ustar
from .riemann import Front, RarefactionFan, chord_slope, make_front, shock_speed
from .rootfind import bisect_root

# Fronts whose speeds agree within TOL_SPEED never collide: interacting pairs
# can converge to exactly characteristic speed, and equality must not fire
# spurious events.
TOL_SPEED = 1e-10
MIDDLE_STATE_TOL = 1e-12
ROOT_TOL = 1e-10


class PairCase(Enum):
    SHOCK_RAREFACTION = "A"                      # always approach
    SHOCK_SHOCK = "B"                            # always approach
    RAREFACTION_SHOCK_INTERACT = "C_interact"
    RAREFACTION_SHOCK_SEPARATE = "C_separate"
    SHOCK_EXPANSION_INTERACT = "a_interact"
    SHOCK_EXPANSION_SEPARATE = "a_separate"
    EXPANSION_SHOCK_INTERACT = "c_interact"
    EXPANSION_SHOCK_SEPARATE = "c_separate"
    NON_APPROACHING = "NonApproaching"           # decreasing data


@dataclass(frozen=True)
class Classification:
    """Case label plus the speed comparison and thresholds behind it.

    left_speed / right_speed are the speeds of the two waves flanking the
    middle state (for rarefactions, the edge characteristic nearest the other
    wave).  ``threshold`` is the critical right state at which the waves
    switch between approaching and separating, when one is defined.
    ``asymptotic`` / ``persistent`` describe the long-time middle state for
    interacting rarefaction-shock data.  ``inferred`` marks mixed-sign
    expansion-shock sub-cases resolved purely by the speed comparison.
    """

    case: PairCase
    left_speed: float
    right_speed: float
    threshold: Optional[float] = None
    asymptotic: Optional[float] = None
    persistent: Optional[bool] = None
    inferred: bool = False


class InconsistentStatesError(ValueError):
    """Colliding fronts disagree about their shared middle state."""


@dataclass(frozen=True)
class InteractionOutcome:
    """Result of a binary collision: at most one outgoing front.

    Outer states are simply joined; equal outer states annihilate.  Total
    variation never increases and drops by twice the smaller incoming jump
    whenever the middle state is not between the outer ones.
    """

    outgoing: tuple[Front, ...]
    tv_before: float
    tv_after: float
    t: float
    x: float

    @property
    def annihilation(self) -> bool:
        return not self.outgoing


def collision_time(
    x_i: float,
    speed_i: float,
    x_j: float,
    speed_j: float,
    t0: float = 0.0,
    tol_speed: float = TOL_SPEED,
) -> Optional[tuple[float, float]]:
    """Meeting time and place of two fronts alive at t0 with x_i <= x_j.

    None when the left front is not strictly faster (separating or parallel
    within tol_speed).
    """
    if x_i > x_j:
        raise ValueError("left front must not start right of the right front")
    gap = speed_i - speed_j
    if gap <= tol_speed:
        return None
    t = t0 + (x_j - x_i) / gap
    return t, x_i + speed_i * (t - t0)


def resolve_collision(
    params: FluxParams, left: Front, right: Front, t: float, x: float
) -> InteractionOutcome:
    """Join the outer states of two colliding fronts at (t, x)."""
    if abs(left.u_right - right.u_left) > MIDDLE_STATE_TOL:
        raise InconsistentStatesError(
            f"middle states differ: {left.u_right} vs {right.u_left}")
    u_left, u_right = left.u_left, right.u_right
    tv_before = left.jump + right.jump
    if u_left == u_right:
        outgoing: tuple[Front, ...] = ()
    else:
        outgoing = (make_front(params, x, u_left, u_right),)
    return InteractionOutcome(
        outgoing=outgoing,
        tv_before=tv_before,
        tv_after=abs(u_right - u_left),
        t=t,
        x=x,
    )


def threshold_tilde_M(params: FluxParams, u_mid: float) -> float:
    """Critical right state for data rising from u_mid <= u*.

    The root x > u_mid of (f(x) - f(u_mid)) / (x - u_mid) = (1-eps) f'(u_mid):
    a shock from u_mid up to any u_right at or below it outruns the leading
    edge of a rarefaction dropping onto u_mid, so the waves separate.
    """
    us = ustar(params)
    if not 0.0 <= u_mid <= us + 1e-15:
        raise ValueError("threshold defined for u_mid at or below the maximizer")
    slope_mid = df(params, u_mid)
    if params.epsilon == 0.0 or slope_mid <= 0.0:
        return u_mid
    target = params.sigma_lower * slope_mid
    f_mid = f(params, u_mid)

    def chord_defect(x: float) -> float:
        return (f(params, x) - f_mid) - target * (x - u_mid)

    # Peak of the defect sits where f' equals the target slope; bracket the
    # nontrivial root between that peak and u = 1.
    x_peak = bisect_root(lambda u: df(params, u) - target, u_mid, 1.0, xtol=1e-13)
    if chord_defect(1.0) >= 0.0:
        return 1.0
    return bisect_root(chord_defect, x_peak, 1.0, xtol=ROOT_TOL)


def threshold_bar_M(params: FluxParams, u_mid: float) -> float:
    """Critical right state for data rising from u_mid > u*.

    Saturates at 1 when even the full jump separates; otherwise the root of
    (1-eps)(f(x) - f(u_mid)) / (x - u_mid) = f'(u_mid).
    """
    us = ustar(params)
    if not us < u_mid < 1.0:
        raise ValueError("threshold defined for u_mid above the maximizer")
    if params.epsilon == 0.0:
        return u_mid
    slope_mid = df(params, u_mid)
    f_mid = f(params, u_mid)
    if params.sigma_lower * (f(params, 1.0) - f_mid) / (1.0 - u_mid) > slope_mid:
        return 1.0

    def chord_defect(x: float) -> float:
        return params.sigma_lower * (f(params, x) - f_mid) - slope_mid * (x - u_mid)

    scaled = slope_mid / params.sigma_lower if params.sigma_lower > 0.0 else None
    if scaled is None or scaled < df(params, 1.0):
        x_peak = 1.0
    else:
        x_peak = bisect_root(lambda u: df(params, u) - scaled, u_mid, 1.0, xtol=1e-13)
    return bisect_root(chord_defect, x_peak, 1.0, xtol=ROOT_TOL)


def asymptotic_eta_tilde(params: FluxParams, u_right: float) -> Optional[float]:
    """Middle state where the draining-side fan characteristic speed equals
    the reduced-flux shock speed into u_right > u*.

    Root of f'(x) = (1-eps)(f(u_right) - f(x)) / (u_right - x) on (u*, u_right).
    A backward shock whose left state reaches this value stops eating the fan
    and rides at exactly characteristic speed.  None when no root exists
    (epsilon = 0: the relation degenerates to tangency at u_right itself).
    """
    us = ustar(params)
    if not u_right > us:
        raise ValueError("persistent backward shock needs u_right above the maximizer")
    if params.epsilon == 0.0:
        return None
    if params.sigma_lower == 0.0:
        return us
    f_right = f(params, u_right)

    def residual(x: float) -> float:
        return df(params, x) - params.sigma_lower * (f_right - f(params, x)) / (u_right - x)

    lo, hi = us, u_right * (1.0 - 1e-14)
    if residual(lo) <= 0.0 or residual(hi) >= 0.0:
        return None
    return bisect_root(residual, lo, hi, xtol=ROOT_TOL)


def asymptotic_eta_bar(params: FluxParams, u_right: float, lo: float = 0.0) -> Optional[float]:
    """Companion state where the invading-side fan characteristic speed
    equals the full-flux shock speed: (1-eps) f'(x) = chord(x, u_right).

    Searched on (lo, min(u*, u_right)); None when the configuration admits no
    such state.
    """
    us = ustar(params)
    hi = min(us, u_right) * (1.0 - 1e-14)
    if hi <= lo:
        return None
    f_right = f(params, u_right)

    def residual(x: float) -> float:
        return params.sigma_lower * df(params, x) - (f_right - f(params, x)) / (u_right - x)

    r_lo, r_hi = residual(lo), residual(hi)
    if r_lo == 0.0:
        return lo
    if r_lo * r_hi >= 0.0:
        return None
    return bisect_root(residual, lo, hi, xtol=ROOT_TOL)


def _fastest_expansion_left_state(u_left: float, u_mid: float, h: Optional[float]) -> float:
    """Left state of the right-most expansion shock approximating a fan from
    u_left down to u_mid with jumps bounded by h (the full jump when h is
    None, i.e. a single-front surrogate)."""
    if h is None:
        return u_left
    n = max(1, math.ceil((u_left - u_mid) / h - 1e-12))
    return u_mid + (u_left - u_mid) / n


def classify_pair(
    params: FluxParams,
    u_left: float,
    u_mid: float,
    u_right: float,
    h: Optional[float] = None,
    exact: bool = True,
) -> Classification:
    """Classify the wave pair generated by three-state jump data.

    ``exact`` selects true rarefaction fans; otherwise fans are represented
    by expansion shocks with jumps bounded by ``h`` (single-front surrogate
    when h is None).  Classification is a total function of the data: the
    labels for separating cases coincide with the critical-state conditions,
    both being the statement that the right wave is at least as fast as the
    left one.
    """
    if u_mid == u_left or u_mid == u_right:
        raise ValueError("degenerate middle state")
    us = ustar(params)

    if u_left > u_mid > u_right:
        # Two fans (or their surrogates): an expansion shock's speed lies
        # between its fan's trailing and leading speeds, so the waves drift
        # apart in either representation.
        if exact:
            left_speed = RarefactionFan(u_left, u_mid).leading_speed(params)
            right_speed = RarefactionFan(u_mid, u_right).trailing_speed(params)
        else:
            left_speed = shock_speed(
                params, _fastest_expansion_left_state(u_left, u_mid, h), u_mid)
            n = max(1, math.ceil((u_mid - u_right) / h - 1e-12)) if h else 1
            right_speed = shock_speed(
                params, u_mid, u_mid - (u_mid - u_right) / n)
        return Classification(PairCase.NON_APPROACHING, left_speed, right_speed)

    if u_left < u_mid and u_right < u_mid:
        lam_shock = shock_speed(params, u_left, u_mid)
        if exact:
            fan = RarefactionFan(u_mid, u_right)
            return Classification(PairCase.SHOCK_RAREFACTION, lam_shock,
                                  fan.trailing_speed(params))
        lam_exp = shock_speed(params, u_mid, u_right)
        raw_lm = chord_slope(params, u_left, u_mid)
        threshold = _case_a_threshold(params, u_mid, raw_lm)
        separate = lam_exp >= lam_shock - TOL_SPEED
        inferred = (lam_shock > 0.0) != (lam_exp > 0.0)
        case = (PairCase.SHOCK_EXPANSION_SEPARATE if separate
                else PairCase.SHOCK_EXPANSION_INTERACT)
        return Classification(case, lam_shock, lam_exp, threshold=threshold,
                              inferred=inferred)

    if u_left < u_mid < u_right:
        return Classification(PairCase.SHOCK_SHOCK,
                              shock_speed(params, u_left, u_mid),
                              shock_speed(params, u_mid, u_right))

    # u_mid < u_left and u_mid < u_right: fan (or expansions) left, shock right
    lam_shock = shock_speed(params, u_mid, u_right)
    if exact:
        fan = RarefactionFan(u_left, u_mid)
        lam_edge = fan.leading_speed(params)
        threshold = threshold_tilde_M(params, u_mid) if u_mid <= us \
            else threshold_bar_M(params, u_mid)
        separate = lam_shock >= lam_edge - TOL_SPEED
        if separate:
            return Classification(PairCase.RAREFACTION_SHOCK_SEPARATE,
                                  lam_edge, lam_shock, threshold=threshold)
        asymptotic = asymptotic_eta_tilde(params, u_right) if u_right > us \
            else asymptotic_eta_bar(params, u_right, lo=u_mid)
        persistent = asymptotic is not None and u_left >= asymptotic
        return Classification(PairCase.RAREFACTION_SHOCK_INTERACT,
                              lam_edge, lam_shock, threshold=threshold,
                              asymptotic=asymptotic, persistent=persistent)
    u_e = _fastest_expansion_left_state(u_left, u_mid, h)
    lam_exp = shock_speed(params, u_e, u_mid)
    separate = lam_shock >= lam_exp - TOL_SPEED
    inferred = (lam_exp < 0.0) != (lam_shock < 0.0)
    case = (PairCase.EXPANSION_SHOCK_SEPARATE if separate
            else PairCase.EXPANSION_SHOCK_INTERACT)
    return Classification(case, lam_exp, lam_shock, inferred=inferred)


def _case_a_threshold(params: FluxParams, u_mid: float, raw_lm: float) -> Optional[float]:
    """Critical bottom state below which an expansion shock dropping from
    u_mid outruns the shock arriving from the left with raw chord raw_lm."""
    f_mid = f(params, u_mid)
    if raw_lm > 0.0:
        # Shock rides the full flux at speed raw_lm; the expansion shock uses
        # the reduced flux when moving right.
        if u_mid > 0.0 and params.sigma_lower * (f_mid - f(params, 0.0)) / u_mid < raw_lm:
            return 0.0

        def defect(x: float) -> float:
            return params.sigma_lower * (f_mid - f(params, x)) - raw_lm * (u_mid - x)

        lo, hi = 0.0, u_mid * (1.0 - 1e-14)
        if defect(lo) * defect(hi) > 0.0:
            return None
        return bisect_root(defect, lo, hi, xtol=ROOT_TOL)
    # Backward shock at (1-eps) * raw_lm; the expansion shock outruns it on
    # the full flux.
    target = params.sigma_lower * raw_lm

    def defect(x: float) -> float:
        return (f_mid - f(params, x)) - target * (u_mid - x)

    lo, hi = 0.0, u_mid * (1.0 - 1e-14)
    if defect(lo) * defect(hi) > 0.0:
        return None
    return bisect_root(defect, lo, hi, xtol=ROOT_TOL)
