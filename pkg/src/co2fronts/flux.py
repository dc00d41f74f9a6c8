"""Two-flux fractional-flow model for a buoyant plume with residual trapping.

An advancing plume invades pore space on the reduced (lower) flux curve
``(1 - epsilon) * f`` while a receding plume drains on the full (upper) curve
``f``.  Both curves share the concave shape of the fractional-flow function

    f(u) = u * (1 - u) / (u * (M - 1) + 1)

with common maximizer ``u* = 1 / (1 + sqrt(M))``.  Every derivative used by
the solvers is closed-form; downstream root-finders rely on df being smooth
and strictly decreasing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

# States within DOMAIN_TOL of [0, 1] are clamped; beyond it they are rejected.
# Interaction arithmetic can drift states marginally outside the unit interval.
DOMAIN_TOL = 1e-12


@dataclass(frozen=True)
class ConcaveCurve:
    """A user-supplied concave flux: C^2 on [0,1], f(0)=f(1)=0, f'' < 0.

    ``argmax`` is the saturation where the slope vanishes.  Supplying a curve
    overrides the built-in fractional-flow shape; the trapping factor epsilon
    still scales it for the invading regime.
    """

    value: Callable[[float], float]
    slope: Callable[[float], float]
    curvature: Callable[[float], float]
    argmax: float


@dataclass(frozen=True)
class FluxParams:
    """Material pair defining both flux curves.

    M        mobility ratio of invading CO2 to ambient brine, M >= 1
    epsilon  residual trapping fraction in [0, 1]; epsilon = 0 collapses the
             two curves into one (classical single-flux transport)
    curve    optional custom concave flux replacing the fractional-flow shape
    """

    M: float
    epsilon: float
    curve: Optional[ConcaveCurve] = None

    def __post_init__(self) -> None:
        if self.curve is None and not self.M >= 1.0:
            raise ValueError(f"mobility ratio must satisfy M >= 1, got {self.M}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")

    @property
    def sigma_lower(self) -> float:
        return 1.0 - self.epsilon


class Regime(Enum):
    """Flow regime carried by a discontinuity.

    UPPER: draining side of the switch (observer sees the saturation drop),
    full flux, sigma = 1.  LOWER: invading side (saturation rises), reduced
    flux, sigma = 1 - epsilon.  STATIONARY is reserved for zero-speed jumps
    where both curves give speed 0 and no sigma choice is needed.
    """

    UPPER = "upper"
    LOWER = "lower"
    STATIONARY = "stationary"

    def sigma(self, epsilon: float) -> Optional[float]:
        if self is Regime.UPPER:
            return 1.0
        if self is Regime.LOWER:
            return 1.0 - epsilon
        return None


def clamp01(u: float, tol: float = DOMAIN_TOL) -> float:
    """Clamp u into [0,1]; raise if it lies outside by more than tol."""
    if u < -tol or u > 1.0 + tol:
        raise ValueError(f"saturation {u!r} outside [0, 1]")
    return min(1.0, max(0.0, u))


def f(params: FluxParams, u: float) -> float:
    """Upper-curve flux value at saturation u."""
    u = clamp01(u)
    if params.curve is not None:
        return params.curve.value(u)
    return u * (1.0 - u) / (u * (params.M - 1.0) + 1.0)


def df(params: FluxParams, u: float) -> float:
    """Closed-form slope f'(u); strictly decreasing in u."""
    u = clamp01(u)
    if params.curve is not None:
        return params.curve.slope(u)
    q = params.M - 1.0
    return (1.0 - 2.0 * u - q * u * u) / (q * u + 1.0) ** 2


def d2f(params: FluxParams, u: float) -> float:
    """Closed-form curvature f''(u) = -2M / ((M-1)u + 1)^3 < 0."""
    u = clamp01(u)
    if params.curve is not None:
        return params.curve.curvature(u)
    return -2.0 * params.M / (u * (params.M - 1.0) + 1.0) ** 3


def ustar(params: FluxParams) -> float:
    """Common maximizer of both flux curves, 1 / (1 + sqrt(M))."""
    if params.curve is not None:
        return params.curve.argmax
    return 1.0 / (1.0 + math.sqrt(params.M))


def char_speeds(params: FluxParams, u: float) -> tuple[float, float]:
    """(faster, slower) characteristic speeds at u.

    The two families travel at f'(u) and (1-eps) f'(u); which one is faster
    flips at u*, where both vanish.  Both speeds share the sign of u* - u.
    """
    s = df(params, u)
    scaled = params.sigma_lower * s
    if s >= scaled:
        return s, scaled
    return scaled, s


def sup_slope(params: FluxParams) -> float:
    """sup |f'| over [0,1]; bounds every front speed.

    f' decreases monotonically (f'' < 0), so the extremes sit at u = 0 and
    u = 1.  For the built-in flux this is max(1, 1/M) = 1.
    """
    return max(abs(df(params, 0.0)), abs(df(params, 1.0)))
