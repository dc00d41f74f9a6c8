"""Initial plume shapes: piecewise-constant data and smooth test profiles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence


@dataclass(frozen=True)
class PiecewiseProfile:
    """Piecewise-constant plume height: n breakpoints, n+1 values.

    The leftmost value extends to -inf and the rightmost to +inf.
    """

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more value than breakpoints")
        if any(b >= c for b, c in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(not 0.0 <= v <= 1.0 for v in self.values):
            raise ValueError("plume heights must lie in [0, 1]")

    def __call__(self, x: float) -> float:
        idx = 0
        for b in self.breakpoints:
            if x < b:
                break
            idx += 1
        return self.values[idx]

    @classmethod
    def from_pieces(
        cls, pieces: Sequence[tuple[float, float, float]], background: float = 0.0
    ) -> "PiecewiseProfile":
        """Build from disjoint (x_lo, x_hi, value) intervals on a background."""
        pieces = sorted(pieces)
        breakpoints: list[float] = []
        values: list[float] = [background]
        for x_lo, x_hi, v in pieces:
            if x_hi <= x_lo:
                raise ValueError("empty interval")
            if breakpoints and x_lo < breakpoints[-1]:
                raise ValueError("overlapping intervals")
            if breakpoints and x_lo == breakpoints[-1]:
                breakpoints.append(x_hi)
                values.extend([v, background])
                continue
            breakpoints.extend([x_lo, x_hi])
            values.extend([v, background])
        merged_b: list[float] = []
        merged_v: list[float] = [values[0]]
        for b, v in zip(breakpoints, values[1:]):
            if v == merged_v[-1]:
                continue
            merged_b.append(b)
            merged_v.append(v)
        return cls(tuple(merged_b), tuple(merged_v))


@dataclass(frozen=True)
class SmoothProfile:
    """Twice continuously differentiable plume shape on a finite domain.

    ``extrema`` lists interior critical points as (position, 'max'|'min');
    pass it explicitly for analytic profiles, or leave empty for monotone
    data.
    """

    fn: Callable[[float], float]
    slope: Callable[[float], float]
    domain: tuple[float, float]
    extrema: tuple[tuple[float, str], ...] = field(default=())

    def __call__(self, x: float) -> float:
        return self.fn(x)


def box(x_lo: float, x_hi: float, height: float, background: float = 0.0) -> PiecewiseProfile:
    return PiecewiseProfile.from_pieces([(x_lo, x_hi, height)], background)


def step(x0: float, left: float, right: float) -> PiecewiseProfile:
    if left == right:
        return PiecewiseProfile((), (left,))
    return PiecewiseProfile((x0,), (left, right))


def three_state(x1: float, x2: float, left: float, middle: float, right: float) -> PiecewiseProfile:
    """Jump data (left | middle | right) with jumps at x1 < x2."""
    if not x1 < x2:
        raise ValueError("jump positions must be ordered")
    return PiecewiseProfile((x1, x2), (left, middle, right))


def parabola_cap(center: float, peak: float, coeff: float, halfwidth: float) -> SmoothProfile:
    """peak - coeff * (x - center)^2 on [center - halfwidth, center + halfwidth]."""
    if peak - coeff * halfwidth**2 < 0.0:
        raise ValueError("profile dips below zero on its domain")
    return SmoothProfile(
        fn=lambda x: peak - coeff * (x - center) ** 2,
        slope=lambda x: -2.0 * coeff * (x - center),
        domain=(center - halfwidth, center + halfwidth),
        extrema=((center, "max"),),
    )


def parabola_valley(center: float, trough: float, coeff: float, halfwidth: float) -> SmoothProfile:
    """trough + coeff * (x - center)^2 on [center - halfwidth, center + halfwidth]."""
    if trough + coeff * halfwidth**2 > 1.0:
        raise ValueError("profile exceeds one on its domain")
    return SmoothProfile(
        fn=lambda x: trough + coeff * (x - center) ** 2,
        slope=lambda x: 2.0 * coeff * (x - center),
        domain=(center - halfwidth, center + halfwidth),
        extrema=((center, "min"),),
    )


def smooth_ramp(x0: float, x1: float, left: float, right: float) -> SmoothProfile:
    """Monotone C^2 transition from ``left`` to ``right`` across [x0, x1].

    Quintic smoothstep: flat to second order at both ends, so it glues onto
    constants without curvature jumps.
    """
    if not x0 < x1:
        raise ValueError("ramp ends must be ordered")
    span = x1 - x0

    def s(x: float) -> float:
        z = min(1.0, max(0.0, (x - x0) / span))
        return z * z * z * (10.0 - 15.0 * z + 6.0 * z * z)

    def ds(x: float) -> float:
        z = (x - x0) / span
        if z <= 0.0 or z >= 1.0:
            return 0.0
        return 30.0 * z * z * (1.0 - z) ** 2 / span

    return SmoothProfile(
        fn=lambda x: left + (right - left) * s(x),
        slope=lambda x: (right - left) * ds(x),
        domain=(x0 - 0.5 * span, x1 + 0.5 * span),
        extrema=(),
    )


def hat(center: float, halfwidth: float, peak: float) -> Callable[[float], float]:
    """Triangular plume peak * max(0, 1 - |x - center| / halfwidth)."""
    return lambda x: peak * max(0.0, 1.0 - abs(x - center) / halfwidth)
