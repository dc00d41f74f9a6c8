"""Wave-front tracking: piecewise-constant global solutions by event-driven
evolution of a finite set of shock and expansion-shock fronts.

The initial plume is sampled onto a piecewise-constant state, every jump is
resolved into exact shocks or an expansion-shock staircase, and the fronts
then move ballistically between binary collisions.  Each collision replaces
two fronts by at most one, so the front count drops at every event, total
variation never grows, and the evolution terminates after finitely many
events.
"""

from __future__ import annotations

import heapq
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .flux import FluxParams, Regime, sup_slope
from .interactions import TOL_SPEED, resolve_collision
from .profiles import PiecewiseProfile
from .riemann import Front, FrontKind, RarefactionFan, discretize_rarefaction, make_front

EVENT_TIME_TOL = 1e-12


@dataclass(frozen=True)
class PiecewiseConstantState:
    """Plume height at a fixed time: n breakpoints, n+1 constant values."""

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more value than breakpoints")
        if any(b >= c for b, c in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    def value_at(self, x: float) -> float:
        return self.values[bisect_right(self.breakpoints, x)]

    def tv(self) -> float:
        return sum(abs(b - a) for a, b in zip(self.values, self.values[1:]))

    def bounds(self) -> tuple[float, float]:
        return min(self.values), max(self.values)

    def area(self) -> float:
        """Integral of the height between the outer breakpoints.

        Equals the plume volume for compactly supported data (zero tails).
        """
        return sum(v * (b1 - b0) for v, b0, b1 in
                   zip(self.values[1:], self.breakpoints, self.breakpoints[1:]))

    def support_width(self) -> float:
        if not self.breakpoints:
            return 0.0
        return self.breakpoints[-1] - self.breakpoints[0]

    def l1_distance(self, other: "PiecewiseConstantState",
                    window: Optional[tuple[float, float]] = None) -> float:
        """Exact L1 distance over the window (hull of both states by default;
        outside the hull both functions are constant, so a finite default
        requires matching tail values)."""
        if window is None:
            pts = self.breakpoints + other.breakpoints
            if not pts:
                return 0.0
            window = (min(pts), max(pts))
            if self.values[0] != other.values[0] or self.values[-1] != other.values[-1]:
                raise ValueError("tails differ; pass an explicit window")
        lo, hi = window
        cuts = sorted({lo, hi, *(b for b in self.breakpoints if lo < b < hi),
                       *(b for b in other.breakpoints if lo < b < hi)})
        total = 0.0
        for a, b in zip(cuts, cuts[1:]):
            mid = 0.5 * (a + b)
            total += abs(self.value_at(mid) - other.value_at(mid)) * (b - a)
        return total


def merge_runs(breakpoints: Sequence[float], values: Sequence[float]) -> PiecewiseConstantState:
    """Drop breakpoints whose neighbouring values agree."""
    out_b: list[float] = []
    out_v: list[float] = [values[0]]
    for b, v in zip(breakpoints, values[1:]):
        if v == out_v[-1]:
            continue
        out_b.append(b)
        out_v.append(v)
    return PiecewiseConstantState(tuple(out_b), tuple(out_v))


def approximate_initial(
    profile: PiecewiseProfile | Callable[[float], float],
    delta: float,
    bounds: Optional[tuple[float, float]] = None,
) -> PiecewiseConstantState:
    """Piecewise-constant sampling of the initial plume at pitch delta.

    Piecewise-constant input passes through exactly.  Functions are sampled
    at cell midpoints and held constant per cell, which keeps the values
    inside the range of the data, cannot increase total variation, and
    converges in L1 as delta -> 0 for bounded-variation input.
    """
    if isinstance(profile, PiecewiseProfile):
        return merge_runs(profile.breakpoints, profile.values)
    if bounds is None:
        domain = getattr(profile, "domain", None)
        if domain is None:
            raise ValueError("bounds required for function profiles")
        bounds = domain
    lo, hi = bounds
    if not (delta > 0.0 and hi > lo):
        raise ValueError("need a positive pitch and a nonempty domain")
    n = max(1, round((hi - lo) / delta))
    edges = [lo + (hi - lo) * k / n for k in range(n + 1)]
    samples = [profile(0.5 * (a + b)) for a, b in zip(edges, edges[1:])]
    if any(not 0.0 <= v <= 1.0 for v in samples):
        raise ValueError("profile leaves [0, 1] on the sampling window")
    return merge_runs(edges[1:-1], samples)


def initialize_fronts(params: FluxParams, state: PiecewiseConstantState, h: float) -> list[Front]:
    """Resolve every jump of the state: up-jumps become single admissible
    shocks, down-jumps become expansion-shock staircases with jumps <= h.
    Staircase members share their breakpoint position and are ordered by
    increasing speed."""
    fronts: list[Front] = []
    for x, u_l, u_r in zip(state.breakpoints, state.values, state.values[1:]):
        if u_l < u_r:
            fronts.append(make_front(params, x, u_l, u_r))
        else:
            fan = RarefactionFan(u_l, u_r, center=(x, 0.0))
            fronts.extend(discretize_rarefaction(params, fan, h))
    return fronts


@dataclass(frozen=True)
class TrajectorySegment:
    """Straight-line life of one front: x(t) = x_start + speed * (t - t_start)."""

    front_id: int
    t_start: float
    t_end: float
    x_start: float
    x_end: float
    u_left: float
    u_right: float
    kind: FrontKind
    regime: Regime
    speed: float
    closed_by_event: bool = False


@dataclass(frozen=True)
class Event:
    t: float
    x: float
    kind: str  # "collision" | "annihilation"
    in_ids: tuple[int, int]
    out_ids: tuple[int, ...]
    tv_before: float
    tv_after: float


class _Live:
    __slots__ = ("fid", "x0", "t0", "speed", "u_left", "u_right", "kind",
                 "regime", "left", "right", "death")

    def __init__(self, fid: int, front: Front, t0: float) -> None:
        self.fid = fid
        self.x0 = front.x
        self.t0 = t0
        self.speed = front.speed
        self.u_left = front.u_left
        self.u_right = front.u_right
        self.kind = front.kind
        self.regime = front.regime
        self.left: Optional[int] = None
        self.right: Optional[int] = None
        self.death: Optional[float] = None

    def x_at(self, t: float) -> float:
        return self.x0 + self.speed * (t - self.t0)

    def snapshot(self, t: float) -> Front:
        return Front(self.x_at(t), self.u_left, self.u_right, self.speed,
                     self.kind, self.regime)


@dataclass
class Trace:
    """Complete record of one tracking run.

    Events are strictly time-ordered; each front contributes one straight
    trajectory segment, closed either by the event that consumed it or by the
    horizon.
    """

    params: FluxParams
    horizon: float
    initial: PiecewiseConstantState
    segments: list[TrajectorySegment]
    events: list[Event]

    def state_at(self, t: float) -> PiecewiseConstantState:
        if not 0.0 <= t <= self.horizon + EVENT_TIME_TOL:
            raise ValueError(f"time {t} outside [0, {self.horizon}]")
        t = min(t, self.horizon)
        live = [s for s in self.segments
                if s.t_start <= t and (t < s.t_end or not s.closed_by_event)]
        if not live:
            return PiecewiseConstantState((), (self.initial.values[0],))
        live.sort(key=lambda s: (s.x_start + s.speed * (t - s.t_start), s.speed))
        breakpoints = [s.x_start + s.speed * (t - s.t_start) for s in live]
        values = [live[0].u_left] + [s.u_right for s in live]
        # collapse zero-width intervals (coincident staircase members at t=0)
        out_b: list[float] = []
        out_v: list[float] = [values[0]]
        for b, v in zip(breakpoints, values[1:]):
            if out_b and b <= out_b[-1]:
                out_v[-1] = v
                continue
            out_b.append(b)
            out_v.append(v)
        return merge_runs(out_b, out_v)

    def sample(self, t: float, xs: Iterable[float]) -> list[float]:
        state = self.state_at(t)
        return [state.value_at(x) for x in xs]

    def front_count_at(self, t: float) -> int:
        t = min(t, self.horizon)
        return sum(1 for s in self.segments
                   if s.t_start <= t and (t < s.t_end or not s.closed_by_event))

    def event_times(self) -> list[float]:
        return [e.t for e in self.events]


def evolve(params: FluxParams, fronts: Sequence[Front], horizon: float, h: float) -> Trace:
    """Run the event loop to the time horizon.

    Collisions are predicted between spatially adjacent fronts only
    (adjacency is invariant for a scalar problem); the earliest event is
    processed, the two incoming fronts are replaced through their outer-state
    Riemann problem, and the two fresh neighbour pairs are re-examined.
    Simultaneous events are processed left-most first, co-located ties by the
    larger speed difference.
    """
    if horizon <= 0.0:
        raise ValueError("horizon must be positive")
    registry: list[_Live] = []
    ordered = sorted(fronts, key=lambda fr: (fr.x, fr.speed))
    for front in ordered:
        registry.append(_Live(len(registry), front, 0.0))
    for a, b in zip(registry, registry[1:]):
        if abs(a.u_right - b.u_left) > 1e-9:
            raise ValueError("front list is not a consistent chain of states")
        a.right = b.fid
        b.left = a.fid

    initial_state = _state_of_chain(registry)
    running_tv = sum(abs(f.u_right - f.u_left) for f in registry)

    heap: list[tuple[float, float, float, int, int, int]] = []
    seq = 0

    def predict(left: _Live, right: _Live, now: float) -> None:
        nonlocal seq
        gap_v = left.speed - right.speed
        if gap_v <= TOL_SPEED:
            return
        gap_x = max(0.0, right.x_at(now) - left.x_at(now))
        t_hit = now + gap_x / gap_v
        x_hit = left.x_at(t_hit)
        heapq.heappush(heap, (t_hit, x_hit, -gap_v, seq, left.fid, right.fid))
        seq += 1

    for a, b in zip(registry, registry[1:]):
        predict(a, b, 0.0)

    def valid(item: tuple) -> bool:
        _, _, _, _, li, ri = item
        a, b = registry[li], registry[ri]
        return a.death is None and b.death is None and a.right == ri

    events: list[Event] = []
    while heap:
        item = heapq.heappop(heap)
        if not valid(item):
            continue
        t_star = item[0]
        if t_star > horizon:
            break
        # gather simultaneous candidates and apply the tie-break order
        batch = [item]
        stash = []
        cutoff = t_star + EVENT_TIME_TOL * (1.0 + abs(t_star))
        while heap and heap[0][0] <= cutoff:
            nxt = heapq.heappop(heap)
            if valid(nxt):
                batch.append(nxt)
            # invalid candidates are dropped for good
        batch.sort(key=lambda it: (it[1], it[2]))
        chosen = batch[0]
        stash = batch[1:]
        for other in stash:
            heapq.heappush(heap, other)

        t_ev, x_ev = chosen[0], chosen[1]
        left, right = registry[chosen[4]], registry[chosen[5]]
        outcome = resolve_collision(params, left.snapshot(t_ev), right.snapshot(t_ev),
                                    t_ev, x_ev)
        left.death = t_ev
        right.death = t_ev
        running_tv += outcome.tv_after - outcome.tv_before
        out_ids: tuple[int, ...] = ()
        if outcome.outgoing:
            new = _Live(len(registry), outcome.outgoing[0], t_ev)
            registry.append(new)
            new.left, new.right = left.left, right.right
            if new.left is not None:
                registry[new.left].right = new.fid
            if new.right is not None:
                registry[new.right].left = new.fid
            out_ids = (new.fid,)
            if new.left is not None:
                predict(registry[new.left], new, t_ev)
            if new.right is not None:
                predict(new, registry[new.right], t_ev)
        else:
            la, rb = left.left, right.right
            if la is not None:
                registry[la].right = rb
            if rb is not None:
                registry[rb].left = la
            if la is not None and rb is not None:
                predict(registry[la], registry[rb], t_ev)
        events.append(Event(
            t=t_ev, x=x_ev,
            kind="annihilation" if outcome.annihilation else "collision",
            in_ids=(left.fid, right.fid),
            out_ids=out_ids,
            tv_before=running_tv + outcome.tv_before - outcome.tv_after,
            tv_after=running_tv,
        ))

    segments = []
    for live in registry:
        t_end = live.death if live.death is not None else horizon
        segments.append(TrajectorySegment(
            front_id=live.fid,
            t_start=live.t0,
            t_end=t_end,
            x_start=live.x0,
            x_end=live.x_at(t_end),
            u_left=live.u_left,
            u_right=live.u_right,
            kind=live.kind,
            regime=live.regime,
            speed=live.speed,
            closed_by_event=live.death is not None,
        ))
    return Trace(params=params, horizon=horizon, initial=initial_state,
                 segments=segments, events=events)


def _state_of_chain(registry: Sequence[_Live]) -> PiecewiseConstantState:
    if not registry:
        return PiecewiseConstantState((), (0.0,))
    breakpoints = []
    values = [registry[0].u_left]
    for live in registry:
        if breakpoints and live.x0 <= breakpoints[-1]:
            values[-1] = live.u_right
            continue
        breakpoints.append(live.x0)
        values.append(live.u_right)
    return merge_runs(breakpoints, values)


def track(
    params: FluxParams,
    profile: PiecewiseProfile | Callable[[float], float],
    horizon: float,
    h: float,
    delta: Optional[float] = None,
    bounds: Optional[tuple[float, float]] = None,
) -> Trace:
    """Convenience pipeline: sample, initialize fronts, evolve."""
    state = approximate_initial(profile, delta if delta is not None else h, bounds)
    fronts = initialize_fronts(params, state, h)
    return evolve(params, fronts, horizon, h)


@dataclass(frozen=True)
class DiagnosticsSeries:
    times: tuple[float, ...]
    tv: tuple[float, ...]
    front_count: tuple[int, ...]
    plume_area: tuple[float, ...]
    support_width: tuple[float, ...]


def diagnostics(trace: Trace, extra_times: Iterable[float] = ()) -> DiagnosticsSeries:
    """Totals at t = 0, every event time and the horizon (plus extras)."""
    times = sorted({0.0, trace.horizon, *(e.t for e in trace.events),
                    *extra_times})
    times = [t for t in times if 0.0 <= t <= trace.horizon]
    tv, count, area, width = [], [], [], []
    for t in times:
        state = trace.state_at(t)
        tv.append(state.tv())
        count.append(trace.front_count_at(t))
        area.append(state.area())
        width.append(state.support_width())
    return DiagnosticsSeries(tuple(times), tuple(tv), tuple(count),
                             tuple(area), tuple(width))


def lipschitz_bound(trace: Trace) -> float:
    """Uniform constant TV(initial) * sup|f'| bounding the L1 drift rate."""
    return trace.initial.tv() * sup_slope(trace.params)
