import numpy as np
import pytest

from co2fronts.flux import FluxParams, sup_slope
from co2fronts.profiles import PiecewiseProfile, box, hat, step, three_state
from co2fronts.riemann import FrontKind, make_front
from co2fronts.tracker import (PiecewiseConstantState, approximate_initial,
                               diagnostics, evolve, initialize_fronts,
                               lipschitz_bound, track)

P = FluxParams(1.0, 0.4)


def random_state(rng, max_jumps=20):
    n = rng.integers(1, max_jumps + 1)
    breaks = np.sort(rng.uniform(-2.0, 2.0, n))
    while np.any(np.diff(breaks) < 1e-6):
        breaks = np.sort(rng.uniform(-2.0, 2.0, n))
    values = [float(rng.uniform(0, 1))]
    for _ in range(n):
        v = float(rng.uniform(0, 1))
        while abs(v - values[-1]) < 1e-6:
            v = float(rng.uniform(0, 1))
        values.append(v)
    return PiecewiseProfile(tuple(float(b) for b in breaks), tuple(values))


class TestApproximateInitial:
    def test_box_passthrough(self):
        state = approximate_initial(box(0.0, 1.0, 0.6), 0.1)
        assert state.breakpoints == (0.0, 1.0)
        assert state.values == (0.0, 0.6, 0.0)
        assert state.tv() == pytest.approx(1.2)

    def test_hat_sampling(self):
        profile = hat(0.0, 1.0, 0.5)
        state = approximate_initial(profile, 0.5, bounds=(-2.0, 2.0))
        assert state.tv() <= 1.0 + 1e-12
        assert min(state.values) >= 0.0 and max(state.values) <= 0.5

    def test_constant_profile(self):
        state = approximate_initial(lambda x: 0.3, 0.1, bounds=(0.0, 1.0))
        assert state.breakpoints == ()
        assert state.tv() == 0.0

    def test_sampling_never_increases_tv(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            profile = random_state(rng, 10)
            analytic_tv = sum(abs(b - a) for a, b in
                              zip(profile.values, profile.values[1:]))
            state = approximate_initial(profile.__call__, 0.05, bounds=(-2.5, 2.5))
            assert state.tv() <= analytic_tv + 1e-12
            assert min(profile.values) <= min(state.values)
            assert max(state.values) <= max(profile.values)

    def test_l1_convergence_under_refinement(self):
        profile = hat(0.0, 1.0, 0.5)
        errs = []
        for delta in (0.2, 0.1, 0.05, 0.025):
            state = approximate_initial(profile, delta, bounds=(-1.5, 1.5))
            xs = np.linspace(-1.5, 1.5, 6001)
            approx = np.array([state.value_at(float(x)) for x in xs])
            exact = np.array([profile(float(x)) for x in xs])
            errs.append(np.trapezoid(np.abs(approx - exact), xs))
        assert errs[-1] < errs[0]
        assert errs[-1] < 0.02

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            approximate_initial(lambda x: 1.5, 0.1, bounds=(0, 1))


class TestInitializeFronts:
    def test_box_plume_fronts(self):
        state = approximate_initial(box(0.0, 1.0, 0.6), 0.1)
        fronts = initialize_fronts(P, state, 0.2)
        assert len(fronts) == 4
        shock = fronts[0]
        assert shock.kind is FrontKind.SHOCK
        assert shock.speed == pytest.approx(0.4, abs=1e-12)
        stairs = fronts[1:]
        assert [s.speed for s in stairs] == pytest.approx([0.0, 0.24, 0.48], abs=1e-12)
        assert all(s.kind is FrontKind.EXPANSION for s in stairs)
        assert all(s.x == 1.0 for s in stairs)

    def test_monotone_decreasing_gives_expansions_only(self):
        state = PiecewiseConstantState((0.0, 1.0, 2.0), (0.9, 0.6, 0.3, 0.0))
        fronts = initialize_fronts(P, state, 0.1)
        assert all(fr.kind is FrontKind.EXPANSION for fr in fronts)
        trace = evolve(P, fronts, 5.0, 0.1)
        assert trace.events == []

    def test_single_up_jump(self):
        fronts = initialize_fronts(P, PiecewiseConstantState((0.0,), (0.2, 0.5)), 0.1)
        assert len(fronts) == 1


class TestEvolve:
    def test_two_shock_merge(self):
        fronts = [make_front(P, 0.0, 0.1, 0.2), make_front(P, 1.0, 0.2, 1.0)]
        trace = evolve(P, fronts, 3.0, 0.1)
        assert len(trace.events) == 1
        ev = trace.events[0]
        assert ev.t == pytest.approx(1.0 / 0.82, abs=1e-9)
        assert ev.kind == "collision"
        final = trace.state_at(3.0)
        assert final.values == (0.1, 1.0)
        seg = [s for s in trace.segments if s.t_start == ev.t][0]
        assert seg.speed == pytest.approx(-0.06, abs=1e-12)

    def test_shock_rarefaction_terminal_state(self):
        # left state 0.2, plateau 1.0 on [0, 1], right state 0.3
        state = PiecewiseConstantState((0.0, 1.0), (0.2, 1.0, 0.3))
        fronts = initialize_fronts(P, state, 0.01)
        trace = evolve(P, fronts, 60.0, 0.01)
        final = trace.state_at(60.0)
        assert final.values == (0.2, 0.3)
        survivor = [s for s in trace.segments if not s.closed_by_event]
        assert len(survivor) == 1
        assert survivor[0].speed == pytest.approx(0.5, abs=0.02)

    def test_separating_data_has_no_events(self):
        # threshold boundary: shock exactly as fast as the staircase ahead of it
        state = PiecewiseConstantState((0.0, 1.0), (0.5, 0.3, 0.46))
        fronts = initialize_fronts(P, state, 0.05)
        trace = evolve(P, fronts, 50.0, 0.05)
        assert trace.events == []

    def test_annihilation_event(self):
        state = PiecewiseConstantState((0.0, 1.0), (0.2, 0.5, 0.2))
        fronts = initialize_fronts(P, state, 1.0)
        trace = evolve(P, fronts, 50.0, 1.0)
        ann = [e for e in trace.events if e.kind == "annihilation"]
        assert len(ann) == 1
        assert ann[0].tv_before - ann[0].tv_after == pytest.approx(0.6)

    def test_determinism(self):
        rng = np.random.default_rng(8)
        profile = random_state(rng)
        t1 = track(P, profile, 4.0, 0.05)
        t2 = track(P, profile, 4.0, 0.05)
        assert t1.events == t2.events
        assert t1.segments == t2.segments


class TestSampling:
    def test_t0_matches_initial(self):
        state = approximate_initial(box(0.0, 1.0, 0.6), 0.1)
        fronts = initialize_fronts(P, state, 0.2)
        trace = evolve(P, fronts, 2.0, 0.2)
        assert trace.state_at(0.0).breakpoints == state.breakpoints
        assert trace.state_at(0.0).values == state.values

    def test_single_shock_translation(self):
        fronts = [make_front(P, 0.0, 0.2, 0.3)]
        trace = evolve(P, fronts, 4.0, 0.1)
        assert fronts[0].speed == pytest.approx(0.5)
        assert trace.sample(2.0, [0.9]) == [0.2]
        assert trace.sample(2.0, [1.1]) == [0.3]

    def test_time_bounds_enforced(self):
        trace = evolve(P, [make_front(P, 0.0, 0.2, 0.3)], 1.0, 0.1)
        with pytest.raises(ValueError):
            trace.state_at(-0.5)
        with pytest.raises(ValueError):
            trace.state_at(1.5)


class TestDiagnostics:
    def test_case_b_tv_unchanged(self):
        fronts = [make_front(P, 0.0, 0.1, 0.2), make_front(P, 1.0, 0.2, 1.0)]
        trace = evolve(P, fronts, 3.0, 0.1)
        series = diagnostics(trace)
        assert series.tv[0] == pytest.approx(0.9)
        assert series.tv[-1] == pytest.approx(0.9)
        assert all(b <= a + 1e-12 for a, b in zip(series.tv, series.tv[1:]))

    def test_front_count_non_increasing(self):
        state = PiecewiseConstantState((0.0, 1.0), (0.2, 1.0, 0.3))
        fronts = initialize_fronts(P, state, 0.05)
        trace = evolve(P, fronts, 60.0, 0.05)
        series = diagnostics(trace)
        assert all(b <= a for a, b in zip(series.front_count, series.front_count[1:]))

    def test_l1_lipschitz_bound(self):
        rng = np.random.default_rng(12)
        for _ in range(10):
            profile = random_state(rng, 8)
            trace = track(P, profile, 3.0, 0.1)
            const = lipschitz_bound(trace)
            times = np.linspace(0.0, 3.0, 7)
            for t1 in times:
                for t2 in times:
                    if t2 <= t1:
                        continue
                    d = trace.state_at(float(t1)).l1_distance(
                        trace.state_at(float(t2)),
                        window=(-8.0, 8.0))
                    assert d <= const * (t2 - t1) + 1e-9


class TestTrackingInvariants:
    def test_random_states_full_battery(self):
        rng = np.random.default_rng(100)
        for _ in range(30):
            params = FluxParams(rng.uniform(1, 10), rng.uniform(0, 1))
            profile = random_state(rng)
            trace = track(params, profile, 3.0, 0.1)
            smax = sup_slope(params)
            # interactions only rejoin values present after front initialization
            initial_values = {s.u_left for s in trace.segments if s.t_start == 0.0}
            initial_values |= {s.u_right for s in trace.segments if s.t_start == 0.0}
            # every event reduces the front count; events are time-ordered
            ts = [e.t for e in trace.events]
            assert ts == sorted(ts)
            assert len(trace.events) <= len(
                [s for s in trace.segments if s.t_start == 0.0])
            lo0, hi0 = trace.initial.bounds()
            for seg in trace.segments:
                assert abs(seg.speed) <= smax + 1e-12
                assert seg.u_left in initial_values
                assert seg.u_right in initial_values
            for e in trace.events:
                assert e.tv_after <= e.tv_before + 1e-12
            for t in np.linspace(0, 3.0, 5):
                state = trace.state_at(float(t))
                lo, hi = state.bounds()
                assert lo >= lo0 - 1e-12 and hi <= hi0 + 1e-12


class TestStateOps:
    def test_l1_distance_shifted_step(self):
        a = PiecewiseConstantState((0.0,), (1.0, 0.0))
        b = PiecewiseConstantState((0.25,), (1.0, 0.0))
        assert a.l1_distance(b) == pytest.approx(0.25)

    def test_area_and_support(self):
        s = PiecewiseConstantState((0.0, 1.0), (0.0, 0.6, 0.0))
        assert s.area() == pytest.approx(0.6)
        assert s.support_width() == pytest.approx(1.0)
