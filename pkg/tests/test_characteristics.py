import numpy as np
import pytest

from co2fronts.characteristics import (CharGrid, char_field, corner_path,
                                       shock_formation_time, smooth_solve)
from co2fronts.flux import FluxParams, char_speeds, df
from co2fronts.profiles import (box, parabola_cap, parabola_valley,
                                smooth_ramp, step)
from co2fronts.tracker import track

P = FluxParams(1.0, 0.4)


class TestCornerPath:
    def test_initial_speed_closed_form(self):
        # peak value 0.3: f' = 0.4, start speed (1 - eps/2) * 0.4
        cp = corner_path(P, parabola_cap(0.0, 0.3, 1.0, 0.5), 0.3)
        assert cp.initial_speed == pytest.approx(0.32, abs=1e-12)

    def test_richardson_extrapolated_start_speed(self):
        for M, eps, peak in [(1.0, 0.4, 0.3), (4.0, 0.2, 0.25), (10.0, 0.7, 0.15)]:
            p = FluxParams(M, eps)
            prof = parabola_cap(0.0, peak, 0.4, 0.5)
            cp = corner_path(p, prof, 0.2)
            h = 0.02
            d1 = (cp.position_at(h) - cp.gamma[0]) / h
            d2 = (cp.position_at(h / 2) - cp.gamma[0]) / (h / 2)
            rich = 2.0 * d2 - d1
            expect = (1.0 - 0.5 * eps) * df(p, peak)
            assert rich == pytest.approx(expect, rel=0.01)

    def test_speed_bracketing(self):
        cp = corner_path(P, parabola_cap(0.0, 0.3, 1.0, 0.5), 0.4)
        c = df(P, 0.3)
        assert np.all(cp.gamma_dot >= (1.0 - P.epsilon) * c - 1e-9)
        assert np.all(cp.gamma_dot <= c + 1e-9)

    def test_one_sided_slopes_opposite_signs(self):
        cp = corner_path(P, parabola_cap(0.0, 0.3, 1.0, 0.5), 0.4)
        assert np.all(cp.ux_minus[1:] > 0.0)
        assert np.all(cp.ux_plus[1:] < 0.0)

    def test_single_flux_limit_rides_characteristic(self):
        p0 = FluxParams(1.0, 0.0)
        cp = corner_path(p0, parabola_cap(0.0, 0.3, 1.0, 0.5), 0.3)
        assert cp.initial_speed == pytest.approx(df(p0, 0.3))
        assert np.allclose(cp.gamma_dot, df(p0, 0.3), atol=1e-6)

    def test_negative_peak_speed_mirrors(self):
        # peak above the maximizer: corner drifts left at (1 - eps/2) f'
        prof = parabola_cap(0.0, 0.8, 0.5, 0.4)
        cp = corner_path(P, prof, 0.3)
        c = df(P, 0.8)
        assert c < 0.0
        assert cp.initial_speed == pytest.approx((1.0 - 0.2) * c, abs=1e-12)
        assert np.all(cp.gamma_dot <= (1.0 - P.epsilon) * c + 1e-9)
        assert np.all(cp.gamma_dot >= c - 1e-9)

    def test_peak_at_maximizer_rejected(self):
        with pytest.raises(ValueError):
            corner_path(P, parabola_cap(0.0, 0.5, 1.0, 0.4), 0.3)

    def test_gradient_blowup_flagged(self):
        # steep cap: the draining-flank denominator 1 + u0' f'' t crosses zero
        # at the corner feet around t ~ 0.88 for this shape
        cp = corner_path(P, parabola_cap(0.0, 0.3, 4.0, 0.25), 2.0)
        assert cp.blowup
        assert cp.blowup_time is not None and cp.blowup_time < 2.0


class TestSmoothSolve:
    def test_constant_data(self):
        prof = smooth_ramp(0.0, 1.0, 0.4, 0.4)
        assert smooth_solve(P, prof, 0.7, [0.1, 0.9]) == pytest.approx([0.4, 0.4])

    def test_minimum_opens_plateau(self):
        prof = parabola_valley(0.0, 0.2, 0.3, 0.8)
        vals = smooth_solve(P, prof, 1.0, [0.37, 0.5, 0.59])
        assert vals == pytest.approx([0.2, 0.2, 0.2], abs=1e-12)
        outside = smooth_solve(P, prof, 1.0, [0.3, 0.7])
        assert all(v > 0.2 for v in outside)

    def test_plateau_width_grows_linearly(self):
        prof = parabola_valley(0.0, 0.2, 0.3, 0.8)
        fast, slow = char_speeds(P, 0.2)
        for t in (0.25, 0.5, 1.0):
            xs = np.linspace(-0.5, 1.0, 3001)
            vals = np.array(smooth_solve(P, prof, t, xs))
            plateau = xs[np.abs(vals - 0.2) < 1e-10]
            width = plateau.max() - plateau.min()
            assert width == pytest.approx(P.epsilon * abs(df(P, 0.2)) * t, abs=1e-3)
            assert plateau.min() == pytest.approx(slow * t, abs=1e-3)
            assert plateau.max() == pytest.approx(fast * t, abs=1e-3)

    def test_values_ride_characteristics(self):
        prof = smooth_ramp(0.0, 2.0, 0.8, 0.1)
        t = 0.3
        for xi in (0.2, 0.7, 1.1, 1.6):
            u0 = prof(xi)
            s = df(P, u0)
            sigma = 1.0 if s * prof.slope(xi) > 0.0 else P.sigma_lower
            x = xi + sigma * s * t
            got = smooth_solve(P, prof, t, [x])[0]
            assert got == pytest.approx(u0, abs=1e-8)

    def test_switch_locus_slope_scaling(self):
        # monotone decreasing data crossing the maximizer: one-sided slopes
        # at the switch locus differ by the transported-slope denominators
        prof = smooth_ramp(0.0, 2.0, 0.8, 0.1)
        t = 0.3
        from co2fronts.rootfind import bisect_root
        xi_star = bisect_root(lambda x: prof(x) - 0.5, 0.0, 2.0, xtol=1e-13)
        x_star = xi_star  # f'(u*) = 0: the locus does not translate
        d = 1e-5
        u_m, u_0, u_p = smooth_solve(P, prof, t, [x_star - d, x_star, x_star + d])
        slope_left = (u_0 - u_m) / d
        slope_right = (u_p - u_0) / d
        u0p = prof.slope(xi_star)
        from co2fronts.flux import d2f
        expect_left = u0p / (1.0 + u0p * d2f(P, 0.5) * t)
        expect_right = u0p / (1.0 + P.sigma_lower * u0p * d2f(P, 0.5) * t)
        assert slope_left == pytest.approx(expect_left, rel=0.01)
        assert slope_right == pytest.approx(expect_right, rel=0.01)

    def test_post_shock_queries_rejected(self):
        prof = smooth_ramp(0.0, 1.0, 0.1, 0.8)  # increasing data steepens
        t_shock = shock_formation_time(P, prof)
        with pytest.raises(ValueError):
            smooth_solve(P, prof, t_shock * 1.01, [0.5])


class TestCharField:
    def test_constant_state_two_straight_families(self):
        field = char_field(P, 0.2, CharGrid(n_seeds=4, x_range=(0.0, 1.0), t_end=1.0))
        slopes = set()
        for p in field.polylines:
            (t0, x0), (t1, x1) = p.vertices[0], p.vertices[-1]
            slopes.add(round((x1 - x0) / (t1 - t0), 9))
        assert slopes == {0.6, 0.36}

    def test_maximizer_state_coincident_vertical(self):
        field = char_field(P, 0.5, CharGrid(n_seeds=3, x_range=(0.0, 1.0), t_end=1.0))
        for p in field.polylines:
            (t0, x0), (t1, x1) = p.vertices[0], p.vertices[-1]
            assert x1 == pytest.approx(x0, abs=1e-12)

    def test_lines_terminate_on_admissible_shock(self):
        trace = track(P, step(0.5, 0.2, 1.0), 2.0, 0.1)
        field = char_field(P, trace,
                           CharGrid(n_seeds=6, x_range=(-1.0, 0.4), per_front=0))
        hit = [p for p in field.polylines if p.vertices[-1][0] < 2.0 - 1e-9]
        assert hit
        for p in hit:
            t_end, x_end = p.vertices[-1]
            assert x_end == pytest.approx(0.5 - 0.12 * t_end, abs=1e-9)

    def test_two_slope_clusters_left_of_backward_shock(self):
        # the constant region left of the shock carries both families
        trace = track(P, step(0.5, 0.2, 1.0), 2.0, 0.1)
        field = char_field(P, trace,
                           CharGrid(n_seeds=6, x_range=(-1.5, 0.0), per_front=0))
        first_slopes = set()
        for p in field.polylines:
            (t0, x0), (t1, x1) = p.vertices[0], p.vertices[1]
            first_slopes.add(round((x1 - x0) / (t1 - t0), 9))
        assert first_slopes == {0.6, 0.36}

    def test_expansion_shocks_emit_lines(self):
        trace = track(P, step(0.0, 0.8, 0.2), 1.0, 0.2)
        field = char_field(P, trace, CharGrid(n_seeds=2, per_front=2))
        emitted = [p for p in field.polylines if p.vertices[0][0] > 0.0]
        assert emitted
