import math

import numpy as np
import pytest
from scipy.integrate import quad

from shearwave import (DomainError, SteadyCoeffs, classify_layer,
                       drift_per_period, drift_profile, find_closed_orbit,
                       find_critical_points, hamiltonian, integrate_steady,
                       layer_boundaries, read_seeds, section_height,
                       to_physical, to_steady, transit_time_tau)
from shearwave.paths import (DRIFT_HEADER, TRAJECTORY_HEADER, drift_csv_rows,
                             trajectory_csv_rows)

G = 9.81


class TestIntegration:
    def test_bed_line_exactly_invariant(self, fig1_coeffs):
        co = fig1_coeffs
        traj = integrate_steady(math.pi, 0.0, co, 20.0)
        assert np.all(traj.Y == 0.0)
        assert np.all(np.diff(traj.X) < 0)  # Ak < f: steady drift to the left

    def test_center_is_stationary_over_100_periods(self, fig2_coeffs):
        co = fig2_coeffs
        center = find_critical_points(co)[1]
        t_end = 100 * 2 * math.pi / co.f
        traj = integrate_steady(center.X, center.Y, co, t_end,
                                rtol=1e-12, atol=1e-14)
        assert np.max(np.abs(traj.X - center.X)) < 1e-10
        assert np.max(np.abs(traj.Y - center.Y)) < 1e-10

    def test_hamiltonian_audit(self, fig2_coeffs):
        co = fig2_coeffs
        t_end = 100 * 2 * math.pi / co.f
        traj = integrate_steady(math.pi, 0.02, co, t_end)
        assert traj.h_drift_scaled < 1e-8

    def test_midpoint_scheme_conserves_over_long_runs(self, fig2_coeffs):
        co = fig2_coeffs
        period = 2 * math.pi / co.f
        traj = integrate_steady(math.pi, 0.02, co, 100 * period,
                                method="midpoint", dt=period / 400)
        assert traj.h_drift_scaled < 1e-6
        # No secular trend: the drift over the second half matches the first.
        half = len(traj.t) // 2
        drift_a = np.max(np.abs(traj.H[:half] - traj.H[0]))
        drift_b = np.max(np.abs(traj.H[half:] - traj.H[0]))
        assert drift_b < 2.0 * max(drift_a, 1e-12)

    def test_escape_is_truncated_and_flagged(self):
        co = SteadyCoeffs(Ak=0.5, omega=0.0, f=0.1, k=1.0)
        traj = integrate_steady(0.1, 5.0, co, 1e4)
        assert traj.truncated
        assert 30.0 < np.max(np.abs(traj.Y)) <= 701.0

    def test_preconditions(self, fig1_coeffs):
        with pytest.raises(DomainError):
            integrate_steady(0.0, -0.1, fig1_coeffs, 1.0)
        with pytest.raises(DomainError):
            integrate_steady(0.0, 0.1, fig1_coeffs, 0.0)
        with pytest.raises(DomainError):
            integrate_steady(0.0, 0.1, fig1_coeffs, 1.0, method="euler")

    def test_mirror_symmetry(self, fig2_coeffs):
        # The flow commutes with (X, t) -> (-X, -t): running forward from
        # (X0, Y0) to (X1, Y1) implies running forward from (-X1, Y1)
        # returns to (-X0, Y0) in the same time.
        co = fig2_coeffs
        t_end = 5.0
        fwd = integrate_steady(1.0, 0.03, co, t_end, rtol=1e-12, atol=1e-14)
        X1, Y1 = float(fwd.X[-1]), float(fwd.Y[-1])
        back = integrate_steady(-X1, Y1, co, t_end, rtol=1e-12, atol=1e-14)
        assert float(back.X[-1]) == pytest.approx(-1.0, abs=1e-9)
        assert float(back.Y[-1]) == pytest.approx(0.03, abs=1e-9)


class TestFrameConversion:
    def test_round_trip(self, fig2_coeffs):
        co = fig2_coeffs
        traj = integrate_steady(2.0, 0.05, co, 3.0, shifted=True)
        X_back, Y_back = to_steady(traj.t, traj.x, traj.y, co, shifted=True)
        assert np.max(np.abs(X_back - traj.X)) < 1e-12
        assert np.max(np.abs(Y_back - traj.Y)) < 1e-12

    def test_center_moves_in_a_straight_line(self, fig2_coeffs):
        co = fig2_coeffs
        center = find_critical_points(co)[1]
        t_end = 10 * 2 * math.pi / co.f
        traj = integrate_steady(center.X, center.Y, co, t_end,
                                rtol=1e-12, atol=1e-14, shifted=True)
        x, y = to_physical(traj)
        mean_speed = float((x[-1] - x[0]) / (traj.t[-1] - traj.t[0]))
        assert mean_speed == pytest.approx(co.f / co.k, rel=1e-10)
        assert np.max(np.abs(y - y[0])) < 1e-12

    def test_zero_frequency_frame_is_identity(self):
        co = SteadyCoeffs(Ak=0.0, omega=0.0, f=0.0, k=2.0)
        from shearwave.paths import Trajectory
        t = np.linspace(0, 1, 5)
        X = np.full(5, 0.7)
        Y = np.full(5, 0.4)
        traj = Trajectory(t=t, X=X, Y=Y, x=np.empty(5), y=np.empty(5),
                          H=np.zeros(5), co=co)
        x, y = to_physical(traj)
        assert np.all(x == 0.35)
        assert np.all(y == 0.2)


class TestTransitTime:
    def test_bed_closed_form_verified_by_quadrature(self, fig1_coeffs):
        # First verify the closed form against direct quadrature of
        # 2f * int dX / (f^2 - (Ak cos X)^2) over a half period, then
        # check the production route against it.
        co = fig1_coeffs
        f, b = co.f, co.Ak
        oracle, _ = quad(lambda X: 2 * f / (f * f - (b * math.cos(X)) ** 2),
                         -math.pi / 2, math.pi / 2, epsabs=1e-14, epsrel=1e-13)
        closed_form = 2 * math.pi / math.sqrt(f * f - b * b)
        assert oracle == pytest.approx(closed_form, rel=1e-12)
        tau = transit_time_tau(0.0, co)
        assert tau == pytest.approx(closed_form, rel=1e-10)
        assert tau > 2 * math.pi / f

    def test_wave_free_flow_is_exactly_periodic(self):
        co = SteadyCoeffs(Ak=0.0, omega=0.0, f=0.5, k=1.0)
        assert transit_time_tau(0.0, co) == 2 * math.pi / 0.5

    def test_routes_agree(self, fig2_coeffs):
        for Y0 in (0.002, 0.004):  # interior wave
            transit_time_tau(Y0, fig2_coeffs, check=True)
        transit_time_tau(0.5, fig2_coeffs, check=True)  # surface layer

    def test_vortex_level_has_no_transit(self, fig2_coeffs):
        assert transit_time_tau(0.02, fig2_coeffs) is None

    def test_interior_wave_slower_than_bed(self, fig2_coeffs):
        co = fig2_coeffs
        tau_bed = transit_time_tau(0.0, co)
        tau_mid = transit_time_tau(0.003, co)
        assert tau_mid > tau_bed > 2 * math.pi / co.f


class TestSectionHeight:
    def test_identity_on_the_section(self, fig2_coeffs):
        assert section_height(math.pi, 0.02, fig2_coeffs) == pytest.approx(
            0.02, abs=1e-13)
        assert section_height(0.3, 0.0, fig2_coeffs) == 0.0

    def test_recovers_crossing_from_other_phases(self, fig2_coeffs):
        # Integrate away from the section, then recover the crossing height
        # from the displaced point; it must preserve the H level.
        co = fig2_coeffs
        for Y0 in (0.002, 0.02, 0.5):
            traj = integrate_steady(math.pi, Y0, co, 3.0, rtol=1e-12, atol=1e-14)
            X1, Y1 = float(traj.X[-1]), float(traj.Y[-1])
            back = section_height(X1, Y1, co)
            assert back == pytest.approx(Y0, abs=1e-9)
            level = float(hamiltonian(math.pi, back, co))
            assert level == pytest.approx(float(traj.H[0]), abs=1e-12)

    def test_asymptote_bound_orbit_has_no_crossing(self, fig1_coeffs):
        co = fig1_coeffs
        from shearwave import find_critical_points
        y_saddle = find_critical_points(co)[0].Y
        assert section_height(0.0, y_saddle + 1.0, co) is None

    def test_trajectory_layer_is_tagged(self, fig2_coeffs):
        traj = integrate_steady(2.0, 0.03, fig2_coeffs, 1.0)
        assert traj.layer == "vortex"
        bed = integrate_steady(math.pi, 0.0, fig2_coeffs, 1.0)
        assert bed.layer == "bed_adjacent"

    def test_transit_time_accepts_a_trajectory(self, fig2_coeffs):
        co = fig2_coeffs
        traj = integrate_steady(math.pi, 0.003, co, 2.0, rtol=1e-12, atol=1e-14)
        tau_from_traj = transit_time_tau(traj, co)
        tau_from_level = transit_time_tau(0.003, co)
        assert tau_from_traj == pytest.approx(tau_from_level, rel=1e-9)
        vortex_traj = integrate_steady(math.pi, 0.02, co, 2.0)
        assert transit_time_tau(vortex_traj, co) is None


class TestLayers:
    def test_boundaries_and_layer_map(self, fig2_coeffs):
        co = fig2_coeffs
        b = layer_boundaries(co)
        assert b["Y_lower"] < b["Y_P1"] < b["Y_upper"] < b["Y_P2"]
        assert classify_layer(0.0, co, b) == "bed_adjacent"
        assert classify_layer(b["Y_lower"] / 2, co, b) == "internal_wave"
        assert classify_layer(b["Y_P1"], co, b) == "vortex"
        assert classify_layer((b["Y_upper"] + b["Y_P2"]) / 2, co, b) == "surface_wave"
        assert classify_layer(b["Y_P2"] + 1.0, co, b) == "unbounded"

    def test_single_saddle_regimes(self, fig1_coeffs):
        co = fig1_coeffs
        b = layer_boundaries(co)
        assert classify_layer(b["Y_lower"] / 2, co, b) == "internal_wave"
        assert classify_layer(b["Y_P0"] + 1.0, co, b) == "unbounded"


class TestDrift:
    def test_bed_drifts_forward(self, fig1_coeffs):
        r = drift_per_period(0.0, fig1_coeffs)
        assert r.direction == "forward"
        assert r.drift_m > 0
        assert r.layer == "bed_adjacent"

    def test_wave_free_flow_is_closed(self):
        co = SteadyCoeffs(Ak=0.0, omega=0.0, f=0.5, k=1.0)
        r = drift_per_period(0.3, co)
        assert r.direction == "closed"
        assert r.drift_m == pytest.approx(0.0, abs=1e-14)

    def test_pure_shear_with_vorticity(self):
        # Without a wave the particle speed is -omega*y exactly; the drift
        # classification must reflect its sign at every height.
        co = SteadyCoeffs(Ak=0.0, omega=-2.0, f=0.5, k=1.0)
        slow = drift_per_period(0.1, co)     # below the wave speed level
        assert slow.direction == "forward"
        fast = drift_per_period(1.0, co)     # level outruns the wave
        assert fast.direction == "always_forward"
        assert fast.drift_m > 0
        backward = drift_per_period(0.1, SteadyCoeffs(Ak=0.0, omega=2.0,
                                                      f=0.5, k=1.0))
        assert backward.direction == "backward"

    def test_direction_trichotomy_tolerance(self):
        from shearwave.paths import _trichotomy
        f = 0.5
        period = 2 * math.pi / f
        assert _trichotomy(period * (1 + 1e-13), f) == "closed"
        assert _trichotomy(period * (1 + 1e-9), f) == "forward"
        assert _trichotomy(period * (1 - 1e-9), f) == "backward"

    def test_vortex_center_straight_forward(self, fig2_coeffs):
        co = fig2_coeffs
        center = find_critical_points(co)[1]
        r = drift_per_period(center.Y, co)
        assert r.direction == "always_forward"
        assert r.mean_speed == pytest.approx(co.f / co.k, rel=1e-10)

    def test_vortex_orbit_advances_one_wavelength_per_loop(self, fig2_coeffs):
        co = fig2_coeffs
        r = drift_per_period(0.02, co)
        assert r.layer == "vortex"
        assert r.direction in ("forward", "always_forward")
        assert r.drift_m == pytest.approx(co.f * r.tau / co.k, rel=1e-12)

    def test_surface_layer_always_forward(self, fig2_coeffs):
        r = drift_per_period(0.5, fig2_coeffs)
        assert r.layer == "surface_wave"
        assert r.direction == "always_forward"
        assert r.drift_m > 0

    def test_profile_spans_layers_all_forward(self, fig2_params):
        reports = drift_profile(fig2_params, n=48)
        layers = {r.layer for r in reports}
        assert {"internal_wave", "vortex", "surface_wave"} <= layers
        assert all(r.direction in ("forward", "always_forward") for r in reports)

    def test_positive_vorticity_band_drifts_backward(self, fig4_left_params):
        reports = drift_profile(fig4_left_params,
                                levels=[0.0, 1e-7, 0.05, 0.1])
        assert reports[0].direction == "forward"
        assert reports[1].direction == "forward"
        assert reports[2].direction == "backward"
        assert reports[3].direction == "backward"


class TestClosedOrbit:
    def test_found_and_verified_for_large_positive_vorticity(self, fig4_left_params):
        orbit = find_closed_orbit(fig4_left_params)
        assert orbit is not None
        assert 0 < orbit.Y_level < 0.12
        assert orbit.verified
        assert orbit.x_close_err < 1e-10 * fig4_left_params.wavelength
        assert orbit.y_close_err < 1e-10 * fig4_left_params.h

    def test_absent_for_irrotational_waves(self, fig1_params):
        assert find_closed_orbit(fig1_params) is None


class TestFileFormats:
    def test_trajectory_rows(self, fig1_coeffs):
        traj = integrate_steady(math.pi, 0.5, fig1_coeffs, 1.0)
        rows = list(trajectory_csv_rows(traj))
        assert rows[0] == TRAJECTORY_HEADER
        assert len(rows) == len(traj.t) + 1
        assert len(rows[1].split(",")) == 6

    def test_drift_rows(self, fig2_params):
        reports = drift_profile(fig2_params, levels=[0.0, 0.02])
        rows = list(drift_csv_rows(reports, fig2_params.k))
        assert rows[0] == DRIFT_HEADER
        assert rows[1].endswith("forward,bed_adjacent")

    def test_read_seeds(self):
        text = "# seeds\n3.14 0.0\n0.0 0.5  # crest\n\n"
        assert read_seeds(text) == [(3.14, 0.0), (0.0, 0.5)]
        with pytest.raises(DomainError):
            read_seeds("1.0\n")
