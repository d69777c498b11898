import math
from fractions import Fraction

import numpy as np
import pytest

from isingloops import fixtures
from isingloops.oracle import persite_log_series
from isingloops.pt_solver import (
    BLACKOUT_DELTA,
    X_CRITICAL,
    critical_point,
    f_poly_eval,
    free_energy,
    specific_heat,
    specific_heat_scan,
    symbolic_psi_pt,
)
from isingloops.ring import project_mode_sum, series_log


class TestSymbolicDeterminant:
    def test_matches_golden_form_paper(self):
        psi = symbolic_psi_pt("paper")
        assert psi.series == fixtures.pt_determinant_fixture("paper")

    def test_matches_golden_form_geometric(self):
        psi = symbolic_psi_pt("geometric")
        assert psi.series == fixtures.pt_determinant_fixture("geometric")

    def test_theta_at_zero_angles_is_f(self):
        psi = symbolic_psi_pt("paper")
        for x in (0.0, 0.1, 0.25, 0.5):
            assert abs(psi.theta(x, 0.0, 0.0) - f_poly_eval(x)) < 1e-12

    def test_theta_conjugate_mode_symmetry(self):
        psi = symbolic_psi_pt("paper")
        rng = np.random.default_rng(7)
        for _ in range(20):
            w1, w2 = rng.uniform(0, 2 * math.pi, 2)
            x = rng.uniform(0, 0.5)
            assert abs(psi.theta(x, w1, w2) - psi.theta(x, -w1, -w2)) < 1e-12

    def test_theta_minimum_at_origin(self):
        # dense-grid scan of the integrand minimum for x up to criticality
        for conv in ("paper", "geometric"):
            psi = symbolic_psi_pt(conv)
            w = np.linspace(0, 2 * math.pi, 61)
            for x in (0.05, 0.15, 0.25, X_CRITICAL):
                floor = psi.theta(x, 0.0, 0.0)
                vals = [psi.theta(x, a, b) for a in w for b in w]
                assert min(vals) >= floor - 1e-12, (conv, x)


class TestLogSeriesVersusLattice:
    """The decisive two-route check: the determinant's per-site log series
    against brute-force even-subgraph cumulants of the triangular lattice."""

    def test_geometric_convention_counts_subgraphs(self):
        psi = symbolic_psi_pt("geometric")
        series = project_mode_sum(series_log(psi.series), None)
        half = [c.rational_value() / 2 for c in series.coeffs]
        # order 6 from a degree-6 polynomial padded to nothing: recompute at
        # higher truncation via the padded series
        from isingloops.ring import XSeries

        padded = XSeries(8)
        for k, c in enumerate(psi.series.coeffs):
            padded.coeffs[k] = c
        series = project_mode_sum(series_log(padded), None)
        half = [c.rational_value() / 2 for c in series.coeffs]
        oracle = persite_log_series("pt", 8).cumulants
        for r in range(3, 9):
            assert half[r] == oracle[r], (r, half[r], oracle[r])

    def test_paper_convention_corrupts_counts(self):
        # the circulant bookkeeping attaches the wrong position shifts to
        # two of the directions: the per-site series then counts the two
        # triangles per site as -2 and goes wrong again at order 5, while
        # the plaquette order survives
        from isingloops.ring import XSeries

        psi = symbolic_psi_pt("paper")
        padded = XSeries(5)
        for k, c in enumerate(psi.series.coeffs):
            if k <= 5:
                padded.coeffs[k] = c
        series = project_mode_sum(series_log(padded), None)
        half = [c.rational_value() / 2 for c in series.coeffs]
        assert half[3] == -2
        assert half[4] == 3
        assert half[5] == -2


class TestFPolynomial:
    def test_roots(self):
        assert abs(f_poly_eval(2 - math.sqrt(3))) < 1e-12
        assert abs(f_poly_eval(2 + math.sqrt(3))) < 1e-9
        assert f_poly_eval(0.0) == 1.0

    def test_factorised_form(self):
        # f(x) = ((x^2 - 4x + 1)(x + 1))^2
        for x in np.linspace(-0.5, 1.5, 41):
            g = (x * x - 4 * x + 1) * (x + 1)
            assert abs(f_poly_eval(x) - g * g) < 1e-9

    def test_no_root_below_critical(self):
        xs = np.linspace(1e-3, 0.2, 400)
        assert all(f_poly_eval(x) > 0 for x in xs)
        assert f_poly_eval(0.2) > 0


class TestCriticalPoint:
    def test_location(self):
        crit = critical_point()
        assert abs(crit.x_c - (2 - math.sqrt(3))) < 1e-14
        assert abs(crit.tc_over_j - 1 / math.atanh(2 - math.sqrt(3))) < 1e-12

    def test_first_derivative_vanishes(self):
        crit = critical_point()
        assert abs(crit.f_prime_at_xc) < 1e-9

    def test_second_derivative_does_not_vanish(self):
        # the root is exactly double: the measured curvature is
        # 288 - 144 sqrt(3), far from zero
        crit = critical_point()
        assert abs(crit.f_second_at_xc - (288 - 144 * math.sqrt(3))) < 1e-8
        assert crit.f_second_at_xc > 38


class TestFreeEnergy:
    def test_high_temperature_limit(self):
        res = free_energy(500.0)
        assert abs(res.free_energy / 500.0 + math.log(2)) < 1e-4

    def test_positive_temperature_required(self):
        with pytest.raises(ValueError):
            free_energy(0.0)

    def test_quadrature_consistency_two_resolutions(self):
        psi = symbolic_psi_pt("paper")
        for x in (0.1, 0.2):
            a_fine = psi.log_theta_grid_average(x, 256)
            a_coarse = psi.log_theta_grid_average(x, 128)
            a_exact, _ = psi.log_theta_average(x)
            assert abs(a_fine - a_exact) < 1e-12
            assert abs(a_coarse - a_exact) < 1e-10

    def test_finite_mode_sum_agrees(self):
        # Riemann-sum consistency at L = 32
        psi = symbolic_psi_pt("paper")
        x = 0.1
        modesum = psi.finite_mode_sum(x, 32)
        exact, _ = psi.log_theta_average(x)
        assert abs(modesum - exact) / abs(exact) < 1e-4

    def test_near_critical_quadrature_converges(self):
        psi = symbolic_psi_pt("paper")
        val, err = psi.log_theta_average(X_CRITICAL)
        assert math.isfinite(val)
        assert err < 1e-8

    def test_monotone_decreasing_in_temperature(self):
        temps = np.linspace(2.0, 6.0, 9)
        vals = [free_energy(t).free_energy for t in temps]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_specific_heat_positive_and_smooth_far_from_tc(self):
        cvs = [specific_heat(t) for t in (4.5, 5.0, 5.5, 6.0)]
        assert all(cv > 0 for cv in cvs)
        assert all(abs(a - b) < 0.2 for a, b in zip(cvs, cvs[1:]))
        assert cvs[0] < 1.0


class TestScan:
    def test_blackout_window_enforced(self):
        with pytest.raises(ValueError):
            specific_heat_scan(window=(1e-6, 1e-2), points_per_side=2)

    def test_explicit_grid_too_close_rejected(self):
        crit = critical_point()
        t_inside = 1.0 / math.atanh(crit.x_c + BLACKOUT_DELTA / 2)
        with pytest.raises(ValueError):
            specific_heat_scan(temperatures=[t_inside])

    def test_small_scan_smoke(self):
        fit = specific_heat_scan(points_per_side=4, window=(1e-3, 1e-2))
        assert fit.fit_constant < 0
        assert fit.r_squared > 0.98
        assert len(fit.points) == 8
