import math
import unittest

import numpy as np

from hardy.errors import DomainError, GradientDegenerate, InsufficientWindow, PreconditionViolated
from hardy.exponents import Params, c_h, hardy_roots, improved_roots
from hardy.family import Annulus, ImprovedHardy, PureHardy, RadialFamily, Zero
from hardy.ode import (
    Monotone, Status, Trend, decay_fit, flux_balance, integrate, integrate_from,
    pl_alternative, quotient_extrema_scan, ratio_trend,
)
from hardy.util import GridSpec


class TestIntegrate(unittest.TestCase):

    def test_hardy_power(self):
        params, V = Params(2, 3), PureHardy(3 / 16)
        traj = integrate(params, V, 1.0, 1.0, -0.75, 100.0, tol=1e-9)
        self.assertIs(traj.status, Status.COMPLETED)
        self.assertIs(traj.monotone, Monotone.DECREASING)
        exact = traj.nodes ** -0.75
        np.testing.assert_allclose(traj.values, exact, rtol=1e-6)
        np.testing.assert_allclose(traj.local_exponent, -0.75, atol=1e-6)

    def test_general_p_power(self):
        params = Params(3, 5)
        V = PureHardy(c_h(params) / 2)
        alpha = hardy_roots(params, V.lam).lower
        traj = integrate_from(params, V, RadialFamily(alpha), 1.0, 10.0, tol=1e-10)
        np.testing.assert_allclose(traj.values, traj.nodes ** alpha, rtol=1e-6)
        np.testing.assert_allclose(traj.local_exponent, alpha, atol=1e-5)

    def test_constant_is_preserved(self):
        traj = integrate(Params(2, 3), Zero(), 1.0, 2.5, 0.0, 50.0)
        self.assertIs(traj.status, Status.COMPLETED)
        self.assertIs(traj.monotone, Monotone.CONSTANT)
        np.testing.assert_allclose(traj.values, 2.5, rtol=1e-12)

    def test_initial_data_checks(self):
        params = Params(3, 5)
        with self.assertRaises(DomainError):
            integrate(params, Zero(), 1.0, 1.0, 0.0, 10.0)
        with self.assertRaises(DomainError):
            integrate(params, Zero(), 1.0, -1.0, 1.0, 10.0)
        with self.assertRaises(DomainError):
            integrate(params, Zero(), 10.0, 1.0, 1.0, 1.0)
        with self.assertRaises(DomainError):
            integrate(params, ImprovedHardy(0.1), 0.5, 1.0, -1.0, 10.0)

    def test_phi_reaches_zero(self):
        # phi = 10/r - 9 vanishes at r = 10/9
        traj = integrate(Params(2, 3), Zero(), 1.0, 1.0, -10.0, 10.0)
        self.assertIs(traj.status, Status.PHI_ZERO)
        self.assertAlmostEqual(traj.stop_radius, 10 / 9, places=6)

    def test_gradient_reaches_zero(self):
        with self.assertRaises(GradientDegenerate):
            integrate(Params(4, 3), PureHardy(1.0), 1.0, 1.0, 1e-3, 100.0)
        traj = integrate(Params(2, 3), PureHardy(1.0), 1.0, 1.0, 1e-3, 100.0)
        self.assertIs(traj.status, Status.GRADIENT_ZERO)
        self.assertLess(traj.stop_radius, 100.0)

    def test_convergence_order(self):
        params, V = Params(2, 3), PureHardy(3 / 16)
        errors = []
        for tol in (1e-6, 1e-6 / 16):
            traj = integrate(params, V, 1.0, 1.0, -0.75, 100.0, tol=tol)
            errors.append(np.max(np.abs(traj.values / traj.nodes ** -0.75 - 1)))
        self.assertGreaterEqual(errors[0] / errors[1], 4.0)

    def test_scaling(self):
        params = Params(3, 5)
        V = PureHardy(c_h(params) / 2)
        traj = integrate_from(params, V, RadialFamily(hardy_roots(params, V.lam).upper), 1.0, 10.0)
        scaled = traj.scaled(2.0)
        r = np.array([1.5, 4.0, 9.0])
        np.testing.assert_allclose(scaled(r), 2 * traj(r), rtol=1e-14)
        np.testing.assert_allclose(scaled.derivatives(r)[1], 2 * traj.derivatives(r)[1], rtol=1e-14)
        with self.assertRaises(DomainError):
            traj(20.0)

    def test_flux_balance(self):
        params, V = Params(2, 3), PureHardy(3 / 16)
        traj = integrate(params, V, 1.0, 1.0, -0.75, 100.0, tol=1e-10, nodes=64)
        defects, relative = flux_balance(traj)
        self.assertEqual(len(defects), 63)
        self.assertLess(np.max(np.abs(relative)), 1e-6)

    def test_frame(self):
        traj = integrate(Params(2, 3), Zero(), 1.0, 1.0, -0.5, 10.0, nodes=32)
        frame = traj.frame()
        self.assertEqual(list(frame.columns), ["r", "phi", "dphi", "flux", "local_exponent"])
        self.assertEqual(len(frame), 32)


class TestDecayFit(unittest.TestCase):

    def test_power_decay(self):
        traj = integrate(Params(2, 3), PureHardy(3 / 16), 1.0, 1.0, -0.75, 1e4, tol=1e-10)
        self.assertAlmostEqual(decay_fit(traj), -0.75, delta=1e-6)
        self.assertAlmostEqual(decay_fit(traj, (100.0, 1e4)), -0.75, delta=1e-6)

    def test_window_too_small(self):
        traj = integrate(Params(2, 3), Zero(), 1.0, 1.0, 0.0, 10.0, nodes=64)
        self.assertAlmostEqual(decay_fit(traj), 0.0, delta=1e-10)
        with self.assertRaises(InsufficientWindow):
            decay_fit(traj, (1.0, 1.1))


class TestRatioTrend(unittest.TestCase):

    def test_trends(self):
        x = np.linspace(0, 10, 200)
        self.assertIs(ratio_trend(-x)[0], Trend.VANISHING_MONOTONE)
        self.assertIs(ratio_trend(x)[0], Trend.BOUNDED_AWAY)
        self.assertIs(ratio_trend(np.zeros(200))[0], Trend.BOUNDED_AWAY)
        self.assertIs(ratio_trend(np.sin(x * 5))[0], Trend.OSCILLATING)

    def test_eventually_monotone(self):
        x = np.linspace(0, 10, 200)
        trend, start = ratio_trend(-np.abs(x - 2))
        self.assertIs(trend, Trend.VANISHING_MONOTONE)
        self.assertLess(start, 50)


class TestPhragmenLindelof(unittest.TestCase):

    def setUp(self):
        self.params = Params(3, 5)
        self.V = PureHardy(c_h(self.params) / 2)
        self.lower, self.upper = hardy_roots(self.params, self.V.lam)
        self.mid = RadialFamily((self.lower + self.upper) / 2)

    def test_domination(self):
        diagnostic = pl_alternative(self.params, RadialFamily(self.lower), self.mid, Annulus(3.0))
        self.assertIs(diagnostic.trend, Trend.VANISHING_MONOTONE)
        self.assertEqual(diagnostic.supports, "domination")
        self.assertEqual(diagnostic.monotone_from, 3.0)
        self.assertTrue(diagnostic.finite_horizon)

    def test_non_smallness(self):
        diagnostic = pl_alternative(self.params, RadialFamily(self.upper), self.mid, Annulus(3.0))
        self.assertIs(diagnostic.trend, Trend.BOUNDED_AWAY)
        self.assertEqual(diagnostic.supports, "non_smallness")

    def test_constant_ratio(self):
        diagnostic = pl_alternative(self.params, self.mid.scaled(0.5), self.mid, Annulus(3.0))
        self.assertIs(diagnostic.trend, Trend.BOUNDED_AWAY)
        self.assertAlmostEqual(diagnostic.limsup_estimate, 0.5, places=12)

    def test_scaling_invariance(self):
        u = RadialFamily(self.lower)
        first = pl_alternative(self.params, u, self.mid, Annulus(3.0))
        second = pl_alternative(self.params, u.scaled(1e6), self.mid.scaled(1e-3), Annulus(3.0))
        self.assertIs(first.trend, second.trend)
        self.assertAlmostEqual(second.limsup_estimate / first.limsup_estimate, 1e9, delta=1e-3)

    def test_horizon(self):
        diagnostic = pl_alternative(self.params, RadialFamily(self.lower), self.mid, Annulus(3.0), horizon=1e4)
        self.assertEqual(diagnostic.horizon, 1e4)
        self.assertAlmostEqual(diagnostic.r[-1], 1e4)
        diagnostic = pl_alternative(self.params, RadialFamily(self.lower), self.mid, Annulus(3.0, 50.0))
        self.assertEqual(diagnostic.horizon, 50.0)

    def test_trajectory_ratio(self):
        traj = integrate_from(self.params, self.V, RadialFamily(self.lower), 3.0, 1e3)
        diagnostic = pl_alternative(self.params, traj, self.mid, Annulus(3.0))
        self.assertEqual(diagnostic.horizon, traj.r1)
        self.assertEqual(diagnostic.supports, "domination")


class TestQuotientScan(unittest.TestCase):

    def test_pure_powers(self):
        params = Params(3, 5)
        V = PureHardy(c_h(params) / 2)
        lower, upper = hardy_roots(params, V.lam)
        report = quotient_extrema_scan(params, RadialFamily(lower), RadialFamily((lower + upper) / 2), V, Annulus(1.0, 100.0))
        self.assertEqual(report.trend, "decreasing")
        self.assertEqual(report.critical_points, ())
        self.assertFalse(report.counterexample)

    def test_improved_pair(self):
        params = Params(2, 3)
        eps = 1 / 8
        beta = improved_roots(params, eps).lower
        u = RadialFamily(-0.5, beta, -0.5)
        v = RadialFamily(-0.5, beta, 0.5)
        report = quotient_extrema_scan(params, u, v, ImprovedHardy(eps), Annulus(20.0, 1e6))
        self.assertEqual(report.trend, "decreasing")
        self.assertFalse(report.counterexample)

    def test_supersolution_is_not_a_subsolution(self):
        params = Params(3, 5)
        V = PureHardy(c_h(params) / 2)
        lower, upper = hardy_roots(params, V.lam)
        with self.assertRaises(PreconditionViolated):
            quotient_extrema_scan(params, RadialFamily((lower + upper) / 2), RadialFamily(lower), V, Annulus(1.0, 100.0))

    def test_monotonicity_is_required(self):
        params = Params(2, 3)
        with self.assertRaises(PreconditionViolated):
            quotient_extrema_scan(
                params, RadialFamily(-0.75), RadialFamily(0.0), PureHardy(3 / 16), Annulus(1.0, 10.0), GridSpec(nodes=64),
            )
