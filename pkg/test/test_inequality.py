import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from hardy.errors import DomainError, PreconditionViolated
from hardy.exponents import Params, c_h, hardy_roots
from hardy.family import Annulus, ImprovedHardy, PureHardy, RadialFamily, Verdict
from hardy.inequality import (
    Quadruple, admissible_pair, convexity_gap, convexity_gaps, power_ratio, quadruple_suite, regimes_for,
    random_hardy_pair, random_improved_pair, superposition_check, superposition_suite,
    supersolution_difference_check,
)
from hardy.util import GridSpec


bases = st.floats(min_value=1e-20, max_value=1e20)
weights = st.floats(min_value=1e-20, max_value=1e20)


class TestConvexityGap(unittest.TestCase):

    def test_examples(self):
        self.assertAlmostEqual(convexity_gap(Quadruple(2, 1, 1, 1, 2)), 0.5, places=15)
        self.assertAlmostEqual(convexity_gap(Quadruple(1, 1, 1, 1, 3)), 0.0, places=15)
        self.assertEqual(convexity_gap(Quadruple(3, 7, 2, 5, 1)), 0.0)

    def test_validation(self):
        with self.assertRaises(DomainError):
            Quadruple(-1, 1, 1, 1, 2)
        with self.assertRaises(DomainError):
            Quadruple(1, 1, 0, 1, 2)
        with self.assertRaises(DomainError):
            Quadruple(1, 1, 1, 1, 0)

    def test_log_space(self):
        self.assertAlmostEqual(power_ratio(1e200, 1e200, 6.0) / 1e200, 1.0, places=10)
        gap = convexity_gap(Quadruple(1e150, 1e150, 1e150, 1e150, 6))
        self.assertTrue(np.isfinite(gap))
        self.assertLessEqual(abs(gap), 1e-10 * 1e150)

    def test_zero_numerator(self):
        self.assertEqual(float(power_ratio(0.0, 2.0, 3.0)), 0.0)
        self.assertAlmostEqual(convexity_gap(Quadruple(0, 1, 1, 1, 2)), 0.5, places=15)

    @settings(max_examples=300, deadline=None)
    @given(bases, bases, weights, weights, st.floats(min_value=1.0, max_value=6.0))
    def test_convex(self, a, b, c, d, q):
        gap, scale = convexity_gaps(a, b, c, d, q)
        self.assertGreaterEqual(float(gap), -1e-12 * float(scale))

    @settings(max_examples=300, deadline=None)
    @given(bases, bases, weights, weights, st.floats(min_value=1e-3, max_value=1.0))
    def test_concave(self, a, b, c, d, q):
        gap, scale = convexity_gaps(a, b, c, d, q)
        self.assertLessEqual(float(gap), 1e-12 * float(scale))

    @settings(max_examples=300, deadline=None)
    @given(st.floats(1e-10, 1e10), st.floats(1e-10, 1e10), st.floats(1e-10, 1e10), st.floats(0.1, 6.0))
    def test_equality_when_proportional(self, a, b, c, q):
        gap, scale = convexity_gaps(a, b, c, b * c / a, q)
        self.assertLessEqual(abs(float(gap)), 1e-10 * float(scale))


class TestQuadrupleSuite(unittest.TestCase):

    def test_regimes_pass(self):
        for regime in ("convex", "concave", "equality", "strict"):
            report = quadruple_suite(regime, samples=20_000, seed=1, shards=4)
            self.assertTrue(report.passed, report.to_dict())
            self.assertEqual(report.samples, 20_000)

    def test_reproducible(self):
        first = quadruple_suite("convex", samples=5000, seed=7, shards=3)
        second = quadruple_suite("convex", samples=5000, seed=7, shards=3, n_proc=2)
        self.assertEqual(first.worst, second.worst)
        self.assertEqual(first.worst_margin, second.worst_margin)

    def test_unknown_regime(self):
        with self.assertRaises(DomainError):
            quadruple_suite("linear", samples=10)

    def test_regimes_for(self):
        self.assertEqual(regimes_for(0.5), ("concave", "equality"))
        self.assertEqual(regimes_for(1.0), ("convex", "concave", "equality"))
        self.assertEqual(regimes_for(3.0), ("convex", "equality", "strict"))
        with self.assertRaises(DomainError):
            regimes_for(0.0)

    def test_fixed_exponent(self):
        for q in (0.5, 3.0):
            for regime in regimes_for(q):
                report = quadruple_suite(regime, samples=4000, seed=2, shards=2, q=q)
                self.assertTrue(report.passed, report.to_dict())
                self.assertEqual(report.worst[-1], q)
                self.assertEqual(report.to_dict()["q"], q)

    def test_regime_outside_fixed_exponent(self):
        with self.assertRaises(DomainError):
            quadruple_suite("concave", samples=10, q=3.0)


class TestSuperposition(unittest.TestCase):

    def setUp(self):
        self.params = Params(3, 5)
        self.V = PureHardy(c_h(self.params) / 2)
        self.lower, self.upper = hardy_roots(self.params, self.V.lam)
        self.ann = Annulus(1.0, 100.0)

    def test_difference_is_a_subsolution(self):
        u = RadialFamily(self.lower)
        v = RadialFamily((self.lower + self.upper) / 2)
        u, v = admissible_pair(u, v, self.ann.grid(GridSpec(nodes=512)))
        report = superposition_check(self.params, u, v, self.V, self.ann)
        self.assertTrue(report.holds)
        self.assertIs(report.expected, Verdict.SUBSOLUTION)
        self.assertIsNone(report.first_violation)

    def test_ordering_is_required(self):
        u = RadialFamily(self.lower)
        v = RadialFamily((self.lower + self.upper) / 2)
        with self.assertRaises(PreconditionViolated) as ctx:
            superposition_check(self.params, u, v.scaled(10.0), self.V, self.ann)
        self.assertIsNotNone(ctx.exception.node)

    def test_sub_and_super_are_required(self):
        v = RadialFamily(self.lower, c=0.5)
        with self.assertRaises(PreconditionViolated):
            superposition_check(self.params, RadialFamily((self.lower + self.upper) / 2, c=2.0), v, self.V, self.ann)

    def test_needs_p_at_least_two(self):
        with self.assertRaises(DomainError):
            superposition_check(Params(1.5, 3), RadialFamily(-1.0), RadialFamily(-0.5), self.V, self.ann)

    def test_random_pairs(self):
        records, failures = superposition_suite(trials=40, seed=3)
        self.assertEqual(len(records), 40)
        self.assertEqual(failures, [])
        improved = [record for record in records if record["family"] == "improved"]
        self.assertEqual(len(improved), 20)
        self.assertTrue(any(record["holds"] for record in improved))

    def test_random_improved_pair_is_admissible(self):
        params, V, ann, u, v = random_improved_pair(np.random.default_rng(11))
        r = ann.grid(GridSpec(nodes=128))
        self.assertTrue(np.all(v(r) <= u(r)))
        self.assertIsInstance(V, ImprovedHardy)
        self.assertGreaterEqual(ann.r0, 1e3)
        report = superposition_check(params, u, v, V, ann)
        self.assertTrue(report.holds)

    def test_random_pair_is_admissible(self):
        params, V, ann, u, v = random_hardy_pair(np.random.default_rng(11))
        r = ann.grid(GridSpec(nodes=128))
        self.assertTrue(np.all(v(r) <= u(r)))
        self.assertFalse(params.conformal)


class TestSupersolutionDifference(unittest.TestCase):

    def setUp(self):
        self.params = Params(1.5, 3)
        self.V = PureHardy(c_h(self.params) / 2)
        self.lower, self.upper = hardy_roots(self.params, self.V.lam)
        self.ann = Annulus(1.0, 100.0)

    def test_difference_is_a_supersolution(self):
        u = RadialFamily((self.lower + self.upper) / 2)
        v = RadialFamily(self.lower)
        u, v = admissible_pair(u, v, self.ann.grid(GridSpec()))
        report = supersolution_difference_check(self.params, u, v, self.V, self.ann)
        self.assertTrue(report.holds)
        self.assertIs(report.expected, Verdict.SUPERSOLUTION)

    def test_homogeneous_difference(self):
        v = RadialFamily(self.lower)
        report = supersolution_difference_check(self.params, v.scaled(2.0), v, self.V, self.ann)
        self.assertTrue(report.holds)

    def test_needs_p_at_most_two(self):
        with self.assertRaises(DomainError):
            supersolution_difference_check(Params(3, 5), RadialFamily(-1.0), RadialFamily(-0.5), self.V, self.ann)
