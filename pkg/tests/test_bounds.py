"""Exact breakdown bounds for ranking medians and the reverse-mass witness."""

import unittest

import numpy as np

from src.breakdown import (
    BreakdownQuery,
    attainable_deltas,
    breakdown_curve_bounds,
    epsilon_minus,
    epsilon_plus,
    reverse_attack,
)
from src.breakdown.bounds import no_far_rankings
from src.consensus import metric_median
from src.dists import (
    make_named,
    point_mass,
    random_plackett_luce,
    relabel_items,
    total_variation,
    uniform,
)
from src.perms import Permutation, distance_matrix, perm_index, reverse


def named_cases():
    sigma0 = Permutation((2, 4, 1, 3))
    return [make_named(kind, sigma0) for kind in ("uniform-ish", "pointmass-ish", "bucket-ish")]


class TestReverseAttack(unittest.TestCase):

    def test_zero_budget_is_identity(self):
        """Test a zero budget leaves p unchanged."""
        p = random_plackett_luce(4, 0)
        self.assertTrue(reverse_attack(p, 0.0).equals(p))

    def test_point_mass_full_budget(self):
        """Test the full budget moves a point mass onto its reversal."""
        sigma0 = Permutation((1, 3, 2))
        q = reverse_attack(point_mass(sigma0), 2.0)
        self.assertTrue(q.equals(point_mass(reverse(sigma0))))

    def test_total_variation_is_half_budget(self):
        """Test the attack costs half its L1 budget in TV."""
        p = random_plackett_luce(4, 1)
        mass = p.prob(metric_median(p).median)
        for eps in (0.0, 0.3 * mass, mass, 2 * mass):
            self.assertAlmostEqual(total_variation(p, reverse_attack(p, eps)), eps / 2, places=12)

    def test_budget_errors(self):
        """Test negative and oversized budgets."""
        p = random_plackett_luce(4, 1)
        with self.assertRaises(ValueError):
            reverse_attack(p, -0.1)
        with self.assertRaises(ValueError):
            reverse_attack(p, 2 * p.prob(metric_median(p).median) + 0.01)


class TestBounds(unittest.TestCase):

    def test_uniform_breaks_for_free(self):
        """Test both bounds vanish on the uniform distribution."""
        p = uniform(4)
        for delta in attainable_deltas(4):
            self.assertEqual(epsilon_plus(p, delta).value, 0.0)
            self.assertEqual(epsilon_minus(p, delta).value, 0.0)

    def test_point_mass_upper_is_one(self):
        """Test the upper bound of a point mass is one."""
        p = point_mass(Permutation((3, 1, 4, 2)))
        for delta in attainable_deltas(4):
            upper = epsilon_plus(p, delta)
            self.assertAlmostEqual(upper.value, 1.0, places=12)
            self.assertTrue(upper.condition_ok)
            self.assertLessEqual(epsilon_minus(p, delta).value, 1.0 + 1e-12)

    def test_zero_delta(self):
        """Test delta = 0 costs nothing."""
        p = random_plackett_luce(4, 2)
        self.assertEqual(epsilon_plus(p, 0.0).value, 0.0)
        self.assertEqual(epsilon_minus(p, 0.0).value, 0.0)
        self.assertEqual(epsilon_minus(p, -0.5).value, 0.0)

    def test_delta_errors(self):
        """Test invalid deltas and metrics."""
        p = random_plackett_luce(4, 2)
        with self.assertRaises(ValueError):
            epsilon_plus(p, 1.5)
        with self.assertRaises(ValueError):
            BreakdownQuery(p, 2.0)
        with self.assertRaises(ValueError):
            BreakdownQuery(p, 0.5, metric="hamming")

    def test_size_limits(self):
        """Test the lower bound item limit."""
        with self.assertRaises(ValueError):
            epsilon_minus(uniform(6), 0.5)

    def test_bucket_ish_upper(self):
        """Test the upper bound on bucket-ish."""
        p = make_named("bucket-ish", Permutation((1, 2, 3, 4)), eta=0.95, gap=0.1)
        upper = epsilon_plus(p, 1 / 6)
        self.assertAlmostEqual(upper.value, 0.095, places=9)
        self.assertTrue(upper.condition_ok)
        self.assertEqual(upper.sigma, Permutation((2, 1, 3, 4)))

    def test_sandwich(self):
        """Test the lower bound never exceeds the upper bound."""
        cases = [random_plackett_luce(4, seed) for seed in range(50)] + named_cases()
        for p in cases:
            for delta in attainable_deltas(4):
                lower = epsilon_minus(p, delta)
                upper = epsilon_plus(p, delta)
                self.assertIsNotNone(lower.value)
                self.assertIsNotNone(upper.value)
                self.assertGreaterEqual(lower.value, 0.0)
                if upper.condition_ok:
                    self.assertLessEqual(lower.value, upper.value + 1e-9)

    def test_witness_breaks_the_median(self):
        """Test the reverse-mass witness moves the median by delta."""
        for seed in range(20):
            p = random_plackett_luce(4, seed)
            star = metric_median(p).median
            D = distance_matrix(4, "kendall")
            for delta in attainable_deltas(4):
                upper = epsilon_plus(p, delta)
                if not upper.condition_ok:
                    continue
                eps = min(upper.value * (1 + 1e-9), 2 * p.prob(star))
                q = reverse_attack(p, eps)
                argmin = metric_median(q).argmin_set
                far = [D[perm_index(star), perm_index(s)] >= delta - 1e-12 for s in argmin]
                self.assertTrue(any(far), f"seed={seed} delta={delta}")

    def test_monotone_in_delta(self):
        """Test both bounds grow with delta."""
        for seed in range(10):
            p = random_plackett_luce(4, seed)
            deltas = attainable_deltas(4)
            lower = [epsilon_minus(p, d).value for d in deltas]
            upper = [epsilon_plus(p, d).value for d in deltas]
            self.assertTrue(np.all(np.diff(lower) >= -1e-12))
            self.assertTrue(np.all(np.diff(upper) >= -1e-12))

    def test_relabel_invariance(self):
        """Test bounds do not depend on item labels."""
        mapping = Permutation((4, 1, 3, 2))
        for seed in range(5):
            p = random_plackett_luce(4, seed)
            q = relabel_items(p, mapping)
            for delta in (1 / 6, 1 / 2, 1.0):
                self.assertAlmostEqual(epsilon_plus(p, delta).value, epsilon_plus(q, delta).value, places=10)
                self.assertAlmostEqual(epsilon_minus(p, delta).value, epsilon_minus(q, delta).value, places=10)

    def test_other_medians(self):
        """Test lower bounds for the footrule and rho medians."""
        p = random_plackett_luce(4, 3)
        for metric in ("spearman_rho", "footrule"):
            result = epsilon_minus(p, 1 / 3, "kendall", metric)
            self.assertEqual(result.median, metric_median(p, metric).median)
            self.assertGreaterEqual(result.value, 0.0)


class TestEmptyFarSet(unittest.TestCase):

    def test_both_bounds_agree(self):
        """Test the shared result when no ranking lies delta away."""
        result = no_far_rankings(Permutation((1, 2, 3)), 0.5)
        self.assertTrue(result.unbreakable)
        self.assertFalse(result.condition_ok)
        self.assertIsNone(result.witness)
        self.assertEqual(result.median, Permutation((1, 2, 3)))


class TestCurve(unittest.TestCase):

    def test_default_grid(self):
        """Test the default curve grid."""
        self.assertEqual(attainable_deltas(3), [1 / 3, 2 / 3, 1.0])
        curve = breakdown_curve_bounds(random_plackett_luce(4, 0))
        self.assertEqual(curve.deltas[0], 0.0)
        self.assertEqual(len(curve.rows()), 7)
        self.assertEqual(curve.unit, "l1")
        self.assertEqual(curve.rows()[0]["eps_lower"], 0.0)

    def test_non_kemeny_has_no_upper(self):
        """Test non-Kemeny curves carry no upper bound."""
        curve = breakdown_curve_bounds(random_plackett_luce(4, 0), [0.5], "kendall", "footrule")
        self.assertEqual(curve.upper, [None])
        self.assertEqual(curve.condition_ok, [False])

    def test_bad_delta(self):
        """Test curve deltas outside [0, 1]."""
        with self.assertRaises(ValueError):
            breakdown_curve_bounds(uniform(3), [1.2])


if __name__ == "__main__":
    unittest.main()
