"""Smoothed deviation estimates and the saddle-point breakdown attack."""

import unittest

import numpy as np
import pytest

from src.attack import (
    TRACE_COLUMNS,
    AttackConfig,
    best_transfer,
    deviation_exact,
    draw_perturbations,
    estimate_breakdown,
    rho_smoothed,
    shrink_toward,
    transfer_endpoints,
    tv_gradient,
)
from src.bench import median_run
from src.breakdown import epsilon_minus, epsilon_plus
from src.buckets import from_permutation
from src.consensus import ConstantBucketStatistic, KemenyStatistic, MergeStatistic
from src.dists import make_named, point_mass, random_plackett_luce, total_variation, uniform
from src.perms import Permutation

IDENTITY = Permutation((1, 2, 3, 4))
SWAP = Permutation((2, 1, 3, 4))


def bucket_ish():
    return make_named("bucket-ish", IDENTITY, eta=0.95, gap=0.1)


class TestAttackConfig(unittest.TestCase):

    def test_validation(self):
        """Test that out-of-range settings are rejected."""
        with self.assertRaises(ValueError):
            AttackConfig(gamma=0.0)
        with self.assertRaises(ValueError):
            AttackConfig(samples=1)
        with self.assertRaises(ValueError):
            AttackConfig(steps=0)
        with self.assertRaises(ValueError):
            AttackConfig(delta=1.5)
        with self.assertRaises(ValueError):
            AttackConfig(variant="max")

    def test_from_dict(self):
        """Test building from a config section with overrides."""
        cfg = AttackConfig.from_dict({"gamma": 0.2, "runs": 5, "steps": 10}, seed=7, delta=None)
        self.assertEqual((cfg.gamma, cfg.steps, cfg.seed), (0.2, 10, 7))
        self.assertEqual(cfg.delta, AttackConfig().delta)
        self.assertTrue(cfg.refine and cfg.warm_start)
        self.assertEqual(AttackConfig.from_dict(cfg.to_dict()), cfg)


class TestSmoothing(unittest.TestCase):

    def test_antithetic_pairs(self):
        """Test antithetic perturbation pairs."""
        rng = np.random.default_rng(0)
        xi = draw_perturbations(rng, 8, 24)
        self.assertEqual(xi.shape, (8, 24))
        self.assertTrue(np.array_equal(xi[:4], -xi[4:]))
        self.assertEqual(draw_perturbations(rng, 5, 6).shape, (5, 6))
        self.assertEqual(draw_perturbations(rng, 5, 6, antithetic=False).shape, (5, 6))

    def test_constant_statistic_is_flat(self):
        """Test a constant statistic has zero deviation and zero gradient."""
        p = random_plackett_luce(4, 0)
        cfg = AttackConfig(samples=16)
        estimate, grad = rho_smoothed(p, np.log(p.probs), ConstantBucketStatistic(), cfg)
        self.assertEqual(estimate, 0.0)
        self.assertTrue(np.all(grad == 0.0))

    def test_kemeny_on_uniform_moves(self):
        """Test that Kemeny on the uniform distribution moves under perturbation."""
        # any perturbation of the uniform distribution moves the tie-broken median
        p = uniform(4)
        estimate, grad = rho_smoothed(p, np.zeros(24), KemenyStatistic(), AttackConfig(samples=32))
        self.assertGreater(estimate, 0.0)
        self.assertEqual(grad.shape, (24,))

    def test_small_gamma_inside_a_piece(self):
        """Test the estimate equals the exact deviation for a tiny smoothing scale."""
        p = bucket_ish()
        q = make_named("pointmass-ish", SWAP)
        cfg = AttackConfig(gamma=1e-6, samples=16)
        estimate, grad = rho_smoothed(p, np.log(q.probs), KemenyStatistic(), cfg)
        exact = deviation_exact(KemenyStatistic()(p), q, KemenyStatistic())
        self.assertAlmostEqual(exact, 1 / 6, places=12)
        self.assertAlmostEqual(estimate, exact, places=12)
        self.assertTrue(np.allclose(grad, 0.0, atol=1e-6))

    def test_variance_shrinks_with_samples(self):
        """Test the estimate variance scales like 1/m over repeated seeds."""
        p = uniform(4)
        z = np.zeros(24)

        def spread(samples):
            values = [
                rho_smoothed(p, z, KemenyStatistic(), AttackConfig(samples=samples, seed=s, antithetic=False))[0]
                for s in range(200)
            ]
            return float(np.var(values))

        ratio = spread(8) / spread(128)
        self.assertGreater(ratio, 8.0)
        self.assertLess(ratio, 32.0)

    def test_seeded(self):
        """Test the same seed gives the same estimate and gradient."""
        p = random_plackett_luce(4, 1)
        cfg = AttackConfig(samples=16, seed=3)
        a = rho_smoothed(p, np.log(p.probs), KemenyStatistic(), cfg)
        b = rho_smoothed(p, np.log(p.probs), KemenyStatistic(), cfg)
        self.assertEqual(a[0], b[0])
        self.assertTrue(np.array_equal(a[1], b[1]))

    def test_shape_errors(self):
        """Test malformed logits are rejected."""
        p = uniform(3)
        with self.assertRaises(ValueError):
            rho_smoothed(p, np.zeros(5), KemenyStatistic(), AttackConfig())
        with self.assertRaises(ValueError):
            rho_smoothed(p, np.full(6, np.nan), KemenyStatistic(), AttackConfig())

    def test_tv_gradient(self):
        """Test the TV subgradient through the softmax."""
        self.assertTrue(np.all(tv_gradient(uniform(4).probs, np.zeros(24)) == 0.0))
        p = random_plackett_luce(4, 2)
        g = tv_gradient(p.probs, np.zeros(24))
        self.assertAlmostEqual(float(g.sum()), 0.0, places=12)


class TestDeviation(unittest.TestCase):

    def test_examples(self):
        """Test exact deviation on point masses."""
        t_p = from_permutation(IDENTITY)
        q = point_mass(SWAP)
        self.assertAlmostEqual(deviation_exact(t_p, q, KemenyStatistic()), 1 / 6)
        self.assertEqual(deviation_exact(t_p, point_mass(IDENTITY), KemenyStatistic()), 0.0)
        with self.assertRaises(ValueError):
            deviation_exact(t_p, uniform(3), KemenyStatistic())


class TestTransfers(unittest.TestCase):

    def test_endpoints(self):
        """Test single-ranking transfer endpoints are distributions."""
        ends = transfer_endpoints(bucket_ish())
        self.assertEqual(ends.shape, (47, 24))
        self.assertTrue(np.all(ends >= 0.0))
        self.assertTrue(np.allclose(ends.sum(axis=1), 1.0, atol=1e-12))

    def test_shrink_toward_point_mass(self):
        """Test bisection stops where the first pair flips."""
        p = bucket_ish()
        statistic = KemenyStatistic()
        reference = statistic(p).positions()
        cfg = AttackConfig(delta=1 / 6)
        f = shrink_toward(p, point_mass(SWAP).probs, reference, statistic, cfg)
        # P(1 before 2) falls from 0.5475 to 1/2 along the segment
        self.assertAlmostEqual(f[0], 1.0 - 0.5 / 0.5475, places=6)
        self.assertTrue(np.isnan(shrink_toward(p, p.probs, reference, statistic, cfg)[0]))

    def test_best_transfer_matches_exact_breakdown(self):
        """Test the cheapest transfer costs the exact breakdown on bucket-ish."""
        p = bucket_ish()
        statistic = KemenyStatistic()
        for delta, tv in ((1 / 6, 0.0475), (2 / 6, 0.475), (3 / 6, 0.475)):
            q = best_transfer(p, statistic, AttackConfig(delta=delta))
            self.assertAlmostEqual(total_variation(p, q), tv, places=6)
            self.assertGreaterEqual(deviation_exact(statistic(p), q, statistic), delta - 1e-9)
            self.assertAlmostEqual(2 * total_variation(p, q), epsilon_plus(p, delta).value, places=6)

    def test_constant_statistic_has_no_transfer(self):
        """Test no transfer moves a constant statistic."""
        self.assertIsNone(best_transfer(bucket_ish(), ConstantBucketStatistic(), AttackConfig()))


class TestEstimateBreakdown(unittest.TestCase):

    def test_zero_delta(self):
        """Test delta = 0 costs nothing."""
        p = random_plackett_luce(4, 0)
        result = estimate_breakdown(p, KemenyStatistic(), AttackConfig(delta=0.0, steps=5))
        self.assertEqual(result.eps_hat, 0.0)
        self.assertEqual(result.status, "ok")
        self.assertEqual(result.trace.shape, (0, len(TRACE_COLUMNS)))

    def test_constant_statistic_is_unbreakable(self):
        """Test a constant statistic is reported unbreakable."""
        p = random_plackett_luce(4, 0)
        result = estimate_breakdown(p, ConstantBucketStatistic(), AttackConfig(steps=50, samples=8))
        self.assertTrue(result.unbreakable)
        self.assertIsNone(result.eps_hat_l1)
        self.assertEqual(result.status, "unbreakable")
        self.assertEqual(result.achieved_deviation, 0.0)

    def test_full_merge_is_unbreakable(self):
        """Test the single-bucket merge is reported unbreakable."""
        p = make_named("bucket-ish", IDENTITY)
        result = estimate_breakdown(p, MergeStatistic("downward", 0.5), AttackConfig(steps=20, samples=8))
        self.assertTrue(result.unbreakable)

    def test_plateau_is_crossed(self):
        """Test a far deviation is reached with a short run."""
        p = bucket_ish()
        result = estimate_breakdown(p, KemenyStatistic(), AttackConfig(delta=2 / 6, steps=20, samples=8))
        self.assertFalse(result.unbreakable)
        self.assertGreaterEqual(result.achieved_deviation, 2 / 6 - 1e-9)
        self.assertAlmostEqual(result.eps_hat, total_variation(p, result.q_bar), places=12)
        self.assertLessEqual(result.eps_hat, 0.475 + 1e-6)

    def test_trace_and_determinism(self):
        """Test the trace layout and bit-identical reruns."""
        p = make_named("bucket-ish", IDENTITY)
        cfg = AttackConfig(steps=30, samples=16, seed=5)
        a = estimate_breakdown(p, KemenyStatistic(), cfg)
        b = estimate_breakdown(p, KemenyStatistic(), cfg)
        self.assertEqual(a.trace.shape, (30, len(TRACE_COLUMNS)))
        self.assertTrue(np.array_equal(a.trace[:, 0], np.arange(1, 31)))
        self.assertTrue(np.array_equal(a.trace, b.trace))
        self.assertTrue(a.q_bar.equals(b.q_bar))
        self.assertTrue(np.all(a.trace[:, 3] >= 0.0))

    def test_too_many_items(self):
        """Test the item limit."""
        with self.assertRaises(ValueError):
            estimate_breakdown(uniform(7), KemenyStatistic(), AttackConfig(steps=1))


@pytest.mark.slow
class TestAttackQuality(unittest.TestCase):

    def test_uniform_breaks_almost_for_free(self):
        """Test Kemeny on the uniform distribution breaks for almost nothing."""
        p = uniform(4)
        results = [
            estimate_breakdown(p, KemenyStatistic(), AttackConfig(steps=500, seed=seed))
            for seed in range(3)
        ]
        best = median_run(results)
        self.assertFalse(best.unbreakable)
        self.assertLess(best.eps_hat_l1, 0.1)

    def test_tracks_upper_bound_on_bucket_ish(self):
        """Test the default attack tracks the exact curve over five seeds."""
        p = bucket_ish()
        for delta in (1 / 6, 2 / 6, 3 / 6):
            upper = epsilon_plus(p, delta)
            lower = epsilon_minus(p, delta).value
            self.assertTrue(upper.condition_ok)
            results = [
                estimate_breakdown(p, KemenyStatistic(), AttackConfig(delta=delta, seed=seed))
                for seed in range(5)
            ]
            for result in results:
                self.assertFalse(result.unbreakable, delta)
                self.assertGreaterEqual(result.achieved_deviation, delta - 1e-9)
                self.assertGreaterEqual(result.eps_hat_l1, lower - 1e-9)
                self.assertAlmostEqual(result.eps_hat, total_variation(p, result.q_bar), places=12)
            best = median_run(results)
            self.assertLessEqual(abs(best.eps_hat_l1 - upper.value), 0.1, delta)


if __name__ == "__main__":
    unittest.main()
