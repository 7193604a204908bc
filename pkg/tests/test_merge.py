"""Naive and Downward Merge on hand-built pairwise matrices."""

import itertools
import unittest

from src.buckets import BucketRanking, from_permutation, is_stricter
from src.dists import PairwiseMatrix, pairwise_matrix, random_plackett_luce
from src.consensus import metric_median
from src.merge import (
    acceptable_spans,
    deviation_bar,
    downward_merge,
    merge,
    merge_path,
    naive_merge,
)
from src.perms import Permutation

IDENTITY = Permutation((1, 2, 3, 4))


def B(*buckets):
    return BucketRanking.from_json(buckets)


def threshold_grid(P: PairwiseMatrix) -> list:
    """Every deviation from 1/2 in P, the ends of [0, 1/2] and the midpoints between them."""
    levels = sorted(set(min(float(x), 0.5) for x in P.deviation().ravel()) | {0.0, 0.5})
    return sorted(set(levels) | {0.5 * (a + b) for a, b in zip(levels, levels[1:])})


def four_items() -> PairwiseMatrix:
    return PairwiseMatrix.from_upper(4, {
        (1, 2): 0.69, (1, 3): 0.9, (1, 4): 0.9,
        (2, 3): 0.52, (2, 4): 0.7,
        (3, 4): 0.51,
    })


class TestDeviation(unittest.TestCase):

    def test_examples(self):
        """Test span deviations on the four-item matrix."""
        P = four_items()
        start = from_permutation(IDENTITY)
        self.assertAlmostEqual(deviation_bar(P, start, 2, 4), 0.2, places=12)
        self.assertAlmostEqual(deviation_bar(P, start, 3, 4), 0.01, places=12)
        self.assertAlmostEqual(deviation_bar(P, start, 1, 2), 0.19, places=12)
        self.assertEqual(deviation_bar(P, start, 2, 2), 0.0)

    def test_bad_spans(self):
        """Test out-of-range spans."""
        P = four_items()
        start = from_permutation(IDENTITY)
        with self.assertRaises(ValueError):
            deviation_bar(P, start, 3, 2)
        with self.assertRaises(ValueError):
            deviation_bar(P, start, 0, 2)
        with self.assertRaises(ValueError):
            deviation_bar(P, B([1], [2], [3]), 1, 2)

    def test_acceptable_spans(self):
        """Test which spans may merge at a threshold."""
        spans = acceptable_spans(four_items(), from_permutation(IDENTITY), 0.02)
        self.assertEqual([(i, j) for i, j, _ in spans], [(2, 3), (3, 4)])


class TestMerge(unittest.TestCase):

    def test_downward_thresholds(self):
        """Test Downward Merge reaches four different outputs."""
        P = four_items()
        expected = {
            0.01: B([1], [2], [3, 4]),
            0.02: B([1], [2, 3], [4]),
            0.19: B([1, 2], [3, 4]),
            0.2: B([1], [2, 3, 4]),
        }
        for theta, pi in expected.items():
            self.assertEqual(downward_merge(IDENTITY, P, theta), pi, theta)

    def test_naive_thresholds(self):
        """Test Naive Merge outputs on the same thresholds."""
        P = four_items()
        expected = {
            0.01: B([1], [2], [3, 4]),
            0.02: B([1], [2], [3, 4]),
            0.19: B([1, 2], [3, 4]),
            0.2: B([1, 2], [3, 4]),
        }
        for theta, pi in expected.items():
            self.assertEqual(naive_merge(IDENTITY, P, theta), pi, theta)

    def test_extreme_thresholds(self):
        """Test thresholds 0 and 1/2."""
        P = four_items()
        for kind in ("naive", "downward"):
            self.assertEqual(merge(IDENTITY, P, 0.0, kind), from_permutation(IDENTITY))
            self.assertEqual(merge(IDENTITY, P, 0.5, kind), BucketRanking.single_bucket(4))

    def test_path(self):
        """Test the merge sequence."""
        path = list(merge_path(IDENTITY, four_items(), 0.2, "downward"))
        self.assertEqual(path, [from_permutation(IDENTITY), B([1], [2, 3, 4])])

    def test_output_coarsens_median(self):
        """Test outputs coarsen the median and respect the threshold."""
        thetas = (0.0, 0.02, 0.05, 0.1, 0.2, 0.35, 0.5)
        for seed in range(10):
            p = random_plackett_luce(4, seed)
            P = pairwise_matrix(p)
            median = metric_median(p, "kendall").median
            for theta, kind in itertools.product(thetas, ("naive", "downward")):
                pi = merge(median, P, theta, kind)
                self.assertTrue(is_stricter(from_permutation(median), pi))
                for bucket in pi.buckets:
                    for a, b in itertools.combinations(sorted(bucket), 2):
                        self.assertLessEqual(P.deviation()[a - 1, b - 1], theta + 1e-9)

    def test_naive_coarsens_with_threshold(self):
        """Test Naive Merge coarsens as the threshold grows."""
        cases = [(IDENTITY, four_items())]
        for n, seed in itertools.product((3, 4, 5), range(10)):
            p = random_plackett_luce(n, seed)
            cases.append((metric_median(p, "kendall").median, pairwise_matrix(p)))
        for median, P in cases:
            outputs = [naive_merge(median, P, theta) for theta in threshold_grid(P)]
            for finer, coarser in zip(outputs, outputs[1:]):
                self.assertTrue(is_stricter(finer, coarser), f"{finer} vs {coarser}")

    def test_errors(self):
        """Test invalid thresholds and kinds."""
        P = four_items()
        with self.assertRaises(ValueError):
            merge(IDENTITY, P, -0.1)
        with self.assertRaises(ValueError):
            merge(IDENTITY, P, 0.6)
        with self.assertRaises(ValueError):
            merge(IDENTITY, P, 0.1, "upward")
        with self.assertRaises(ValueError):
            merge(Permutation((1, 2, 3)), P, 0.1)


if __name__ == "__main__":
    unittest.main()
