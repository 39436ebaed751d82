import math
from fractions import Fraction

from django.test import SimpleTestCase, override_settings

from densities.arith import PrimePower
from densities.constants import default_series_truncation, series_P_grouped
from densities.ensembles import (
    average_over_extensions,
    average_over_prime_powers,
    average_over_ranks,
    convergence_ladder,
    ensemble_sample,
)
from densities.exceptions import InvalidArgument, RangeError
from densities.workers import run_blocks, split_blocks

# φ(q-1)/(q-1)，q = 2, 3, 4, 5, 7, 8, 9
SCALED_UP_TO_10 = [
    Fraction(1),
    Fraction(1, 2),
    Fraction(2, 3),
    Fraction(1, 2),
    Fraction(1, 3),
    Fraction(6, 7),
    Fraction(1, 2),
]


def _square(block):
    return [x * x for x in block]


class PrimePowerAverageTestCase(SimpleTestCase):
    def test_single_member(self):
        """测试 x=2 时只有 q=2."""
        report = average_over_prime_powers(1, 2)
        self.assertEqual(report.sample_size, 1)
        self.assertEqual(report.empirical_mean, 1.0)
        self.assertEqual(report.summation, "exact")

    def test_x_10(self):
        """测试 n=1, x=10 的精确和."""
        report = average_over_prime_powers(1, 10)
        self.assertEqual(report.sample_size, 7)
        self.assertEqual(report.raw_sum, sum(SCALED_UP_TO_10))
        self.assertEqual(report.empirical_mean, float(sum(SCALED_UP_TO_10) / 7))
        self.assertAlmostEqual(report.theoretical.estimate, 0.3739558136, places=6)
        self.assertEqual(
            report.discrepancy,
            abs(report.empirical_mean - report.theoretical.estimate),
        )

    def test_rank_two(self):
        """测试 n=2 的平均值落在 (0, 1/2]."""
        report = average_over_prime_powers(2, 10)
        self.assertEqual(report.sample_size, 7)
        self.assertGreater(report.empirical_mean, 0)
        self.assertLessEqual(report.empirical_mean, 0.5)

    def test_truncation(self):
        """测试超出 2^128 的 x 被截断并报告."""
        with self.assertLogs("densities.ensembles", level="WARNING"):
            sample = ensemble_sample("prime_powers", {"n": 40}, 10**4)
        self.assertTrue(sample.truncated)
        self.assertEqual(sample.x_effective, 9)
        self.assertTrue(all(t.q**40 - 1 < 2**128 for t in sample.terms))

    def test_invalid_x(self):
        """测试 x < 2."""
        with self.assertRaises(InvalidArgument):
            average_over_prime_powers(1, 1.5)

    def test_rank_beyond_128_bits(self):
        """测试 2^n - 1 已超出 2^128 时报范围错误."""
        with self.assertRaises(RangeError):
            average_over_prime_powers(200, 10)
        with self.assertRaises(RangeError):
            ensemble_sample("prime_powers", {"n": 129}, 2)
        sample = ensemble_sample("prime_powers", {"n": 128}, 2)
        self.assertEqual([t.q for t in sample.terms], [2])


class ExtensionAverageTestCase(SimpleTestCase):
    def test_examples(self):
        """测试扩张族的例子."""
        self.assertEqual(average_over_extensions(2, 1, 1).empirical_mean, 1.0)
        report = average_over_extensions(2, 1, 2)
        self.assertEqual(report.raw_sum, Fraction(5, 3))
        self.assertEqual(report.empirical_mean, 5 / 6)
        self.assertEqual(average_over_extensions(3, 1, 2, K=10).empirical_mean, 0.5)

    def test_theoretical_scaling(self):
        """测试理论值为 P(p, n)/n."""
        report = average_over_extensions(2, 2, 4, K=20)
        constant = series_P_grouped(2, 2, 20)
        self.assertAlmostEqual(report.theoretical.estimate, constant.estimate / 2)
        self.assertEqual(report.theoretical.exact, constant.exact / 2)

    def test_range_error(self):
        """测试 p^{n·x} - 1 越界."""
        with self.assertRaises(RangeError):
            average_over_extensions(2, 2, 65)

    def test_invalid_prime(self):
        """测试 p 不是素数."""
        with self.assertRaises(InvalidArgument):
            average_over_extensions(4, 1, 3)


class RankAverageTestCase(SimpleTestCase):
    def test_examples(self):
        """测试秩族按 log x 归一化."""
        report = average_over_ranks(2, 2)
        self.assertEqual(report.raw_sum, Fraction(4, 3))
        self.assertEqual(report.empirical_mean, float(Fraction(4, 3)) / math.log(2))
        report = average_over_ranks(2, math.e)
        self.assertAlmostEqual(report.empirical_mean, 4 / 3)
        report = average_over_ranks(3, 3, K=10)
        expected = Fraction(1, 2) + Fraction(1, 4) + Fraction(1, 3) * Fraction(12, 26)
        self.assertEqual(report.raw_sum, expected)

    def test_prime_power_argument(self):
        """测试 q 可以是 PrimePower."""
        report = average_over_ranks(PrimePower(2, 2), 3)
        self.assertEqual(report.params, {"q": 4})

    def test_shared_constant(self):
        """测试扩张族 (p=2, n=1) 与秩族 (q=2) 共享常数 P(2, 1)."""
        a = average_over_extensions(2, 1, 5, K=30)
        b = average_over_ranks(2, 5, K=30)
        self.assertEqual(a.theoretical.exact, b.theoretical.exact)

    def test_x_must_exceed_one(self):
        """测试 log x ≤ 0 时拒绝."""
        with self.assertRaises(InvalidArgument):
            average_over_ranks(2, 1)

    def test_series_falls_back_to_factorable_K(self):
        """测试 p^k - 1 分解失败时理论值退到更小的 K 并记录."""
        with self.assertLogs("densities.ensembles", level="WARNING") as logs:
            report = average_over_ranks(7, 2)
        self.assertEqual(report.raw_sum, Fraction(1, 3) + Fraction(1, 6))
        self.assertLess(report.theoretical.truncation, default_series_truncation(7))
        self.assertIn("K reduced to", report.theoretical.meta)
        self.assertIn("series truncated at K", logs.output[0])


class LadderTestCase(SimpleTestCase):
    def test_last_rung_matches_direct_call(self):
        """测试阶梯最后一级与直接调用逐位相同."""
        reports = convergence_ladder("extensions", {"p": 2, "n": 1}, [10, 20, 40])
        direct = average_over_extensions(2, 1, 40)
        self.assertEqual(reports[-1].as_dict(), direct.as_dict())
        self.assertEqual([r.sample_size for r in reports], [10, 20, 40])

    def test_shared_theoretical_value(self):
        """测试各级的理论值相同."""
        reports = convergence_ladder("prime_powers", {"n": 1}, [10, 100])
        self.assertEqual(reports[0].theoretical, reports[1].theoretical)
        self.assertEqual(reports[1].sample_size, 35)

    def test_ranks_ladder(self):
        """测试秩族阶梯."""
        reports = convergence_ladder("ranks", {"q": 2}, [16, 32, 64])
        self.assertEqual([r.sample_size for r in reports], [16, 32, 64])
        direct = average_over_ranks(2, 64)
        self.assertEqual(reports[-1].empirical_mean, direct.empirical_mean)

    @override_settings(SINGER_EXACT_TERMS=5)
    def test_switch_to_fsum(self):
        """测试项数超过阈值后改用 fsum，且阶梯与直接调用一致."""
        reports = convergence_ladder("extensions", {"p": 2, "n": 1}, [4, 8])
        self.assertEqual([r.summation for r in reports], ["exact", "fsum"])
        direct = average_over_extensions(2, 1, 8)
        self.assertEqual(reports[-1].raw_sum, direct.raw_sum)

    def test_descending_rejected(self):
        """测试 x 必须升序."""
        with self.assertRaises(InvalidArgument):
            convergence_ladder("prime_powers", {"n": 1}, [100, 10])

    def test_unknown_mode(self):
        """测试未知 mode."""
        with self.assertRaises(InvalidArgument):
            convergence_ladder("primes", {"n": 1}, [10])


class WorkerTestCase(SimpleTestCase):
    def test_split_blocks(self):
        """测试固定大小分块."""
        self.assertEqual(split_blocks(range(5), 2), [[0, 1], [2, 3], [4]])

    def test_results_independent_of_workers(self):
        """测试结果与进程数无关."""
        items = list(range(50))
        serial = run_blocks(_square, items, workers=1, block_size=7)
        parallel = run_blocks(_square, items, workers=2, block_size=7)
        self.assertEqual(serial, [x * x for x in items])
        self.assertEqual(parallel, serial)

    def test_sample_identical_across_workers(self):
        """测试族样本与进程数无关."""
        one = ensemble_sample("prime_powers", {"n": 2}, 3000, workers=1)
        two = ensemble_sample("prime_powers", {"n": 2}, 3000, workers=2)
        self.assertEqual(one.terms, two.terms)
