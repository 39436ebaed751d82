from fractions import Fraction

from django.test import SimpleTestCase

from densities.acceptance import check_ecdf_axioms
from densities.distribution import (
    ECDF,
    ecdf_extensions,
    ecdf_prime_powers,
    ecdf_ranks,
    frequency,
    kolmogorov_distance,
    stability_ladder,
)
from densities.exceptions import DomainError


class ECDFTestCase(SimpleTestCase):
    def setUp(self):
        """初始化."""
        self.ecdf = ecdf_prime_powers(1, 10)

    def test_evaluate(self):
        """测试 n=1, x=10 时的取值."""
        self.assertEqual(self.ecdf.size, 7)
        self.assertEqual(self.ecdf.evaluate(0.5), Fraction(4, 7))
        self.assertEqual(self.ecdf.evaluate(Fraction(1, 2)), Fraction(4, 7))
        self.assertEqual(self.ecdf.evaluate(0), 0)
        self.assertEqual(self.ecdf.evaluate(1), 1)
        self.assertEqual(self.ecdf.evaluate(Fraction(1, 3)), Fraction(1, 7))

    def test_jumps(self):
        """测试跳跃点合并重复值."""
        self.assertEqual(
            self.ecdf.jumps(),
            [
                (Fraction(1, 3), Fraction(1, 7)),
                (Fraction(1, 2), Fraction(4, 7)),
                (Fraction(2, 3), Fraction(5, 7)),
                (Fraction(6, 7), Fraction(6, 7)),
                (Fraction(1), Fraction(1)),
            ],
        )

    def test_meta(self):
        """测试描述信息."""
        self.assertEqual(self.ecdf.meta["mode"], "prime_powers")
        self.assertEqual(self.ecdf.meta["params"], {"n": 1})
        self.assertEqual(self.ecdf.meta["scaling"], "n * p_n")

    def test_axioms(self):
        """测试三种族的 ECDF 都满足分布函数的性质."""
        for ecdf in (self.ecdf, ecdf_extensions(2, 1, 12), ecdf_ranks(2, 20)):
            self.assertTrue(check_ecdf_axioms(ecdf), ecdf)
        self.assertTrue(check_ecdf_axioms(ECDF([0.5, 0.5, 1.0])))

    def test_extensions(self):
        """测试扩张族 p=2, x=3."""
        ecdf = ecdf_extensions(2, 1, 3)
        self.assertEqual(ecdf.exact, (Fraction(2, 3), Fraction(6, 7), Fraction(1)))
        self.assertEqual(ecdf.evaluate(Fraction(2, 3)), Fraction(1, 3))

    def test_ranks(self):
        """测试秩族的支撑集."""
        self.assertEqual(ecdf_ranks(2, 2).exact, (Fraction(2, 3), Fraction(1)))
        self.assertEqual(ecdf_ranks(3, 1).exact, (Fraction(1, 2),))

    def test_empty(self):
        """测试空 ECDF 无法求值."""
        with self.assertRaises(DomainError):
            ECDF([]).evaluate(0.5)

    def test_out_of_unit_interval(self):
        """测试样本必须落在 [0, 1]."""
        with self.assertRaises(DomainError):
            ECDF([0.5, 1.5])


class FrequencyTestCase(SimpleTestCase):
    def test_matches_scaled_ecdf(self):
        """测试 ν_x(p_n ≤ z/n) 等于 n·p_n 的 ECDF 在 z 处的值."""
        cases = (
            ("prime_powers", {"n": 2}, 30, ecdf_prime_powers(2, 30)),
            ("extensions", {"p": 2, "n": 2}, 10, ecdf_extensions(2, 2, 10)),
            ("ranks", {"q": 3}, 12, ecdf_ranks(3, 12)),
        )
        for mode, params, x, ecdf in cases:
            for z in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)):
                self.assertEqual(frequency(mode, params, x, z), ecdf.evaluate(z))

    def test_prime_powers_example(self):
        """测试 n=1, x=10, z=1/2."""
        self.assertEqual(
            frequency("prime_powers", {"n": 1}, 10, Fraction(1, 2)), Fraction(4, 7)
        )


class KolmogorovTestCase(SimpleTestCase):
    def test_identical(self):
        """测试相同 ECDF 的距离为 0."""
        ecdf = ecdf_prime_powers(1, 100)
        self.assertEqual(kolmogorov_distance(ecdf, ecdf), 0)

    def test_disjoint(self):
        """测试不相交的单点样本距离为 1."""
        self.assertEqual(kolmogorov_distance(ECDF([0.2]), ECDF([0.8])), 1)

    def test_exact_below_float_resolution(self):
        """测试相差不到一个 ulp 的有理样本按精确值区分."""
        third = Fraction(1, 3)
        a = ECDF((), exact=[third])
        b = ECDF((), exact=[third + Fraction(1, 10**20)])
        self.assertEqual(a.values.tolist(), b.values.tolist())
        self.assertEqual(kolmogorov_distance(a, b), 1)
        self.assertEqual(kolmogorov_distance(a, a), 0)

    def test_mixed_exact_and_float(self):
        """测试一侧没有精确值时按浮点比较."""
        a = ECDF((), exact=[Fraction(1, 4), Fraction(3, 4)])
        b = ECDF([0.25, 0.5])
        self.assertEqual(kolmogorov_distance(a, b), Fraction(1, 2))

    def test_metric_properties(self):
        """测试对称性与三角不等式."""
        a = ecdf_prime_powers(1, 10)
        b = ecdf_prime_powers(1, 100)
        c = ecdf_prime_powers(1, 1000)
        self.assertEqual(kolmogorov_distance(a, b), kolmogorov_distance(b, a))
        self.assertLessEqual(
            kolmogorov_distance(a, c),
            kolmogorov_distance(a, b) + kolmogorov_distance(b, c),
        )

    def test_grid_lower_bound(self):
        """测试网格上的差值不超过精确距离."""
        a = ecdf_prime_powers(1, 10)
        b = ecdf_prime_powers(1, 100)
        distance = kolmogorov_distance(a, b)
        grid = [i / 1000 for i in range(1001)]
        observed = max(abs(a.evaluate(z) - b.evaluate(z)) for z in grid)
        self.assertLessEqual(observed, distance)
        self.assertGreater(observed, 0)

    def test_empty(self):
        """测试空 ECDF."""
        with self.assertRaises(DomainError):
            kolmogorov_distance(ECDF([]), ECDF([0.5]))


class StabilityLadderTestCase(SimpleTestCase):
    def test_rows(self):
        """测试阶梯逐级给出相邻两级的距离."""
        rows = stability_ladder("prime_powers", {"n": 1}, [10, 100, 1000])
        self.assertEqual([(r["x1"], r["x2"]) for r in rows], [(10, 100), (100, 1000)])
        self.assertEqual(
            rows[0]["kolmogorov_distance"],
            kolmogorov_distance(ecdf_prime_powers(1, 10), ecdf_prime_powers(1, 100)),
        )
        self.assertEqual(rows[1]["params"], {"n": 1})
