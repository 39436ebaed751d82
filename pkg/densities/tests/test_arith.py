import math
import os
import tempfile
from fractions import Fraction

from django.test import SimpleTestCase

from densities.arith import (
    Factorization,
    FactorizationCache,
    PrimePower,
    carmichael_lambda,
    check_range,
    cyclotomic_value,
    divisors,
    enumerate_prime_powers,
    euler_phi,
    factor,
    factor_qn_minus_1,
    is_prime,
    mobius,
    mult_order,
    mult_order_brute_force,
    phi_ratio_by_mobius,
    prime_power_count,
    rho,
    rho_brute_force,
    rho_brute_force_table,
    segmented_mertens,
    sieve_multiplicative,
    squarefree_divisors,
)
from densities.exceptions import (
    DomainError,
    FactorizationExhausted,
    InvalidArgument,
    RangeError,
    SizeError,
)


class SieveTestCase(SimpleTestCase):
    def test_small_values(self):
        """测试 limit=10 时的手算值."""
        tables = sieve_multiplicative(10)
        self.assertEqual(tables.mu[6], 1)
        self.assertEqual(tables.phi[10], 4)
        self.assertEqual(tables.tau[10], 4)
        self.assertEqual(tables.sigma[6], 12)
        self.assertEqual(tables.sigma[8], 15)
        self.assertEqual(tables.mu[4], 0)

    def test_limit_one(self):
        """测试 limit=1 时各表只有单位值."""
        tables = sieve_multiplicative(1)
        for table in (tables.mu, tables.phi, tables.tau, tables.sigma):
            self.assertEqual(table[1:].tolist(), [1])

    def test_prime_entries(self):
        """测试素数处 μ=-1, φ=p-1, τ=2, σ=p+1."""
        tables = sieve_multiplicative(200)
        for p in range(2, 201):
            if not is_prime(p):
                continue
            self.assertEqual(tables.mu[p], -1)
            self.assertEqual(tables.phi[p], p - 1)
            self.assertEqual(tables.tau[p], 2)
            self.assertEqual(tables.sigma[p], p + 1)

    def test_mobius_inversion_of_phi(self):
        """测试 Σ_{d|k} μ(d)·k/d = φ(k)."""
        tables = sieve_multiplicative(500)
        for k in range(1, 501):
            total = sum(int(tables.mu[d]) * (k // d) for d in divisors(factor(k)))
            self.assertEqual(total, tables.phi[k])

    def test_pointwise_mobius(self):
        """测试单点 μ(n) 与筛出的表一致."""
        tables = sieve_multiplicative(300)
        self.assertEqual([mobius(n) for n in (1, 2, 4, 6, 30)], [1, -1, 0, 1, -1])
        for n in range(1, 301):
            self.assertEqual(mobius(n), tables.mu[n], n)

    def test_mertens_against_segmented_sieve(self):
        """测试两套独立筛法给出相同的 Mertens 值."""
        self.assertEqual(segmented_mertens(10), -2)
        tables = sieve_multiplicative(20000)
        self.assertEqual(segmented_mertens(20000), int(tables.mu[1:].sum()))

    def test_size_limits(self):
        """测试 limit 为 0 或超过上限时抛 SizeError."""
        with self.assertRaises(SizeError):
            sieve_multiplicative(0)
        with self.assertRaises(SizeError):
            sieve_multiplicative(1000, cap=100)


class PrimalityTestCase(SimpleTestCase):
    def test_small_numbers(self):
        """测试小整数."""
        primes = [n for n in range(60) if is_prime(n)]
        self.assertEqual(
            primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        )

    def test_pseudoprimes_rejected(self):
        """测试 Carmichael 数与强伪素数被判为合数."""
        for n in (561, 41041, 3215031751, 3825123056546413051):
            self.assertFalse(is_prime(n), n)

    def test_mersenne_primes(self):
        """测试大 Mersenne 素数（包括强 Lucas 分支）."""
        for e in (31, 61, 89, 107, 127):
            self.assertTrue(is_prime(2**e - 1), e)
        self.assertFalse(is_prime((2**31 - 1) * (2**89 - 1)))

    def test_out_of_range(self):
        """测试超过 2^128 时抛 RangeError."""
        with self.assertRaises(RangeError):
            is_prime(2**128 + 51)


class FactorTestCase(SimpleTestCase):
    def test_examples(self):
        """测试基本分解."""
        self.assertEqual(factor(24).factors, ((2, 3), (3, 1)))
        self.assertEqual(factor(80).factors, ((2, 4), (5, 1)))
        self.assertEqual(factor(2**31 - 1).factors, ((2**31 - 1, 1),))
        self.assertEqual(factor(1).factors, ())
        self.assertEqual(str(factor(360)), "2^3 · 3^2 · 5")

    def test_rho_splits_large_semiprimes(self):
        """测试 rho 拆开大于试除上界的因子."""
        self.assertEqual(
            factor(2**64 + 1).factors, ((274177, 1), (67280421310721, 1))
        )
        n = (2**31 - 1) * (2**61 - 1)
        self.assertEqual(factor(n).factors, ((2**31 - 1, 1), (2**61 - 1, 1)))

    def test_perfect_power_cofactor(self):
        """测试余因子是大素数平方的情形."""
        p = 1000003
        self.assertEqual(factor(p**2 * 6).factors, ((2, 1), (3, 1), (p, 2)))

    def test_round_trip(self):
        """测试分解乘回原数且所有因子都是素数."""
        for n in list(range(1, 2000)) + [2**64 - 1, 3**40 - 1, 10**18 + 9]:
            f = factor(n)
            self.assertEqual(f.product(), n)
            f.check()

    def test_invalid_input(self):
        """测试非正数与越界输入."""
        with self.assertRaises(DomainError):
            factor(0)
        with self.assertRaises(RangeError):
            factor(2**128)

    def test_exhausted_budget(self):
        """测试 rho 预算耗尽时报错而不是给出错误结果."""
        n = (2**61 - 1) * (2**67 - 1)
        with self.assertRaises(FactorizationExhausted) as ctx:
            factor(n, cache=None, rho_budget=10)
        self.assertEqual(ctx.exception.n, n)
        self.assertEqual(ctx.exception.exit_code, 4)

    def test_factorization_check(self):
        """测试 Factorization 的不变量校验."""
        with self.assertRaises(DomainError):
            Factorization(12, ((2, 2), (3, 2))).check()
        with self.assertRaises(DomainError):
            Factorization(12, ((3, 1), (2, 2))).check()

    def test_merge(self):
        """测试分解相乘."""
        self.assertEqual(factor(12) * factor(10), factor(120))


class CyclotomicTestCase(SimpleTestCase):
    def test_cyclotomic_values(self):
        """测试 Φ_d(2) 的几个值."""
        self.assertEqual(
            [cyclotomic_value(d, 2) for d in (1, 2, 3, 4, 6, 12)],
            [1, 3, 7, 5, 3, 13],
        )

    def test_qn_minus_1_examples(self):
        """测试 q^n - 1 的分解."""
        self.assertEqual(factor_qn_minus_1(2, 4).factors, ((3, 1), (5, 1)))
        self.assertEqual(factor_qn_minus_1(3, 2).factors, ((2, 3),))
        self.assertEqual(factor_qn_minus_1(2, 11).factors, ((23, 1), (89, 1)))

    def test_matches_direct_factorization(self):
        """测试与直接分解 q^n - 1 的结果一致."""
        for q in (2, 3, 4, 5, 7, 8, 9, 11):
            for n in range(1, 13):
                self.assertEqual(factor_qn_minus_1(q, n), factor(q**n - 1))

    def test_range_error(self):
        """测试 q^n - 1 越界."""
        with self.assertRaises(RangeError):
            factor_qn_minus_1(2, 129)


class MultiplicativeFunctionTestCase(SimpleTestCase):
    def test_euler_phi(self):
        """测试 φ 的例子."""
        self.assertEqual(euler_phi(factor(8)), 4)
        self.assertEqual(euler_phi(factor(1)), 1)
        self.assertEqual(euler_phi(factor(2047)), 1936)

    def test_divisors(self):
        """测试因子与无平方因子因子."""
        self.assertEqual(divisors(factor(12)), [1, 2, 3, 4, 6, 12])
        self.assertEqual(
            squarefree_divisors(factor(12)), [(1, 1), (2, -1), (3, -1), (6, 1)]
        )

    def test_carmichael_lambda(self):
        """测试 Carmichael 函数."""
        values = {8: 2, 15: 4, 16: 4, 63: 6, 1: 1, 4: 2, 2: 1}
        for m, expected in values.items():
            self.assertEqual(carmichael_lambda(factor(m)).value, expected, m)

    def test_phi_ratio_identity(self):
        """测试 φ(k)/k = Σ_{m|k} μ(m)/m."""
        tables = sieve_multiplicative(300)
        for k in range(1, 301):
            self.assertEqual(phi_ratio_by_mobius(k), Fraction(int(tables.phi[k]), k))

    def test_gcd_as_phi_sum(self):
        """测试 gcd(a, b) = Σ_{d|a, d|b} φ(d)."""
        for a in range(1, 60):
            for b in range(1, 60):
                common = set(divisors(factor(a))) & set(divisors(factor(b)))
                total = sum(euler_phi(factor(d)) for d in common)
                self.assertEqual(total, math.gcd(a, b))


class MultOrderTestCase(SimpleTestCase):
    def test_examples(self):
        """测试乘法阶的例子."""
        self.assertEqual(mult_order(2, 7), 3)
        self.assertEqual(mult_order(2, 15), 4)
        self.assertEqual(mult_order(3, 80), 4)
        self.assertEqual(mult_order(2, 1), 1)
        self.assertEqual(mult_order(2, factor(15)), 4)

    def test_against_brute_force(self):
        """测试与逐次相乘一致."""
        for p in (2, 3, 5, 7):
            for m in range(1, 400):
                if m % p:
                    self.assertEqual(
                        mult_order(p, m), mult_order_brute_force(p, m), (p, m)
                    )

    def test_order_properties(self):
        """测试阶整除 λ(m)，且互素模数的阶取最小公倍数."""
        for m in range(3, 200, 2):
            order = mult_order(2, m)
            self.assertEqual(carmichael_lambda(factor(m)).value % order, 0)
            self.assertEqual(pow(2, order, m), 1)
        self.assertEqual(
            mult_order(2, 7 * 31), math.lcm(mult_order(2, 7), mult_order(2, 31))
        )

    def test_not_coprime(self):
        """测试 gcd(p, m) > 1 时抛 DomainError."""
        with self.assertRaises(DomainError):
            mult_order(2, 6)


class RhoTestCase(SimpleTestCase):
    def test_examples(self):
        """测试 ρ_n(m) 的例子."""
        self.assertEqual(rho(2, 8), 4)
        self.assertEqual(rho(4, 13), 4)
        for m in range(1, 50):
            self.assertEqual(rho(1, m), 1)

    def test_against_brute_force(self):
        """测试与逐个剩余类计数一致（含 2 的高次幂）."""
        for m in range(1, 130):
            table = rho_brute_force_table(m, 8)
            for n in range(1, 9):
                self.assertEqual(rho(n, m), table[n - 1], (n, m))
        self.assertEqual(rho_brute_force_table(8, 4), [1, 4, 1, 4])
        self.assertEqual(rho(4, 64), rho_brute_force(4, 64))

    def test_multiplicative(self):
        """测试互素时可乘."""
        for m1, m2 in ((8, 9), (5, 16), (7, 11), (25, 12)):
            for n in range(1, 13):
                self.assertEqual(rho(n, m1 * m2), rho(n, m1) * rho(n, m2))

    def test_domain(self):
        """测试 m = 0."""
        with self.assertRaises(DomainError):
            rho(2, 0)


class PrimePowerTestCase(SimpleTestCase):
    def test_enumeration(self):
        """测试素数幂枚举与 Q(x)."""
        self.assertEqual(
            [pp.q for pp in enumerate_prime_powers(10).entries], [2, 3, 4, 5, 7, 8, 9]
        )
        self.assertEqual([pp.q for pp in enumerate_prime_powers(2).entries], [2])
        self.assertEqual(enumerate_prime_powers(100).count, 35)
        self.assertEqual(enumerate_prime_powers(1.5).count, 0)

    def test_count_matches_prime_pi_sum(self):
        """测试 Q(x) = Σ_k π(x^{1/k})."""
        for x in (2, 10, 100, 1000, 4096, 10**5):
            self.assertEqual(enumerate_prime_powers(x).count, prime_power_count(x))

    def test_from_q(self):
        """测试由 q 还原 (p, r)."""
        self.assertEqual(PrimePower.from_q(9), PrimePower(3, 2))
        self.assertEqual(PrimePower.from_q(9).q, 9)
        for bad in (1, 6, 12):
            with self.assertRaises(InvalidArgument):
                PrimePower.from_q(bad)

    def test_check_range(self):
        """测试 2^128 上限."""
        self.assertEqual(check_range(2**128 - 1), 2**128 - 1)
        with self.assertRaises(RangeError):
            check_range(2**128)


class FactorizationCacheTestCase(SimpleTestCase):
    def setUp(self):
        """初始化."""
        handle, self.path = tempfile.mkstemp(suffix=".txt")
        os.close(handle)

    def tearDown(self):
        """清理临时文件."""
        os.remove(self.path)

    def test_save_and_load(self):
        """测试写出后再读回."""
        cache = FactorizationCache()
        for n in (360, 97, 2**64 + 1):
            factor(n, cache=cache)
        self.assertEqual(cache.save(self.path), 3)

        loaded = FactorizationCache()
        self.assertEqual(loaded.load(self.path), 3)
        self.assertEqual(loaded.get(360), factor(360, cache=None))
        self.assertEqual(loaded.stats()["hits"], 1)

        with open(self.path, encoding="utf-8") as handle:
            first = handle.readline().split()
        self.assertEqual(first, ["97", "97", "1"])

    def test_corrupt_lines_rejected(self):
        """测试损坏的行被拒收并记 warning."""
        with open(self.path, "w", encoding="utf-8") as handle:
            handle.write("12 2 2 3 1\n")
            handle.write("not a line\n")
            handle.write("20 2 2 5 2\n")
            handle.write("15 3 1 5 1\n")
            handle.write("14 2 1 7 1\n")
        cache = FactorizationCache()
        with self.assertLogs("densities.arith", level="WARNING") as logs:
            loaded = cache.load(self.path)
        self.assertEqual(loaded, 2)
        self.assertEqual(cache.stats()["rejected"], 3)
        self.assertEqual(len(logs.records), 3)
        self.assertIsNotNone(cache.get(15))
        self.assertIsNone(cache.get(14))

    def test_missing_file(self):
        """测试文件不存在时从空缓存开始."""
        cache = FactorizationCache()
        self.assertEqual(cache.load(self.path + ".missing"), 0)
        self.assertEqual(len(cache), 0)

    def test_get_or_insert_keeps_first(self):
        """测试 get-or-insert 语义."""
        cache = FactorizationCache()
        first = cache.get_or_insert(12, lambda n: factor(n, cache=None))
        second = cache.get_or_insert(12, lambda n: self.fail("recomputed"))
        self.assertIs(first, second)
