"""极限常数的带误差界求值。.

- euler_product_pn: p_n = (1/n) Π_p (1 - gcd(p-1, n)/(p(p-1)))
- series_P_grouped: P(p, r) = Σ' μ(m)/m · gcd(ℓ_p(m), r)/ℓ_p(m)，按阶 k 分组，
  每组只涉及 p^k - 1 的无平方因子因子，组内精确有理求和
- series_P_direct: 同一级数按 m 自然顺序直接求和，仅作交叉校验

返回值 CertifiedValue 的 [estimate - error_bound, estimate + error_bound]
一定包含真值；误差界的推导写在 meta 里。
"""

import logging
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import (
    FACTOR_CACHE,
    check_range,
    divisors,
    euler_phi,
    factor,
    factor_qn_minus_1,
    is_prime,
    mult_order,
    sieve_multiplicative,
    sieve_primes,
)
from .exceptions import FactorizationExhausted, InvalidArgument

logger = logging.getLogger("densities.constants")

EULER_GAMMA = 0.5772156649015329
# σ(N)/N ≤ e^γ·log log N + ROBIN_C / log log N，N ≥ 3
ROBIN_C = 0.6483
# 尾项中显式求和的项数，其后用闭式上界
TAIL_HEAD_TERMS = 10**5
DEFAULT_PRIME_BOUND = 10**6

_EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class CertifiedValue:
    """数值估计 + 严格误差界 + 截断参数。.

    Attributes:
        estimate: 截断后的数值。
        error_bound: |estimate - 真值| 的上界（≥ 0，有限）。
        truncation: 乘积的素数上界 P 或级数的 K。
        meta: 误差界的推导说明。
        exact: 截断和的精确有理值（可得时）。
    """

    estimate: float
    error_bound: float
    truncation: int
    meta: str = ""
    exact: Fraction | None = field(default=None, compare=False)

    def __post_init__(self):
        """校验误差界。."""
        if not (self.error_bound >= 0 and math.isfinite(self.error_bound)):
            raise InvalidArgument(f"invalid error bound {self.error_bound}")

    @property
    def lower(self):
        return self.estimate - self.error_bound

    @property
    def upper(self):
        return self.estimate + self.error_bound

    def contains(self, value):
        return self.lower <= value <= self.upper

    def intersects(self, other):
        return self.lower <= other.upper and other.lower <= self.upper

    @property
    def contains_zero(self):
        return self.contains(0.0)

    def scaled(self, factor_):
        """乘以正的有理常数（用于 P(p, n)/n）。."""
        factor_ = Fraction(factor_)
        exact = self.exact * factor_ if self.exact is not None else None
        scale = float(factor_)
        return CertifiedValue(
            estimate=self.estimate * scale,
            error_bound=self.error_bound * scale * (1 + 2 * _EPS)
            + abs(self.estimate * scale) * _EPS,
            truncation=self.truncation,
            meta=f"{self.meta}; scaled by {factor_}",
            exact=exact,
        )

    def as_dict(self):
        return {
            "estimate": self.estimate,
            "error_bound": self.error_bound,
            "lower": self.lower,
            "upper": self.upper,
            "truncation": self.truncation,
            "meta": self.meta,
        }


@dataclass(frozen=True)
class OrderGroupedTerm:
    """阶为 k 的一组：support 为全部 ℓ_p(m) = k 的无平方因子 m。."""

    k: int
    inner_sum: Fraction
    support: tuple = ()


# ===========================================================================
# Euler 乘积 p_n
# ===========================================================================


def euler_product_pn(n, prime_bound=DEFAULT_PRIME_BOUND):
    """截断到 p ≤ prime_bound 的 p_n，带尾部误差界。.

    t_p = gcd(p-1, n)/(p(p-1)) ≤ 1/p ≤ 1/2，而 0 ≤ t ≤ 1/2 时
    |log(1-t)| ≤ 2t；又 Σ_{p>P} t_p ≤ n Σ_{m>P} 1/(m(m-1)) = n/P，
    所以尾部对数落在 [-2n/P, 0]，真值在 [est·e^{-2n/P}, est] 中。
    对数逐项用 log1p 求出后 fsum 精确累加，另加浮点舍入余量。
    """
    if n < 1:
        raise InvalidArgument(f"n = {n} must be ≥ 1")
    if prime_bound < 2:
        raise InvalidArgument(f"prime_bound = {prime_bound} must be ≥ 2")
    primes = sieve_primes(int(prime_bound))
    gcds = np.gcd(primes - 1, n).astype(np.float64)
    p = primes.astype(np.float64)
    t = gcds / (p * (p - 1))
    log_product = math.fsum(np.log1p(-t).tolist())
    estimate = math.exp(log_product) / n

    tail = 2 * n / prime_bound
    rounding = estimate * 8 * _EPS * (abs(log_product) + 1)
    error_bound = estimate * -math.expm1(-tail) + rounding
    return CertifiedValue(
        estimate=estimate,
        error_bound=error_bound,
        truncation=int(prime_bound),
        meta=(
            f"tail log-product in [-2n/P, 0] with n={n}, P={prime_bound} "
            "(|log(1-t)| <= 2t for t <= 1/2, sum_{m>P} 1/(m(m-1)) = 1/P); "
            "bound = est*(1-exp(-2n/P)) + rounding"
        ),
    )


def euler_product_naive(n, prime_bound):
    """逐个素数相乘的 p_n 截断值（纯 Python，独立于 numpy 路径）。."""
    limit = int(prime_bound)
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    product = 1.0
    for p in range(2, limit + 1):
        if not flags[p]:
            continue
        flags[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
        product *= 1 - math.gcd(p - 1, n) / (p * (p - 1))
    return product / n


# ===========================================================================
# 级数 P(p, r)
# ===========================================================================


def default_series_truncation(p):
    """K 的默认值：p = 2 取 64，否则 floor(127/log2 p)，保证 p^K - 1 < 2^128。."""
    if p == 2:
        return 64
    return int(127 // math.log2(p))


def _order_of_prime(p, ell, k):
    # ℓ | p^k - 1，所以 ℓ_p(ℓ) 是 k 的某个因子
    return min(d for d in divisors(factor(k)) if pow(p, d, ell) == 1)


def order_grouped_terms(p, K, cache=FACTOR_CACHE):
    """k = 1..K 的分组项。.

    ℓ_p(m) = k 的 m 都整除 p^k - 1；无平方因子 m 的阶是其素因子阶的
    最小公倍数，所以对 p^k - 1 的素因子子集枚举即可。

    Raises:
        FactorizationExhausted: 某个 p^k - 1 分解失败，消息中注明 k。
    """
    if not is_prime(p):
        raise InvalidArgument(f"p = {p} is not prime")
    if K < 1:
        raise InvalidArgument(f"K = {K} must be ≥ 1")
    check_range(p**K - 1, f"{p}^{K} - 1")
    terms = []
    for k in range(1, K + 1):
        try:
            f = factor_qn_minus_1(p, k, cache=cache)
        except FactorizationExhausted as exc:
            raise FactorizationExhausted(
                exc.n,
                f"factorization exhausted on {exc.n} while factoring "
                f"{p}^{k} - 1 (k={k})",
                k=k,
            ) from exc
        # (m, μ(m), ℓ_p(m))
        subsets = [(1, 1, 1)]
        for ell in f.primes:
            order = _order_of_prime(p, ell, k)
            subsets += [(m * ell, -mu, math.lcm(o, order)) for m, mu, o in subsets]
        support = sorted((m, mu) for m, mu, o in subsets if o == k)
        inner = sum((Fraction(mu, m) for m, mu in support), Fraction(0))
        terms.append(OrderGroupedTerm(k, inner, tuple(m for m, _ in support)))
    return terms


def _robin_bound(T):
    return math.exp(EULER_GAMMA) * T + ROBIN_C / T


def tail_bound_series(p, r, K, head_terms=TAIL_HEAD_TERMS):
    """Σ_{k>K} (gcd(k,r)/k)·Σ'_{ℓ_p(m)=k} 1/m 的显式上界。.

    gcd(k, r) = Σ_{d|gcd(k,r)} φ(d) 把尾项拆成
    Σ_{d|r} (φ(d)/d) Σ_{j≥M} S(jd)/j，M = floor(K/d) + 1。
    A(x) = Σ_{j≤x} S(jd) ≤ σ(E)/E，E = Π_{j≤x}(p^{jd} - 1) ≤ p^{d x(x+1)/2}，
    σ(N)/N ≤ h(T) = e^γ T + 0.6483/T，T = max(log log N, 1)
    （N ≥ 3 时为 Robin 不等式，N ≤ 15 直接验证 σ(N)/N ≤ 2.43 = h(1)）。
    分部求和得 Σ_{j≥M} S(jd)/j ≤ Σ_{j≥M} B(j)/(j(j+1))：前 head_terms 项
    直接相加，其余用 B(j) ≤ α + β log(j+1) 与积分比较给出闭式上界。
    """
    c_gamma = math.exp(EULER_GAMMA)
    beta = 2 * c_gamma
    total = 0.0
    for d in divisors(factor(r)):
        c = d * math.log(p) / 2
        M = K // d + 1
        j = np.arange(M, M + head_terms, dtype=np.float64)
        T = np.maximum(np.log(c * j * (j + 1)), 1.0)
        head = math.fsum((_robin_bound(T) / (j * (j + 1))).tolist())
        head *= 1 + 1e-12
        # j ≥ M' 的部分：Σ α/(j(j+1)) = α/M'，Σ log(j+1)/(j(j+1)) ≤ ∫_{M'-1}^∞
        M_rest = M + head_terms
        alpha = c_gamma * (max(math.log(c), 0.0) + 1) + ROBIN_C
        m = M_rest - 1
        rest = alpha / M_rest + beta * ((math.log(m) + 1) / m + 1 / (2 * m * m))
        total += euler_phi(factor(d)) / d * (head + rest)
    return total * (1 + 1e-12)


def series_P_grouped(p, r, K=None, cache=FACTOR_CACHE):
    """按阶分组求 P(p, r) 的前 K 组，带尾部上界。.

    estimate = Σ_{k≤K} (gcd(k,r)/k)·inner_sum(k)，精确有理累加后再转浮点。
    区间包含 0 时只记 warning，不作断言。
    """
    if not is_prime(p):
        raise InvalidArgument(f"p = {p} is not prime")
    if r < 1:
        raise InvalidArgument(f"r = {r} must be ≥ 1")
    K = default_series_truncation(p) if K is None else K
    terms = order_grouped_terms(p, K, cache=cache)
    exact = sum(
        (Fraction(math.gcd(t.k, r), t.k) * t.inner_sum for t in terms), Fraction(0)
    )
    estimate = float(exact)
    tail = tail_bound_series(p, r, K)
    value = CertifiedValue(
        estimate=estimate,
        error_bound=tail + abs(estimate) * _EPS,
        truncation=K,
        meta=(
            f"exact grouped sum over k <= {K}; tail via gcd(k,r) = sum phi(d), "
            "sigma(E)/E <= e^gamma*T + 0.6483/T on E_p(x,d), partial summation"
        ),
        exact=exact,
    )
    if value.contains_zero:
        logger.warning(f"Certified interval for P({p},{r}) at K={K} contains 0")
    return value


def _squarefree_coprime(p, M):
    tables = sieve_multiplicative(M)
    mu = tables.mu
    for m in range(1, M + 1):
        if mu[m] and m % p:
            yield m, int(mu[m])


def series_P_direct(p, r, M):
    """按 m ≤ M 自然顺序直接求和（无误差界，仅作交叉校验）。."""
    if not is_prime(p):
        raise InvalidArgument(f"p = {p} is not prime")
    terms = []
    for m, mu in _squarefree_coprime(p, M):
        order = mult_order(p, m)
        terms.append(mu / m * (math.gcd(order, r) / order))
    return math.fsum(terms)


def romanoff_partial(p, lo, hi):
    """Σ' 1/(m·ℓ_p(m))，m 取 (lo, hi] 中与 p 互素的无平方因子数。."""
    return math.fsum(
        1 / (m * mult_order(p, m)) for m, _ in _squarefree_coprime(p, hi) if m > lo
    )
