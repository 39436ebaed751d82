"""整数算术基础模块。.

为上层（singer / constants / ensembles）提供精确整数运算：

- sieve_multiplicative / sieve_primes: numpy 筛法求 μ, φ, τ, σ 与素数表
- is_prime: 2^128 以内的确定性素性判定
- factor / factor_qn_minus_1: 试除 + Brent rho 分解，q^n-1 按分圆因子拆开
- euler_phi / carmichael_lambda / mult_order / rho: 数论函数
- enumerate_prime_powers: 素数幂枚举 Q(x)
- FactorizationCache: 可选的分解缓存（内存 + 文本文件）

所有数值上限为 2^128，超出即抛 RangeError，不做任意精度扩展。
"""

import logging
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import count

import numpy as np

from . import conf
from .exceptions import (
    DomainError,
    FactorizationExhausted,
    InvalidArgument,
    RangeError,
    SizeError,
)

logger = logging.getLogger("densities.arith")

MAX_MAGNITUDE = 1 << 128

# Miller-Rabin 分段见证表：(上界, 见证)，上界以内已证明确定
MR_WITNESS_TIERS = (
    (2047, (2,)),
    (1373653, (2, 3)),
    (25326001, (2, 3, 5)),
    (3215031751, (2, 3, 5, 7)),
    (2152302898747, (2, 3, 5, 7, 11)),
    (3474749660383, (2, 3, 5, 7, 11, 13)),
    (341550071728321, (2, 3, 5, 7, 11, 13, 17)),
    (3825123056546413051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (318665857834031151167461, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
    (3317044064679887385961981, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)),
)
MR_WITNESSES = MR_WITNESS_TIERS[-1][1]
MR_PROVEN_BOUND = MR_WITNESS_TIERS[-1][0]

SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    73, 79, 83, 89, 97,
)  # fmt: skip

# rho 的固定参数表：f(x) = x^2 + c，起点 x0 = 2
RHO_CONSTANTS = (1, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_INT64_SAFE = 1 << 62


def check_range(value, what="value"):
    """确认 value 落在 [0, 2^128) 内，否则抛 RangeError。."""
    if value >= MAX_MAGNITUDE:
        raise RangeError(f"{what} = {value} exceeds the 2^128 magnitude cap")
    return value


# ===========================================================================
# 数据类型
# ===========================================================================


@dataclass(frozen=True)
class Factorization:
    """正整数的素因子分解。.

    Attributes:
        value: 被分解的正整数（< 2^128）。
        factors: 升序的 (素数, 指数) 元组；value = 1 时为空。
    """

    value: int
    factors: tuple = ()

    @property
    def primes(self):
        return tuple(p for p, _ in self.factors)

    def product(self):
        """把因子乘回去。."""
        result = 1
        for p, e in self.factors:
            result *= p**e
        return result

    def check(self):
        """校验不变量：乘积、素数升序、每个素数通过素性判定。."""
        if self.product() != self.value:
            raise DomainError(f"factors of {self.value} multiply to {self.product()}")
        previous = 1
        for p, e in self.factors:
            if p <= previous or e < 1 or not is_prime(p):
                raise DomainError(f"invalid factor {p}^{e} in factorization")
            previous = p
        return self

    def __mul__(self, other):
        """两个分解相乘（指数相加）。."""
        return merge_factorizations([self, other])

    def __str__(self):
        """返回 '2^3 · 3' 形式。."""
        if not self.factors:
            return "1"
        return " · ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


def merge_factorizations(parts):
    """合并若干分解（对应整数相乘）。."""
    exponents = {}
    value = 1
    for part in parts:
        value *= part.value
        for p, e in part.factors:
            exponents[p] = exponents.get(p, 0) + e
    return Factorization(value, tuple(sorted(exponents.items())))


@dataclass(frozen=True)
class PrimePower:
    """素数幂 q = p^r。."""

    p: int
    r: int = 1

    def __post_init__(self):
        """校验 p 为素数、r ≥ 1、q 未越界。."""
        if self.r < 1 or not is_prime(self.p):
            raise InvalidArgument(f"{self.p}^{self.r} is not a prime power")
        check_range(self.p**self.r, "q")

    @property
    def q(self):
        return self.p**self.r

    @classmethod
    def from_q(cls, q):
        """由整数 q 还原 (p, r)，q 不是素数幂时抛 InvalidArgument。."""
        if q < 2:
            raise InvalidArgument(f"{q} is not a prime power")
        f = factor(q)
        if len(f.factors) != 1:
            raise InvalidArgument(f"{q} is not a prime power ({f})")
        (p, r), = f.factors
        return cls(p, r)

    def __int__(self):
        """返回 q。."""
        return self.q

    def __str__(self):
        """返回 q 的十进制写法。."""
        return str(self.q)


@dataclass(frozen=True)
class MultiplicativeTables:
    """1..limit 上的 μ, φ, τ, σ 表（下标 0 不使用）。."""

    limit: int
    mu: np.ndarray
    phi: np.ndarray
    tau: np.ndarray
    sigma: np.ndarray


@dataclass(frozen=True)
class PrimePowerEnumeration:
    """x 以内全部素数幂（升序）及其个数 Q(x)。."""

    x: float
    entries: tuple = ()

    @property
    def count(self):
        return len(self.entries)


# ===========================================================================
# 筛法
# ===========================================================================


@lru_cache(maxsize=8)
def sieve_primes(limit):
    """返回 limit 以内全部素数（numpy int64 数组）。."""
    limit = int(limit)
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    primes = np.flatnonzero(is_p).astype(np.int64)
    primes.setflags(write=False)
    return primes


def prime_pi(x):
    """π(x)，由筛法素数表计数。."""
    if x < 2:
        return 0
    return int(len(sieve_primes(int(math.floor(x)))))


def sieve_multiplicative(limit, cap=None):
    """筛出 1..limit 上的 μ, φ, τ, σ。.

    对每个素数 p 依次处理 p, p^2, ... 的倍数；τ、σ 在 p^k 处先除掉
    p^{k-1} 的局部因子再乘上 p^k 的局部因子，全程保持整数精确。

    Args:
        limit: 表长上限，1 ≤ limit ≤ cap。
        cap: 内存保护上限，默认 SINGER_SIEVE_CAP。

    Returns:
        MultiplicativeTables。

    Raises:
        SizeError: limit = 0 或超过 cap。
    """
    cap = conf.get("SINGER_SIEVE_CAP") if cap is None else cap
    if limit < 1 or limit > cap:
        raise SizeError(f"sieve limit {limit} outside [1, {cap}]")

    mu = np.ones(limit + 1, dtype=np.int8)
    phi = np.arange(limit + 1, dtype=np.int64)
    tau = np.ones(limit + 1, dtype=np.int64)
    sigma = np.ones(limit + 1, dtype=np.int64)
    mu[0] = phi[0] = tau[0] = sigma[0] = 0

    for p in sieve_primes(limit).tolist():
        mu[p::p] *= -1
        phi[p::p] -= phi[p::p] // p
        tau[p::p] *= 2
        sigma[p::p] *= 1 + p
        pk, k = p * p, 2
        prev_sigma = 1 + p
        while pk <= limit:
            mu[pk::pk] = 0
            local_sigma = prev_sigma + pk
            tau[pk::pk] //= k
            tau[pk::pk] *= k + 1
            sigma[pk::pk] //= prev_sigma
            sigma[pk::pk] *= local_sigma
            prev_sigma = local_sigma
            pk *= p
            k += 1

    logger.info(f"Multiplicative sieve built up to {limit}")
    return MultiplicativeTables(limit=limit, mu=mu, phi=phi, tau=tau, sigma=sigma)


def segmented_mertens(limit, segment=1 << 15):
    """分段筛计算 Mertens 函数 M(limit) = Σ μ(k)。.

    纯 Python 实现，与 sieve_multiplicative 互不依赖，用作校验。
    """
    if limit < 1:
        return 0
    root = math.isqrt(limit)
    base = [
        p for p in range(2, root + 1) if all(p % d for d in range(2, math.isqrt(p) + 1))
    ]
    total = 0
    for lo in range(1, limit + 1, segment):
        hi = min(lo + segment, limit + 1)
        rem = list(range(lo, hi))
        mu = [1] * (hi - lo)
        for p in base:
            start = ((lo + p - 1) // p) * p
            for n in range(start, hi, p):
                i = n - lo
                mu[i] = -mu[i]
                rem[i] //= p
            pp = p * p
            start = ((lo + pp - 1) // pp) * pp
            for n in range(start, hi, pp):
                mu[n - lo] = 0
        for i in range(hi - lo):
            if mu[i] and rem[i] > 1:
                mu[i] = -mu[i]
        total += sum(mu)
    return total


# ===========================================================================
# 素性判定
# ===========================================================================


def _strong_probable_prime(n, a):
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
        if x == 1:
            return False
    return False


def _jacobi(a, n):
    a %= n
    t = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def _strong_lucas_probable_prime(n):
    """Selfridge 参数的强 Lucas 检验（n 为奇数且非平方数）。."""
    for d in count(5, 2):
        dd = d if d % 4 == 1 else -d
        j = _jacobi(dd, n)
        if j == 0:
            return abs(dd) == n
        if j == -1:
            break
        if d == 13 and math.isqrt(n) ** 2 == n:
            return False
    p, q = 1, (1 - dd) // 4
    k, s = n + 1, 0
    while k % 2 == 0:
        k //= 2
        s += 1
    # 二进制展开计算 U_k, V_k, Q^k
    u, v, qk = 0, 2, 1
    inv2 = (n + 1) // 2
    for bit in bin(k)[2:]:
        u, v = u * v % n, (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = (p * u + v) * inv2 % n, (dd * u + p * v) * inv2 % n
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if v == 0:
            return True
    return False


@lru_cache(maxsize=1 << 16)
def is_prime(n):
    """2^128 以内的确定性素性判定。.

    小素数试除后做强伪素数检验，见证集合按 n 的大小分段选取，
    n < 3.317·10^24 时已证明确定；更大的 n 用 13 个见证再加强 Lucas
    检验（Baillie-PSW）。同一输入永远给出同一结果。
    """
    if n < 2:
        return False
    for p in SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < 97 * 97:
        return True
    check_range(n, "primality candidate")
    for bound, witnesses in MR_WITNESS_TIERS:
        if n < bound:
            return all(_strong_probable_prime(n, a) for a in witnesses)
    if not all(_strong_probable_prime(n, a) for a in MR_WITNESSES):
        return False
    return _strong_lucas_probable_prime(n)


# ===========================================================================
# 分解
# ===========================================================================


class FactorizationCache:
    """分解缓存：带锁的 get-or-insert 映射，可选落盘。.

    文件格式每行 "N p1 e1 p2 e2 ..."，按 N 升序；加载时逐行校验，
    损坏的行记 warning 后丢弃。
    """

    def __init__(self, maxsize=1 << 20):
        """初始化空缓存。."""
        self.maxsize = maxsize
        self.path = None
        self.hits = 0
        self.misses = 0
        self.rejected = 0
        self._entries = {}
        self._lock = threading.Lock()

    def __len__(self):
        """条目数。."""
        return len(self._entries)

    def get(self, n):
        with self._lock:
            f = self._entries.get(n)
            if f is None:
                self.misses += 1
            else:
                self.hits += 1
            return f

    def get_or_insert(self, n, compute):
        """命中直接返回；否则计算后插入（已有则保留先插入者）。."""
        f = self.get(n)
        if f is not None:
            return f
        f = compute(n)
        with self._lock:
            if len(self._entries) < self.maxsize:
                f = self._entries.setdefault(n, f)
        return f

    def clear(self):
        with self._lock:
            self._entries.clear()
            self.hits = self.misses = self.rejected = 0

    def stats(self):
        """返回统计信息。."""
        return {
            "entries": len(self._entries),
            "hits": self.hits,
            "misses": self.misses,
            "rejected": self.rejected,
            "path": self.path,
        }

    @staticmethod
    def parse_line(line):
        """解析并校验一行，非法时抛 DomainError。."""
        try:
            numbers = [int(token) for token in line.split()]
        except ValueError as exc:
            raise DomainError(f"non-integer token in cache line {line!r}") from exc
        if not numbers or len(numbers) % 2 != 1:
            raise DomainError(f"malformed cache line {line!r}")
        n, rest = numbers[0], numbers[1:]
        if not 1 <= n < MAX_MAGNITUDE:
            raise DomainError(f"cache value {n} out of range")
        factors = tuple(zip(rest[::2], rest[1::2], strict=True))
        return Factorization(n, factors).check()

    def load(self, path):
        """从文件加载；返回成功加载的条目数。."""
        self.path = str(path)
        loaded = 0
        try:
            handle = open(path, encoding="utf-8")
        except FileNotFoundError:
            logger.info(f"Factorization cache {path} not found, starting empty")
            return 0
        previous = 0
        with handle:
            for lineno, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    f = self.parse_line(line)
                    if f.value <= previous:
                        raise DomainError(f"cache values not ascending at {f.value}")
                except DomainError as exc:
                    self.rejected += 1
                    logger.warning(f"Rejected cache line {lineno} in {path}: {exc}")
                    continue
                previous = f.value
                with self._lock:
                    self._entries.setdefault(f.value, f)
                loaded += 1
        logger.info(f"Loaded {loaded} factorizations from {path}")
        return loaded

    def save(self, path=None):
        """按 N 升序写出全部条目。."""
        path = path or self.path
        if path is None:
            return 0
        with self._lock:
            entries = sorted(self._entries.values(), key=lambda f: f.value)
        with open(path, "w", encoding="utf-8") as handle:
            for f in entries:
                tokens = [str(f.value)]
                for p, e in f.factors:
                    tokens += [str(p), str(e)]
                handle.write(" ".join(tokens) + "\n")
        logger.info(f"Saved {len(entries)} factorizations to {path}")
        return len(entries)


FACTOR_CACHE = FactorizationCache()


def _iroot(n, k):
    """整数 k 次方根的下取整。."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _trial_divide(n, bound):
    """用 bound 以内的素数试除，返回 (找到的因子 dict, 余下的余因子)。."""
    primes = sieve_primes(bound)
    found = {}

    def divide_out(p):
        nonlocal n
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        found[p] = e

    if n < _INT64_SAFE:
        # numpy 向量化取模，一次找出全部小素因子
        for p in primes[np.int64(n) % primes == 0].tolist():
            divide_out(p)
        return found, n
    for i, p in enumerate(primes.tolist()):
        if p * p > n:
            break
        if n % p == 0:
            divide_out(p)
        # 余因子已是素数时提前结束
        if i % 512 == 511 and (n == 1 or is_prime(n)):
            break
    return found, n


def _brent_rho(n, budget):
    """Brent 版 Pollard rho，按固定常数表依次尝试。.

    Returns:
        (非平凡因子或 None, 消耗的迭代步数)
    """
    used = 0
    for c in RHO_CONSTANTS:
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            used += r
            r *= 2
            if used > budget:
                return None, used
        if g == n:
            # 批量 gcd 越过了因子，逐步回退
            while True:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
                if g > 1:
                    break
        if 1 < g < n:
            return g, used
    return None, used


def _split_cofactor(n, found, budget, trial_bound):
    """把不含小素因子的余因子完全拆成素数，结果累加进 found。."""
    stack = [n]
    remaining = budget
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m < trial_bound * trial_bound or is_prime(m):
            found[m] = found.get(m, 0) + 1
            continue
        for k in range(2, m.bit_length()):
            root = _iroot(m, k)
            if root**k == m:
                stack.extend([root] * k)
                break
        else:
            g, used = _brent_rho(m, remaining)
            remaining -= used
            if g is None:
                raise FactorizationExhausted(m)
            stack.extend([g, m // g])


def _compute_factorization(n, trial_bound=None, rho_budget=None):
    trial_bound = trial_bound or conf.get("SINGER_TRIAL_BOUND")
    rho_budget = rho_budget or conf.get("SINGER_RHO_BUDGET")
    found, rest = _trial_divide(n, trial_bound)
    if rest > 1:
        _split_cofactor(rest, found, rho_budget, trial_bound)
    return Factorization(n, tuple(sorted(found.items())))


def factor(n, cache=FACTOR_CACHE, trial_bound=None, rho_budget=None):
    """分解 1 ≤ n < 2^128。.

    先用 trial_bound（默认 10^5）以内的素数试除，余因子交给 Brent rho；
    rho 的常数表与起点固定，所以同一 n 总得到同一结果或同一错误。

    Raises:
        DomainError: n ≤ 0。
        RangeError: n ≥ 2^128。
        FactorizationExhausted: 预算内未能拆开某个合数。
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    check_range(n, "n")
    if n == 1:
        return Factorization(1, ())
    if cache is None:
        return _compute_factorization(n, trial_bound, rho_budget)
    return cache.get_or_insert(
        n, lambda m: _compute_factorization(m, trial_bound, rho_budget)
    )


def divisors(f):
    """f.value 的全部正因子（升序）。."""
    result = [1]
    for p, e in f.factors:
        result = [d * p**k for d in result for k in range(e + 1)]
    return sorted(result)


def squarefree_divisors(f):
    """f.value 的无平方因子因子，返回 (d, μ(d)) 列表，按 d 升序。."""
    result = [(1, 1)]
    for p, _ in f.factors:
        result += [(d * p, -s) for d, s in result]
    return sorted(result)


def mobius(n):
    """单点 Möbius 函数 μ(n)。."""
    f = factor(n)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def cyclotomic_value(d, q):
    """Φ_d(q)，由 Π_{e|d} (q^e - 1)^{μ(d/e)} 精确计算。."""
    numerator, denominator = 1, 1
    for e, mu in squarefree_divisors(factor(d)):
        term = q ** (d // e) - 1
        if mu == 1:
            numerator *= term
        else:
            denominator *= term
    value, remainder = divmod(numerator, denominator)
    assert remainder == 0, f"Φ_{d}({q}) is not integral"
    return value


def factor_qn_minus_1(q, n, cache=FACTOR_CACHE):
    """分解 q^n - 1：逐个分解分圆值 Φ_d(q)（d | n）再合并。.

    Raises:
        RangeError: q^n - 1 ≥ 2^128。
    """
    q = int(q)
    if n < 1 or q < 2:
        raise DomainError(f"q^n - 1 undefined for q={q}, n={n}")
    check_range(q**n - 1, f"{q}^{n} - 1")
    parts = [factor(cyclotomic_value(d, q), cache=cache) for d in divisors(factor(n))]
    return merge_factorizations(parts)


# ===========================================================================
# 数论函数
# ===========================================================================


def euler_phi(f):
    """φ(f.value) = Π p^{e-1}(p-1)。."""
    result = 1
    for p, e in f.factors:
        result *= p ** (e - 1) * (p - 1)
    return result


def carmichael_lambda(f):
    """Carmichael 函数 λ(m)，以分解形式返回。.

    λ(m) 由各 λ(p^e) 取最小公倍数；p-1 逐个分解后按指数取最大，不会去分解
    λ(m) 这个整数本身。
    """
    exponents = {}

    def absorb(pairs):
        for prime, e in pairs:
            if e > exponents.get(prime, 0):
                exponents[prime] = e

    for p, e in f.factors:
        if p == 2:
            if e == 2:
                absorb([(2, 1)])
            elif e >= 3:
                absorb([(2, e - 2)])
            continue
        absorb(factor(p - 1).factors)
        if e > 1:
            absorb([(p, e - 1)])
    factors = tuple(sorted(exponents.items()))
    value = 1
    for p, e in factors:
        value *= p**e
    return Factorization(value, factors)


def mult_order(p, m):
    """ℓ_p(m)：最小的 k ≥ 1 使 p^k ≡ 1 (mod m)，约定 ℓ_p(1) = 1。.

    从 λ(m) 出发，对 λ(m) 的每个素因子 ℓ 尽量除掉，保持 p^k ≡ 1。

    Args:
        p: 底数（通常为素数）。
        m: 模数，int 或已分解的 Factorization。

    Raises:
        DomainError: m < 1 或 gcd(p, m) > 1。
    """
    f = m if isinstance(m, Factorization) else None
    m = f.value if f is not None else int(m)
    if m < 1:
        raise DomainError(f"modulus {m} must be positive")
    if math.gcd(p, m) != 1:
        raise DomainError(f"gcd({p}, {m}) > 1, order undefined")
    if m == 1:
        return 1
    lam = carmichael_lambda(f or factor(m))
    order = lam.value
    for ell, e in lam.factors:
        for _ in range(e):
            if pow(p, order // ell, m) == 1:
                order //= ell
            else:
                break
    return order


def rho(n, m):
    """ρ_n(m) = #{a mod m : a^n ≡ 1 (mod m)}。.

    按 m 的分解相乘，素数幂处用单位群结构：
    奇 p^e 为 gcd(φ(p^e), n)；2 为 1；4 为 gcd(2, n)；
    2^e (e ≥ 3) 为 gcd(2, n)·gcd(2^{e-2}, n)。
    """
    if m < 1:
        raise DomainError(f"modulus {m} must be positive")
    if n < 1:
        raise DomainError(f"exponent {n} must be positive")
    result = 1
    for p, e in factor(m).factors:
        if p != 2:
            result *= math.gcd(p ** (e - 1) * (p - 1), n)
        elif e == 2:
            result *= math.gcd(2, n)
        elif e >= 3:
            result *= math.gcd(2, n) * math.gcd(2 ** (e - 2), n)
    return result


def rho_brute_force(n, m):
    """逐个剩余类计数的 ρ_n(m)，用作校验。."""
    return sum(1 for a in range(m) if math.gcd(a, m) == 1 and pow(a, n, m) == 1 % m)


def rho_brute_force_table(m, n_max):
    """对 n = 1..n_max 一次性穷举 ρ_n(m)，返回长度 n_max 的列表。."""
    residues = np.arange(m, dtype=np.int64)
    units = np.gcd(residues, m) == 1
    power = residues % m
    counts = []
    for _ in range(n_max):
        counts.append(int(np.count_nonzero(units & (power == 1 % m))))
        power = power * residues % m
    return counts


def mult_order_brute_force(p, m):
    """逐次乘 p 的 ℓ_p(m)，用作校验。."""
    if m == 1:
        return 1
    k, x = 1, p % m
    while x != 1:
        x = x * p % m
        k += 1
    return k


def phi_ratio_by_mobius(k):
    """Σ_{m|k} μ(m)/m 的精确有理值（= φ(k)/k）。."""
    return sum(
        (Fraction(mu, d) for d, mu in squarefree_divisors(factor(k))), Fraction(0)
    )


# ===========================================================================
# 素数幂枚举
# ===========================================================================


def enumerate_prime_powers(x):
    """枚举全部 q = p^r ≤ x（升序），Q(x) 为条目数；x < 2 时为空。."""
    if x < 2:
        return PrimePowerEnumeration(x=x, entries=())
    limit = int(math.floor(x))
    primes = sieve_primes(limit).tolist()
    entries = []
    for p in primes:
        pk, k = p, 1
        while pk <= limit:
            entries.append((pk, p, k))
            pk *= p
            k += 1
    entries.sort()
    return PrimePowerEnumeration(
        x=x, entries=tuple(PrimePower(p, k) for _, p, k in entries)
    )


def prime_power_count(x):
    """Q(x) = Σ_k π(x^{1/k})，只用筛法素数表计算（校验用）。."""
    if x < 2:
        return 0
    limit = int(math.floor(x))
    total, k = 0, 1
    while 2**k <= limit:
        total += prime_pi(_iroot(limit, k))
        k += 1
    return total
