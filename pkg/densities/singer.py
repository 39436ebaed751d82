"""GL_n(q) 群论层。.

闭式公式：
- gl_order: |GL_n(q)| = Π_{i<n} (q^n - q^i)
- singer_count: Singer 循环个数 |GL_n(q)|/(q^n-1) · φ(q^n-1)/n
- density: p_n(q) = φ(q^n-1) / (n(q^n-1))
- primitive_poly_count: φ(q^n-1)/n

独立的穷举 oracle：
- oracle_count_max_order_elements / oracle_gl_order: 在 build_field 构造的
  有限域上枚举全部 n×n 矩阵（numpy 批量运算）
- oracle_count_primitive_polys: 枚举首一多项式，Rabin 判不可约后求 x 的阶
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import count, permutations, product

import numpy as np
from tqdm import tqdm

from . import conf
from .arith import (
    FACTOR_CACHE,
    PrimePower,
    check_range,
    enumerate_prime_powers,
    euler_phi,
    factor,
    factor_qn_minus_1,
    is_prime,
)
from .exceptions import InvalidArgument, OracleCapExceeded, RangeError

logger = logging.getLogger("densities.singer")

# 一次送进 numpy 的矩阵个数
MATRIX_BLOCK = 1 << 15


@dataclass(frozen=True)
class GroupSpec:
    """群参数 (n, q)，要求 q^n - 1 < 2^128。."""

    n: int
    q: PrimePower

    def __post_init__(self):
        """校验秩与范围。."""
        if self.n < 1:
            raise InvalidArgument(f"rank n = {self.n} must be ≥ 1")
        check_range(self.q.q**self.n - 1, f"{self.q}^{self.n} - 1")

    @classmethod
    def of(cls, n, q):
        """由整数或 PrimePower 构造。."""
        if not isinstance(q, PrimePower):
            q = PrimePower.from_q(int(q))
        return cls(int(n), q)

    @property
    def modulus(self):
        """q^n - 1。."""
        return self.q.q**self.n - 1

    def __str__(self):
        """返回 'GL_n(q)'。."""
        return f"GL_{self.n}({self.q})"


@dataclass(frozen=True)
class DensityRecord:
    """p_n(q) 的精确记录。.

    numerator / denominator 保留未约分的 φ(q^n-1) 与 n(q^n-1)，
    density 是约分后的有理数。
    """

    spec: GroupSpec
    phi_value: int
    modulus: int

    @property
    def numerator(self):
        return self.phi_value

    @property
    def denominator(self):
        return self.spec.n * self.modulus

    @property
    def density(self):
        return Fraction(self.phi_value, self.denominator)

    @property
    def scaled(self):
        """n·p_n(q) = φ(q^n-1)/(q^n-1)，落在 (0, 1]。."""
        return Fraction(self.phi_value, self.modulus)

    def __float__(self):
        """浮点渲染（整数除法，正确舍入）。."""
        return self.phi_value / self.denominator

    def as_dict(self):
        return {
            "n": self.spec.n,
            "q": self.spec.q.q,
            "p": self.spec.q.p,
            "r": self.spec.q.r,
            "phi": self.phi_value,
            "modulus": self.modulus,
            "numerator": self.numerator,
            "denominator": self.denominator,
            "density": self.density,
        }


# ===========================================================================
# 闭式公式
# ===========================================================================


def gl_order(spec):
    """|GL_n(q)| = Π_{i=0}^{n-1} (q^n - q^i)。."""
    q, n = spec.q.q, spec.n
    result = 1
    for i in range(n):
        result *= q**n - q**i
    return check_range(result, f"|{spec}|")


def _phi_of_modulus(spec, cache=FACTOR_CACHE):
    return euler_phi(factor_qn_minus_1(spec.q.q, spec.n, cache=cache))


def singer_count(spec, cache=FACTOR_CACHE):
    """Singer 循环个数 |GL_n(q)|/(q^n-1) · φ(q^n-1)/n。."""
    phi = _phi_of_modulus(spec, cache)
    assert phi % spec.n == 0, f"{spec.n} does not divide φ({spec.modulus})"
    return gl_order(spec) // spec.modulus * (phi // spec.n)


def density(spec, cache=FACTOR_CACHE):
    """p_n(q) = φ(q^n-1)/(n(q^n-1))，返回 DensityRecord。."""
    return DensityRecord(
        spec=spec, phi_value=_phi_of_modulus(spec, cache), modulus=spec.modulus
    )


def primitive_poly_count(spec, cache=FACTOR_CACHE):
    """F_q 上 n 次本原多项式个数 φ(q^n-1)/n。."""
    phi = _phi_of_modulus(spec, cache)
    assert phi % spec.n == 0, f"{spec.n} does not divide φ({spec.modulus})"
    return phi // spec.n


# ===========================================================================
# 有限域
# ===========================================================================


class FiniteField:
    """F_{p^r} 的查表实现。.

    元素编码为 0..p^r-1 的整数，第 i 位 p 进制数字是 x^i 的系数；
    0 与 1 分别是加法、乘法单位元，F_p 中的 a 编码为 a 本身。
    add_table / mul_table 为 (q, q) 的 numpy 表，neg_table / inv_table
    为长度 q 的数组（inv_table[0] 无意义）。
    """

    def __init__(self, p, r, modulus_poly):
        """按模多项式（低次在前、首一）构造运算表。."""
        self.p = p
        self.r = r
        self.modulus_poly = tuple(modulus_poly)
        self.size = p**r

        powers = p ** np.arange(r, dtype=np.int64)
        elements = np.arange(self.size, dtype=np.int64)
        digits = (elements[:, None] // powers) % p

        self.add_table = ((digits[:, None, :] + digits[None, :, :]) % p) @ powers
        self.neg_table = ((-digits) % p) @ powers
        self.mul_table = self._multiplication_table(digits, powers)
        self.inv_table = np.zeros(self.size, dtype=np.int64)
        self.inv_table[1:] = np.argmax(self.mul_table[1:, 1:] == 1, axis=1) + 1

        # 多项式运算走纯 Python，预先转成嵌套列表
        self._add = self.add_table.tolist()
        self._mul = self.mul_table.tolist()
        self._neg = self.neg_table.tolist()
        self._inv = self.inv_table.tolist()

    def _multiplication_table(self, digits, powers):
        p, r, size = self.p, self.r, self.size
        coeffs = np.zeros((size, size, 2 * r - 1), dtype=np.int64)
        for i in range(r):
            for j in range(r):
                coeffs[:, :, i + j] += np.outer(digits[:, i], digits[:, j])
        low = np.array(self.modulus_poly[:r], dtype=np.int64)
        # x^k ≡ -Σ_t m_t x^{k-r+t}，从最高次往下消
        for k in range(2 * r - 2, r - 1, -1):
            lead = coeffs[:, :, k] % p
            coeffs[:, :, k - r : k] -= lead[:, :, None] * low
            coeffs[:, :, k] = 0
        return (coeffs[:, :, :r] % p) @ powers

    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._add[a][self._neg[b]]

    def mul(self, a, b):
        return self._mul[a][b]

    def neg(self, a):
        return self._neg[a]

    def inverse(self, a):
        """乘法逆元，a = 0 时抛 ZeroDivisionError。."""
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._inv[a]

    def __repr__(self):
        """返回 'GF(p^r) mod ...'。."""
        return f"GF({self.p}^{self.r}) mod {format_poly(self.modulus_poly)}"


def format_poly(coeffs, var="x"):
    """把系数元组（低次在前）写成 'x^2 + x + 1'。."""
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else var if i == 1 else f"{var}^{i}"
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}{mono}")
    return " + ".join(terms) or "0"


# ---------------------------------------------------------------------------
# 系数取自 FiniteField 的多项式，低次在前，零多项式为 []
# ---------------------------------------------------------------------------


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_sub(field, a, b):
    size = max(len(a), len(b))
    a = list(a) + [0] * (size - len(a))
    b = list(b) + [0] * (size - len(b))
    return _trim(field.sub(x, y) for x, y in zip(a, b, strict=True))


def _poly_mod(field, a, f):
    a = _trim(a)
    deg = len(f) - 1
    lead_inv = field.inverse(f[-1])
    while len(a) - 1 >= deg:
        c = field.mul(a[-1], lead_inv)
        shift = len(a) - 1 - deg
        for i, fi in enumerate(f):
            a[shift + i] = field.sub(a[shift + i], field.mul(c, fi))
        a = _trim(a)
    return a


def _poly_mulmod(field, a, b, f):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(x, y))
    return _poly_mod(field, out, f)


def _poly_powmod(field, a, e, f):
    result = _poly_mod(field, [1], f)
    base = _poly_mod(field, a, f)
    while e:
        if e & 1:
            result = _poly_mulmod(field, result, base, f)
        base = _poly_mulmod(field, base, base, f)
        e >>= 1
    return result


def _poly_gcd(field, a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _poly_mod(field, a, b)
    return a


def is_irreducible(field, poly):
    """Rabin 不可约判定：f 首一、次数 n ≥ 1，系数在 field 中。.

    f 不可约当且仅当 f | x^{Q^n} - x，且对 n 的每个素因子 ℓ，
    gcd(f, x^{Q^{n/ℓ}} - x) = 1，其中 Q = |field|。
    """
    f = _trim(poly)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    frobenius = [x]
    for _ in range(n):
        frobenius.append(_poly_powmod(field, frobenius[-1], field.size, f))
    if _poly_sub(field, frobenius[n], _poly_mod(field, x, f)):
        return False
    for ell in factor(n).primes:
        g = _poly_gcd(field, f, _poly_sub(field, frobenius[n // ell], x))
        if len(g) > 1:
            return False
    return True


@lru_cache(maxsize=64)
def _build_field(p, r):
    prime_field = FiniteField(p, 1, (0, 1))
    if r == 1:
        return prime_field
    # 按编码 Σ c_i p^i 递增扫描，第一个不可约者即字典序最小
    for code in range(p**r):
        low = [(code // p**i) % p for i in range(r)]
        if low[0] == 0:
            continue
        if is_irreducible(prime_field, low + [1]):
            field = FiniteField(p, r, low + [1])
            logger.info(f"Built {field!r}")
            return field
    raise AssertionError(f"no irreducible polynomial of degree {r} over F_{p}")


def build_field(p, r, cap=None):
    """构造 F_{p^r}，模多项式取字典序最小的首一不可约多项式。.

    r = 1 时模多项式为 x（素域）。

    Raises:
        InvalidArgument: p 不是素数或 r < 1。
        RangeError: p^r 超过上限（默认 SINGER_FIELD_CAP = 512）。
    """
    cap = conf.get("SINGER_FIELD_CAP") if cap is None else cap
    if r < 1 or not is_prime(p):
        raise InvalidArgument(f"F_{{{p}^{r}}} is not a valid field")
    if p**r > cap:
        raise RangeError(f"field size {p}^{r} exceeds cap {cap}")
    return _build_field(p, r)


# ===========================================================================
# 矩阵 oracle
# ===========================================================================


def _matmul(field, a, b):
    """批量矩阵乘法，a, b 形如 (B, n, n)。."""
    if field.r == 1:
        return np.matmul(a, b) % field.p
    prod = field.mul_table[a[:, :, :, None], b[:, None, :, :]]
    out = prod[:, :, 0, :]
    for k in range(1, a.shape[2]):
        out = field.add_table[out, prod[:, :, k, :]]
    return out


def _matpow(field, a, e):
    result = np.broadcast_to(np.eye(a.shape[1], dtype=np.int64), a.shape).copy()
    base = a
    while e:
        if e & 1:
            result = _matmul(field, result, base)
        e >>= 1
        if e:
            base = _matmul(field, base, base)
    return result


def _is_identity(a):
    return np.all(a == np.eye(a.shape[1], dtype=np.int64), axis=(1, 2))


def _parity(perm):
    n = len(perm)
    inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
    return inversions % 2


def _determinants(field, mats):
    """Leibniz 展开的批量行列式。."""
    n = mats.shape[1]
    total = np.zeros(len(mats), dtype=np.int64)
    for perm in permutations(range(n)):
        term = mats[:, 0, perm[0]]
        for i in range(1, n):
            term = field.mul_table[term, mats[:, i, perm[i]]]
        if _parity(perm):
            term = field.neg_table[term]
        total = field.add_table[total, term]
    return total


def _check_group_cap(spec, cap):
    cap = conf.get("SINGER_ORACLE_GROUP_CAP") if cap is None else cap
    size = gl_order(spec)
    if size > cap:
        raise OracleCapExceeded(f"|{spec}| = {size} exceeds oracle cap {cap}")


def _invertible_blocks(field, n, progress=False, desc=None):
    """分块枚举 GL_n(F)，每块是 (B, n, n) 的 numpy 数组。."""
    q = field.size
    total = q ** (n * n)
    place = q ** np.arange(n * n, dtype=np.int64)
    starts = range(0, total, MATRIX_BLOCK)
    for start in tqdm(starts, desc=desc, disable=not progress, leave=False):
        idx = np.arange(start, min(start + MATRIX_BLOCK, total), dtype=np.int64)
        mats = ((idx[:, None] // place) % q).reshape(-1, n, n)
        yield mats[_determinants(field, mats) != 0]


def oracle_gl_order(spec, cap=None, progress=False):
    """穷举计数 GL_n(q) 中的可逆矩阵。."""
    _check_group_cap(spec, cap)
    field = build_field(spec.q.p, spec.q.r)
    return sum(
        len(block)
        for block in _invertible_blocks(field, spec.n, progress, f"|{spec}|")
    )


def oracle_count_max_order_elements(spec, cap=None, progress=False):
    """穷举计数阶恰为 q^n - 1 的矩阵。.

    A 计入当且仅当 A^N = I，且对 N = q^n - 1 的每个素因子 ℓ，A^{N/ℓ} ≠ I。

    Raises:
        OracleCapExceeded: |GL_n(q)| 超过上限（默认 2·10^6）。
    """
    _check_group_cap(spec, cap)
    field = build_field(spec.q.p, spec.q.r)
    N = spec.modulus
    quotients = [N // ell for ell in factor(N).primes]
    count = 0
    for mats in _invertible_blocks(field, spec.n, progress, f"{spec} Singer"):
        mats = mats[_is_identity(_matpow(field, mats, N))]
        for e in quotients:
            if not len(mats):
                break
            mats = mats[~_is_identity(_matpow(field, mats, e))]
        count += len(mats)
    logger.info(f"Oracle {spec}: {count} elements of order {N}")
    return count


def matrix_order(field, matrix, group_order):
    """单个可逆矩阵的阶：从群阶出发逐个除掉素因子。."""
    a = np.asarray(matrix, dtype=np.int64)[None]
    order = group_order
    for ell, e in factor(group_order).factors:
        for _ in range(e):
            if _is_identity(_matpow(field, a, order // ell))[0]:
                order //= ell
            else:
                break
    return order


def naive_matrix_order(field, matrix, limit=None):
    """逐次相乘直到回到单位阵。."""
    a = np.asarray(matrix, dtype=np.int64)[None]
    limit = limit or field.size ** (a.shape[1] ** 2)
    power, k = a, 1
    while not _is_identity(power)[0]:
        power = _matmul(field, power, a)
        k += 1
        if k > limit:
            raise InvalidArgument("matrix is not invertible")
    return k


def oracle_specs(max_group_size, field_cap=None):
    """|GL_n(q)| ≤ max_group_size 且 q ≤ 域上限的全部 (n, q)，按 n、q 升序。."""
    field_cap = conf.get("SINGER_FIELD_CAP") if field_cap is None else field_cap
    prime_powers = enumerate_prime_powers(field_cap).entries
    specs = []
    for n in count(1):
        row = [GroupSpec(n, q) for q in prime_powers]
        row = [spec for spec in row if gl_order(spec) <= max_group_size]
        if not row:
            break
        specs.extend(row)
    return specs


# ===========================================================================
# 多项式 oracle
# ===========================================================================


def _order_of_x(field, f, N, N_factors):
    x = [0, 1]
    if _poly_sub(field, _poly_powmod(field, x, N, f), [1]):
        return None
    order = N
    for ell, e in N_factors:
        for _ in range(e):
            if not _poly_sub(field, _poly_powmod(field, x, order // ell, f), [1]):
                order //= ell
            else:
                break
    return order


def oracle_count_primitive_polys(spec, cap=None, progress=False):
    """穷举 F_q 上首一、常数项非零的 n 次多项式，统计本原多项式个数。.

    先用 Rabin 判定筛掉可约多项式，再在 F_q[x]/(f) 中求 x 的阶，
    阶为 q^n - 1 者计入。

    Raises:
        OracleCapExceeded: q^n 超过上限（默认 10^6）。
    """
    cap = conf.get("SINGER_ORACLE_POLY_CAP") if cap is None else cap
    q, n = spec.q.q, spec.n
    if q**n > cap:
        raise OracleCapExceeded(f"{q}^{n} polynomials exceed oracle cap {cap}")
    field = build_field(spec.q.p, spec.q.r)
    N = spec.modulus
    N_factors = factor(N).factors
    count = 0
    candidates = product(range(q), repeat=n - 1)
    total = q ** (n - 1)
    for tail in tqdm(candidates, total=total, disable=not progress, leave=False):
        for c0 in range(1, q):
            f = [c0, *tail, 1]
            if is_irreducible(field, f) and _order_of_x(field, f, N, N_factors) == N:
                count += 1
    logger.info(f"Oracle {spec}: {count} primitive polynomials of degree {n}")
    return count
