"""p_n(q) 在三种族上的平均值。.

- prime_powers: 固定 n，对全部素数幂 q ≤ x 求平均（除以 Q(x)）
- extensions: 固定 p、n，对 r ≤ x 求 p_n(p^r) 的平均（除以 floor(x)）
- ranks: 固定 q，对 n ≤ x 求和后除以 log x

每个报告都附上对应的理论常数（CertifiedValue）。求和按族参数升序进行：
项数不超过 SINGER_EXACT_TERMS 时精确有理累加，否则改用 math.fsum。
"""

import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction

from . import conf
from .arith import (
    MAX_MAGNITUDE,
    PrimePower,
    _iroot,
    check_range,
    enumerate_prime_powers,
    euler_phi,
    factor_qn_minus_1,
    is_prime,
)
from .constants import euler_product_pn, series_P_grouped
from .exceptions import FactorizationExhausted, InvalidArgument, RangeError
from .workers import run_blocks

logger = logging.getLogger("densities.ensembles")

MODES = ("prime_powers", "extensions", "ranks")


@dataclass(frozen=True)
class Term:
    """族中一个成员的 p_n(q)：phi / (n·modulus)。."""

    member: int
    n: int
    q: int
    phi: int
    modulus: int

    @property
    def density(self):
        return Fraction(self.phi, self.n * self.modulus)

    @property
    def scaled(self):
        """n·p_n(q)。."""
        return Fraction(self.phi, self.modulus)


@dataclass(frozen=True)
class EnsembleSample:
    """某个 x 下的全部项，x_effective 为截断后的实际上界。."""

    mode: str
    params: dict
    x: float
    x_effective: float
    terms: tuple = ()

    @property
    def truncated(self):
        return self.x_effective != self.x

    def prefix(self, x):
        """成员参数 ≤ x 的前缀（用于阶梯计算）。."""
        x_effective = min(x, self.x_effective)
        terms = tuple(t for t in self.terms if t.member <= x_effective)
        return EnsembleSample(self.mode, self.params, x, x_effective, terms)


@dataclass(frozen=True)
class AverageReport:
    """一次平均值计算的结果。.

    raw_sum 为归一化前的和（精确求和时为 Fraction），
    summation 记录使用的求和方式（"exact" 或 "fsum"）。
    """

    mode: str
    params: dict
    x: float
    sample_size: int
    raw_sum: object
    empirical_mean: float
    theoretical: object
    discrepancy: float
    summation: str = "exact"
    x_effective: float = None
    truncated: bool = False

    def as_dict(self):
        return {
            "mode": self.mode,
            "params": self.params,
            "x": self.x,
            "x_effective": self.x_effective,
            "truncated": self.truncated,
            "sample_size": self.sample_size,
            "raw_sum": self.raw_sum,
            "empirical_mean": self.empirical_mean,
            "theoretical_estimate": self.theoretical.estimate,
            "theoretical_error_bound": self.theoretical.error_bound,
            "discrepancy": self.discrepancy,
            "summation": self.summation,
        }


# ===========================================================================
# 样本生成
# ===========================================================================


def as_prime_power(q):
    """接受整数或 PrimePower。."""
    return q if isinstance(q, PrimePower) else PrimePower.from_q(int(q))


def phi_block(pairs):
    """对一块 (n, q) 计算 φ(q^n - 1)；供 run_blocks 在子进程中调用。."""
    return [euler_phi(factor_qn_minus_1(q, n)) for n, q in pairs]


def _members(mode, params, x):
    """返回 (x_effective, [(member, n, q), ...])。."""
    if mode == "prime_powers":
        n = params["n"]
        if n < 1:
            raise InvalidArgument(f"n = {n} must be ≥ 1")
        if x < 2:
            raise InvalidArgument(f"x = {x} must be ≥ 2")
        # q^n - 1 < 2^128 ⇔ q^n ≤ 2^128
        safe = _iroot(MAX_MAGNITUDE, n)
        if safe < 2:
            raise RangeError(f"n = {n}: 2^{n} - 1 ≥ 2^128, no prime power fits")
        x_effective = x
        if x > safe:
            x_effective = safe
            logger.warning(f"x = {x} truncated to {safe} so that q^{n} - 1 < 2^128")
        entries = enumerate_prime_powers(x_effective).entries
        return x_effective, [(pp.q, n, pp.q) for pp in entries]
    if mode == "extensions":
        p, n = params["p"], params["n"]
        if not is_prime(p):
            raise InvalidArgument(f"p = {p} is not prime")
        if n < 1:
            raise InvalidArgument(f"n = {n} must be ≥ 1")
        if x < 1:
            raise InvalidArgument(f"x = {x} must be ≥ 1")
        top = math.floor(x)
        check_range(p ** (n * top) - 1, f"{p}^{n * top} - 1")
        return x, [(r, n, p**r) for r in range(1, top + 1)]
    if mode == "ranks":
        q = as_prime_power(params["q"])
        if x < 1:
            raise InvalidArgument(f"x = {x} must be ≥ 1")
        top = math.floor(x)
        check_range(q.q**top - 1, f"{q}^{top} - 1")
        return x, [(n, n, q.q) for n in range(1, top + 1)]
    raise InvalidArgument(f"unknown mode {mode!r}; expected one of {MODES}")


def ensemble_sample(mode, params, x, workers=None, progress=False):
    """计算族中 ≤ x 的全部项。."""
    x_effective, members = _members(mode, params, x)
    phis = run_blocks(
        phi_block,
        [(n, q) for _, n, q in members],
        workers=workers,
        progress=progress,
        desc=f"{mode} x={x}",
    )
    terms = tuple(
        Term(member=m, n=n, q=q, phi=phi, modulus=q**n - 1)
        for (m, n, q), phi in zip(members, phis, strict=True)
    )
    return EnsembleSample(mode, dict(params), x, x_effective, terms)


# ===========================================================================
# 平均值
# ===========================================================================


def _series_with_fallback(p, r, K):
    """P(p, r) 的分组和；p^k - 1 分解失败时退到 K = k - 1 并在 meta 中注明。."""
    try:
        return series_P_grouped(p, r, K)
    except FactorizationExhausted as exc:
        fallback = (exc.k or 1) - 1
        if fallback < 1:
            raise
        logger.warning(
            f"factorization of {p}^{exc.k} - 1 failed; "
            f"series truncated at K = {fallback}"
        )
        value = series_P_grouped(p, r, fallback)
        note = f"K reduced to {fallback}, factorization of {p}^{exc.k} - 1 failed"
        return replace(value, meta=f"{value.meta}; {note}")


def _theoretical(mode, params, prime_bound=None, K=None):
    if mode == "prime_powers":
        if prime_bound is None:
            return euler_product_pn(params["n"])
        return euler_product_pn(params["n"], prime_bound)
    if mode == "extensions":
        p, n = params["p"], params["n"]
        return _series_with_fallback(p, n, K).scaled(Fraction(1, n))
    q = params["q"]
    return _series_with_fallback(q.p, q.r, K)


class _RunningSum:
    """沿成员升序累加；精确部分逐项扩展，超阈值后对浮点项整体 fsum。."""

    def __init__(self, exact_terms):
        """初始化。."""
        self.exact_terms = exact_terms
        self.exact = Fraction(0)
        self.floats = []

    def extend(self, terms):
        for t in terms:
            self.floats.append(t.phi / (t.n * t.modulus))
            if len(self.floats) <= self.exact_terms:
                self.exact += t.density

    def value(self):
        if len(self.floats) <= self.exact_terms:
            return self.exact, "exact"
        return math.fsum(self.floats), "fsum"


def _report(sample, raw_sum, summation, theoretical):
    size = len(sample.terms)
    if sample.mode == "ranks":
        mean = float(raw_sum) / math.log(sample.x)
    elif summation == "exact":
        mean = float(Fraction(raw_sum) / size)
    else:
        mean = raw_sum / size
    return AverageReport(
        mode=sample.mode,
        params=_public_params(sample.params),
        x=sample.x,
        sample_size=size,
        raw_sum=raw_sum,
        empirical_mean=mean,
        theoretical=theoretical,
        discrepancy=abs(mean - theoretical.estimate),
        summation=summation,
        x_effective=sample.x_effective,
        truncated=sample.truncated,
    )


def _public_params(params):
    return {k: (v.q if isinstance(v, PrimePower) else v) for k, v in params.items()}


def convergence_ladder(
    mode, params, x_values, workers=None, progress=False, prime_bound=None, K=None
):
    """按升序 x_values 逐级给出报告。.

    各项只在最大的 x 上计算一次，每一级在上一级的和上继续累加，
    最后一级与直接调用的结果逐位相同。
    """
    x_values = list(x_values)
    if not x_values:
        return []
    if any(a > b for a, b in zip(x_values, x_values[1:], strict=False)):
        raise InvalidArgument(f"x_values must be ascending: {x_values}")
    if mode == "ranks" and x_values[0] <= 1:
        raise InvalidArgument(f"x = {x_values[0]} must be > 1 (normalised by log x)")
    if mode == "ranks":
        params = {"q": as_prime_power(params["q"])}
    _members(mode, params, x_values[0])
    full = ensemble_sample(mode, params, x_values[-1], workers, progress)
    theoretical = _theoretical(mode, params, prime_bound, K)
    running = _RunningSum(conf.get("SINGER_EXACT_TERMS"))
    reports, done = [], 0
    for x in x_values:
        sample = full.prefix(x)
        running.extend(sample.terms[done:])
        done = len(sample.terms)
        raw_sum, summation = running.value()
        reports.append(_report(sample, raw_sum, summation, theoretical))
    return reports


def average_over_prime_powers(n, x, workers=None, progress=False, prime_bound=None):
    """(1/Q(x)) Σ_{q≤x} p_n(q)，理论值为 p_n。."""
    (report,) = convergence_ladder(
        "prime_powers", {"n": n}, [x], workers, progress, prime_bound=prime_bound
    )
    return report


def average_over_extensions(p, n, x, workers=None, progress=False, K=None):
    """(1/floor(x)) Σ_{r≤x} p_n(p^r)，理论值为 P(p, n)/n。."""
    (report,) = convergence_ladder(
        "extensions", {"p": p, "n": n}, [x], workers, progress, K=K
    )
    return report


def average_over_ranks(q, x, workers=None, progress=False, K=None):
    """(1/log x) Σ_{n≤x} p_n(q)，理论值为 P(p, r)（q = p^r）。."""
    (report,) = convergence_ladder("ranks", {"q": q}, [x], workers, progress, K=K)
    return report
