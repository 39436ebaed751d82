"""验收套件：每条验收标准一个函数，返回 CriterionResult。.

quick=True 时缩小各项扫描规模，用于冒烟测试；判定阈值不变。
"""

import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction

from .arith import (
    divisors,
    enumerate_prime_powers,
    euler_phi,
    factor,
    mobius,
    mult_order,
    mult_order_brute_force,
    phi_ratio_by_mobius,
    rho,
    rho_brute_force_table,
    sieve_multiplicative,
    sieve_primes,
)
from .constants import (
    euler_product_naive,
    euler_product_pn,
    series_P_direct,
    series_P_grouped,
)
from .distribution import ECDF, ecdf_ranks, kolmogorov_distance
from .ensembles import (
    average_over_extensions,
    average_over_prime_powers,
    average_over_ranks,
    ensemble_sample,
)
from .records import render
from .singer import (
    GroupSpec,
    oracle_count_max_order_elements,
    oracle_count_primitive_polys,
    oracle_specs,
    primitive_poly_count,
    singer_count,
)

logger = logging.getLogger("densities.acceptance")

MEAN_TOLERANCE = 0.01


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def as_dict(self):
        return {
            "criterion": self.number,
            "name": self.name,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "detail": self.detail,
        }


def check_ecdf_axioms(ecdf):
    """单调、右连续、两端极限 0/1，以及 F(min) = min 的重数/size。."""
    values = ecdf.values
    if not len(values):
        return False
    if any(a > b for a, b in zip(values, values[1:], strict=False)):
        return False
    lowest, highest = float(values[0]), float(values[-1])
    if ecdf.evaluate(math.nextafter(lowest, -math.inf)) != 0:
        return False
    if ecdf.evaluate(highest) != 1 or ecdf.evaluate(2.0) != 1:
        return False
    multiplicity = int((values == values[0]).sum())
    if ecdf.evaluate(lowest) != Fraction(multiplicity, ecdf.size):
        return False
    # 右连续：跳跃点处的值等于其右侧紧邻处的值
    for z, level in ecdf.jumps():
        if ecdf.evaluate(z) != level:
            return False
        if ecdf.evaluate(math.nextafter(float(z), 2)) != level:
            return False
    return True


# ===========================================================================
# 各条标准
# ===========================================================================


def criterion_1(quick=False, workers=None, context=None):
    """Singer 计数与矩阵穷举一致。."""
    cap = 3000 if quick else 2 * 10**6
    rows = []
    for spec in oracle_specs(cap):
        formula = singer_count(spec)
        oracle = oracle_count_max_order_elements(spec, cap=cap)
        rows.append((spec, formula, oracle))
    wrong = [f"{s}: {f} != {o}" for s, f, o in rows if f != o]
    required = {(2, 2), (2, 3), (2, 4), (2, 5), (2, 7), (3, 2)}
    if not quick:
        required.add((3, 3))
    covered = {(s.n, s.q.q) for s, _, _ in rows}
    missing = sorted(required - covered)
    passed = not wrong and not missing
    detail = f"{len(rows)} specs checked"
    if wrong or missing:
        detail = f"mismatches {wrong}, missing {missing}"
    return passed, detail


def criterion_2(quick=False, workers=None, context=None):
    """本原多项式计数与多项式穷举一致。."""
    n_max, q_max = (3, 5) if quick else (4, 9)
    wrong, checked = [], 0
    for q in enumerate_prime_powers(q_max).entries:
        for n in range(1, n_max + 1):
            if q.q**n > 10**6:
                continue
            spec = GroupSpec.of(n, q)
            formula = primitive_poly_count(spec)
            oracle = oracle_count_primitive_polys(spec)
            checked += 1
            if formula != oracle:
                wrong.append(f"{spec}: {formula} != {oracle}")
    return not wrong, f"{checked} specs checked" if not wrong else str(wrong)


def criterion_3(quick=False, workers=None, context=None):
    """ρ_n(m) 公式与穷举一致；素数处等于 gcd(p-1, n)。."""
    m_max, p_max = (300, 1000) if quick else (2000, 10**4)
    for m in range(1, m_max + 1):
        brute = rho_brute_force_table(m, 12)
        for n in range(1, 13):
            if rho(n, m) != brute[n - 1]:
                return False, f"rho({n}, {m}) = {rho(n, m)} != {brute[n - 1]}"
    for p in sieve_primes(p_max).tolist():
        for n in range(1, 25):
            if rho(n, p) != math.gcd(p - 1, n):
                return False, f"rho({n}, {p}) != gcd({p - 1}, {n})"
    return True, f"m <= {m_max}, primes <= {p_max}"


def criterion_4(quick=False, workers=None, context=None):
    """ℓ_p(m) 与逐次相乘一致。."""
    m_max = 500 if quick else 5000
    for p in (2, 3, 5, 7):
        for m in range(1, m_max + 1):
            if m % p == 0:
                continue
            if mult_order(p, m) != mult_order_brute_force(p, m):
                return False, f"mult_order({p}, {m}) mismatch"
    return True, f"p in (2, 3, 5, 7), m <= {m_max}"


def criterion_5(quick=False, workers=None, context=None):
    """φ(k)/k = Σ_{m|k} μ(m)/m 与 gcd(a, b) = Σ_{d|a, d|b} φ(d)。."""
    k_max, ab_max = (1000, 100) if quick else (10**4, 500)
    tables = sieve_multiplicative(k_max)
    for k in range(1, k_max + 1):
        if mobius(k) != tables.mu[k]:
            return False, f"mu({k}) disagrees with the sieve"
        if phi_ratio_by_mobius(k) != Fraction(int(tables.phi[k]), k):
            return False, f"phi({k})/{k} identity fails"
    divisor_sets = [set()] + [set(divisors(factor(a))) for a in range(1, ab_max + 1)]
    phi = [0] + [euler_phi(factor(d)) for d in range(1, ab_max + 1)]
    for a in range(1, ab_max + 1):
        for b in range(a, ab_max + 1):
            common = divisor_sets[a] & divisor_sets[b]
            if sum(phi[d] for d in common) != math.gcd(a, b):
                return False, f"gcd({a}, {b}) identity fails"
    return True, f"k <= {k_max}, a, b <= {ab_max}"


def criterion_6(quick=False, workers=None, context=None):
    """p_n 的区间在 T 与 2T 处相交；n = 1 由朴素乘积复现。."""
    T, T_check = (10**4, 10**5) if quick else (10**5, 10**6)
    for n in range(1, 9):
        a, b = euler_product_pn(n, T), euler_product_pn(n, 2 * T)
        if not a.intersects(b):
            return False, f"n={n}: [{a.lower}, {a.upper}] vs [{b.lower}, {b.upper}]"
    certified = euler_product_pn(1, T_check)
    naive = euler_product_naive(1, T_check)
    if abs(naive - certified.estimate) > certified.error_bound:
        return False, f"naive {naive} vs {certified.estimate}"
    return True, f"T={T}, 2T; naive product at {T_check} agrees"


def criterion_7(quick=False, workers=None, context=None):
    """P(2, 1) 在 K = 20 与 K = 40 处相交；直接求和落在 K = 40 的区间内。."""
    M = 10**4 if quick else 10**5
    s20, s40 = series_P_grouped(2, 1, 20), series_P_grouped(2, 1, 40)
    if not s20.intersects(s40):
        return False, "K=20 and K=40 intervals are disjoint"
    direct = series_P_direct(2, 1, M)
    if not s40.contains(direct):
        return False, f"direct sum {direct} outside [{s40.lower}, {s40.upper}]"
    estimate, bound = s40.estimate, s40.error_bound
    return True, f"P(2,1) ~ {estimate:.6f} +- {bound:.3g}; direct {direct:.6f}"


def _criterion_8_reports(quick, workers):
    x1, x23 = (10**5, 2 * 10**4) if quick else (10**6, 10**5)
    reports = [average_over_prime_powers(1, x1, workers)]
    reports += [average_over_prime_powers(n, x23, workers) for n in (2, 3)]
    return reports


def criterion_8(quick=False, workers=None, context=None):
    """素数幂平均值接近 p_n。."""
    reports = _criterion_8_reports(quick, workers)
    if context is not None:
        context[8] = render(r.as_dict() for r in reports)
    bad = [r for r in reports if r.discrepancy >= MEAN_TOLERANCE]
    detail = ", ".join(
        f"n={r.params['n']} x={r.x}: {r.discrepancy:.4f}" for r in reports
    )
    return not bad, detail


def _criterion_9_values(workers):
    A = average_over_extensions(2, 1, 60, workers)
    B = average_over_ranks(2, 64, workers)
    S = series_P_grouped(2, 1, 40)
    return A, B, S


def criterion_9(quick=False, workers=None, context=None):
    """扩张族与秩族在共同常数 P(2, 1) 处一致。."""
    A, B, S = _criterion_9_values(workers)
    if context is not None:
        context[9] = render(r.as_dict() for r in (A, B))
    a, b, s = A.empirical_mean, B.empirical_mean, S.estimate
    passed = abs(a - s) < 0.1 and abs(b - s) < 0.25 and abs(a - b) < 0.3
    return passed, f"A={a:.6f} B={b:.6f} P(2,1)={s:.6f}"


def _criterion_10_ecdfs(quick, workers):
    x_small, x_large = (5 * 10**4, 10**5) if quick else (5 * 10**5, 10**6)
    full = ensemble_sample("prime_powers", {"n": 1}, x_large, workers)
    pp = [ECDF.from_sample(full.prefix(x)) for x in (x_small, x_large)]
    ranks = [ecdf_ranks(2, x, workers) for x in (32, 64)]
    return pp, ranks


def criterion_10(quick=False, workers=None, context=None):
    """ECDF 在 x 与 2x 之间稳定，且满足分布函数公理。."""
    pp, ranks = _criterion_10_ecdfs(quick, workers)
    d_pp = kolmogorov_distance(*pp)
    d_ranks = kolmogorov_distance(*ranks)
    if context is not None:
        context[10] = render(
            [{"distance": d_pp}, {"distance": d_ranks}]
            + [{"jumps": len(e.jumps()), "size": e.size} for e in pp + ranks]
        )
    axioms = all(check_ecdf_axioms(e) for e in pp + ranks)
    passed = d_pp < 0.02 and d_ranks < 0.25 and axioms
    detail = f"D_pp={float(d_pp):.5f} D_ranks={float(d_ranks):.5f} axioms={axioms}"
    return passed, detail


def criterion_11(quick=False, workers=None, context=None):
    """标准 8-10 在 worker 数 1 与 4 下输出逐字节相同。."""
    outputs = {}
    for count in (1, 4):
        local = {}
        criterion_8(quick, count, local)
        criterion_9(quick, count, local)
        criterion_10(quick, count, local)
        outputs[count] = local
    same = outputs[1] == outputs[4]
    return same, "byte-identical" if same else "outputs differ between 1 and 4 workers"


CRITERIA = {
    1: ("oracle equivalence: Singer counts", criterion_1),
    2: ("oracle equivalence: primitive polynomials", criterion_2),
    3: ("rho_n correctness", criterion_3),
    4: ("multiplicative order", criterion_4),
    5: ("identity suite", criterion_5),
    6: ("certified product", criterion_6),
    7: ("certified series", criterion_7),
    8: ("prime-power averages", criterion_8),
    9: ("shared constant P(2,1)", criterion_9),
    10: ("ECDF stability", criterion_10),
    11: ("determinism across workers", criterion_11),
}


def run_suite(only=None, quick=False, workers=None):
    """依次运行验收标准，返回 CriterionResult 列表。."""
    results = []
    for number, (name, check) in CRITERIA.items():
        if only and number not in only:
            continue
        start = time.perf_counter()
        logger.info(f"Running criterion {number}: {name}")
        passed, detail = check(quick=quick, workers=workers)
        seconds = time.perf_counter() - start
        results.append(CriterionResult(number, name, bool(passed), detail, seconds))
        level = logging.INFO if passed else logging.WARNING
        logger.log(level, f"Criterion {number} {'passed' if passed else 'FAILED'}")
    return results
