"""频率 ν_x 的经验分布函数与稳定性诊断。.

三种族统一存储 n·p_n(·)，支撑集落在 (0, 1]；相同取值按重数保留。
"""

import bisect
import logging
from fractions import Fraction

import numpy as np

from .ensembles import _members, as_prime_power, ensemble_sample
from .exceptions import DomainError
from .singer import GroupSpec, density

logger = logging.getLogger("densities.distribution")


class ECDF:
    """加权（按重数）排序样本定义的经验分布函数。.

    Attributes:
        values: 升序的 numpy float64 数组。
        exact: 与 values 同序的 Fraction 元组；没有精确值时为 None。
        meta: 族的描述（mode、参数、x、缩放方式）。
    """

    def __init__(self, values, exact=None, meta=None):
        """从样本构造；exact 给出时以它排序。."""
        if exact is not None:
            exact = tuple(sorted(exact))
            values = [e.numerator / e.denominator for e in exact]
        values = np.sort(np.asarray(values, dtype=np.float64))
        if len(values) and (values[0] < 0 or values[-1] > 1):
            raise DomainError("ECDF sample must lie in [0, 1]")
        self.values = values
        self.exact = exact
        self.meta = dict(meta or {})

    @classmethod
    def from_sample(cls, sample):
        """由 EnsembleSample 构造，样本取 n·p_n = φ/modulus。."""
        meta = {
            "mode": sample.mode,
            "params": {k: getattr(v, "q", v) for k, v in sample.params.items()},
            "x": sample.x,
            "x_effective": sample.x_effective,
            "scaling": "n * p_n",
        }
        return cls(exact=[t.scaled for t in sample.terms], values=(), meta=meta)

    @property
    def size(self):
        return len(self.values)

    def __len__(self):
        """样本数。."""
        return self.size

    def evaluate(self, z):
        """F(z) = #{样本 ≤ z}/size，返回 Fraction。.

        z 为有理数且有精确样本时按精确比较，否则按浮点比较。
        """
        if not self.size:
            raise DomainError("cannot evaluate an empty ECDF")
        if self.exact is not None and isinstance(z, (int, Fraction)):
            count = bisect.bisect_right(self.exact, z)
        else:
            count = int(np.searchsorted(self.values, float(z), side="right"))
        return Fraction(count, self.size)

    def jumps(self):
        """全部跳跃点 [(z, F(z)), ...]，z 取精确值（可得时）。."""
        points = self.exact if self.exact is not None else self.values.tolist()
        rows = []
        for i, z in enumerate(points):
            if i + 1 < len(points) and points[i + 1] == z:
                continue
            rows.append((z, Fraction(i + 1, self.size)))
        return rows

    def __repr__(self):
        """返回简短描述。."""
        return f"ECDF(size={self.size}, meta={self.meta})"


def ecdf_prime_powers(n, x, workers=None, progress=False):
    """{n·p_n(q) : q ≤ x 为素数幂} 的 ECDF。."""
    sample = ensemble_sample("prime_powers", {"n": n}, x, workers, progress)
    return ECDF.from_sample(sample)


def ecdf_extensions(p, n, x, workers=None, progress=False):
    """{n·p_n(p^r) : r ≤ x} 的 ECDF。."""
    sample = ensemble_sample("extensions", {"p": p, "n": n}, x, workers, progress)
    return ECDF.from_sample(sample)


def ecdf_ranks(q, x, workers=None, progress=False):
    """{n·p_n(q) : n ≤ x} 的 ECDF，即 p_n(q) ≤ z/n 的频率。."""
    sample = ensemble_sample("ranks", {"q": as_prime_power(q)}, x, workers, progress)
    return ECDF.from_sample(sample)


def kolmogorov_distance(a, b):
    """sup_z |F_a(z) - F_b(z)|，在合并后的跳跃点上用整数计数精确求出。.

    两侧都有精确样本时按 Fraction 比较，否则按浮点值比较。

    Raises:
        DomainError: 任一 ECDF 为空。
    """
    if not a.size or not b.size:
        raise DomainError("kolmogorov distance needs two non-empty ECDFs")
    if a.exact is not None and b.exact is not None:
        gap = max(
            abs(
                bisect.bisect_right(a.exact, z) * b.size
                - bisect.bisect_right(b.exact, z) * a.size
            )
            for z in set(a.exact) | set(b.exact)
        )
        return Fraction(gap, a.size * b.size)
    points = np.union1d(a.values, b.values)
    count_a = np.searchsorted(a.values, points, side="right").astype(np.int64)
    count_b = np.searchsorted(b.values, points, side="right").astype(np.int64)
    gap = np.abs(count_a * b.size - count_b * a.size)
    return Fraction(int(gap.max()), a.size * b.size)


def stability_ladder(mode, params, x_values, workers=None, progress=False):
    """沿 x_values 相邻两级的 kolmogorov 距离。.

    各项在最大的 x 上只计算一次，较小的 x 取前缀。
    返回 [{"mode", "params", "x1", "x2", "kolmogorov_distance"}, ...]。
    """
    x_values = list(x_values)
    full = ensemble_sample(mode, params, max(x_values), workers, progress)
    ecdfs = [ECDF.from_sample(full.prefix(x)) for x in x_values]
    rows = []
    for i in range(1, len(x_values)):
        x1, x2 = x_values[i - 1], x_values[i]
        distance = kolmogorov_distance(ecdfs[i - 1], ecdfs[i])
        rows.append(
            {
                "mode": mode,
                "params": ecdfs[i].meta["params"],
                "x1": x1,
                "x2": x2,
                "kolmogorov_distance": distance,
            }
        )
        logger.info(f"Stability {mode} {x1} -> {x2}: {float(distance):.6f}")
    return rows


def frequency(mode, params, x, z):
    """直接计数 ν_x(成员; p_n ≤ z/n)，不做缩放（校验缩放约定用）。."""
    _, members = _members(mode, params, x)
    z = Fraction(z)
    hits = sum(
        1 for _, n, q in members if density(GroupSpec.of(n, q)).density <= z / n
    )
    return Fraction(hits, len(members))
