import os
import sys

import django
from tqdm import tqdm

# 设置 Django 环境
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "SingerDensity.settings")
django.setup()


def warm_cache(path, max_q=100, max_n=12):
    """为 q ≤ max_q、n ≤ max_n 的全部 q^n - 1 预先分解并写入缓存文件.

    该函数执行以下操作：
    1. 加载已有的缓存文件（不存在则从空缓存开始）。
    2. 枚举素数幂 q ≤ max_q，逐个分解 q^n - 1。
    3. 超出 2^128 或分解失败的组合跳过并计数。
    4. 按 N 升序写回文件。
    """
    # 在函数内部导入，确保 django.setup() 先执行
    from densities.arith import FACTOR_CACHE, enumerate_prime_powers, factor_qn_minus_1
    from densities.exceptions import FactorizationExhausted, RangeError

    print(f"📂 Loading cache {path}...")
    FACTOR_CACHE.load(path)

    print("🧮 Factoring q^n - 1...")
    skipped = 0
    pairs = [
        (pp.q, n)
        for pp in enumerate_prime_powers(max_q).entries
        for n in range(1, max_n + 1)
    ]
    for q, n in tqdm(pairs, unit="pair"):
        try:
            factor_qn_minus_1(q, n)
        except (RangeError, FactorizationExhausted):
            skipped += 1

    saved = FACTOR_CACHE.save(path)
    print(f"✅ Saved {saved} factorizations ({skipped} pairs skipped)")


if __name__ == "__main__":
    target = sys.argv[1] if len(sys.argv) > 1 else "factor_cache.txt"
    warm_cache(target, *(int(v) for v in sys.argv[2:4]))
