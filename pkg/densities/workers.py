"""固定分块的并行执行。.

参数序列按固定大小切块，块内结果按块序拼接，所以输出与 worker 数无关。
"""

import logging
from concurrent.futures import ProcessPoolExecutor

from tqdm import tqdm

from . import conf

logger = logging.getLogger("densities.workers")


def split_blocks(items, block_size=None):
    """按固定大小切块。."""
    block_size = block_size or conf.get("SINGER_BLOCK_SIZE")
    items = list(items)
    return [items[i : i + block_size] for i in range(0, len(items), block_size)]


def run_blocks(func, items, workers=None, block_size=None, progress=False, desc=None):
    """对每块调用 func(block) -> list，按块序拼接全部结果。.

    Args:
        func: 模块级函数（要能被 pickle），输入一个块，返回等长列表。
        items: 参数序列。
        workers: 进程数，≤ 1 时在当前进程顺序执行。
        block_size: 块大小，默认 SINGER_BLOCK_SIZE。
        progress: 是否在 stderr 显示 tqdm 进度条。
        desc: 进度条标题。
    """
    workers = workers or conf.get("SINGER_WORKERS")
    blocks = split_blocks(items, block_size)
    total = sum(len(block) for block in blocks)
    results = []
    with tqdm(total=total, desc=desc, disable=not progress, leave=False) as bar:
        if workers <= 1 or len(blocks) <= 1:
            for block in blocks:
                results.append(func(block))
                bar.update(len(block))
        else:
            logger.info(f"Running {len(blocks)} blocks on {workers} workers")
            with ProcessPoolExecutor(max_workers=workers) as executor:
                # map 按提交顺序返回
                for block, out in zip(blocks, executor.map(func, blocks), strict=True):
                    results.append(out)
                    bar.update(len(block))
    return [value for out in results for value in out]
