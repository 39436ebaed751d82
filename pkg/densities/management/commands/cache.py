"""cache：分解缓存的统计信息。."""

from ...arith import FACTOR_CACHE
from ..base import SingerCommand


class Command(SingerCommand):
    help = "查看分解缓存（--cache 或 SINGER_FACTOR_CACHE 指定的文件）"

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest="action", required=True)
        self.add_subcommand(subparsers, "stats", "条目数、命中与拒收统计")

    def records(self, config, options):
        yield FACTOR_CACHE.stats()
