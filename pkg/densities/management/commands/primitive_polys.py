"""primitive-polys：F_q 上 n 次本原多项式的个数。."""

from ...forms import GroupForm
from ...singer import GroupSpec, oracle_count_primitive_polys, primitive_poly_count
from ..base import SingerCommand


class Command(SingerCommand):
    help = "计算 F_q 上 n 次本原多项式个数 φ(q^n-1)/n"
    form_class = GroupForm

    def add_operation_arguments(self, parser):
        parser.add_argument("--n", required=True, help="次数 n ≥ 1")
        parser.add_argument("--q", required=True, help="素数幂 q")
        parser.add_argument(
            "--enumerate",
            action="store_true",
            help="同时穷举多项式核对（受 SINGER_ORACLE_POLY_CAP 限制）",
        )

    def records(self, config, options):
        spec = GroupSpec(config["n"], config["q"])
        record = {"n": spec.n, "q": spec.q, "count": primitive_poly_count(spec)}
        if options.get("enumerate"):
            record["oracle_count"] = oracle_count_primitive_polys(
                spec, progress=config["progress"]
            )
            record["match"] = record["oracle_count"] == record["count"]
        yield record
