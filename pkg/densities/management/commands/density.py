"""density：p_n(q) = φ(q^n-1)/(n(q^n-1)) 的精确值。."""

from ...forms import GroupForm
from ...singer import GroupSpec, density
from ..base import SingerCommand


class Command(SingerCommand):
    help = "计算 GL_n(q) 中最大阶元素的比例 p_n(q)"
    form_class = GroupForm

    def add_operation_arguments(self, parser):
        parser.add_argument("--n", required=True, help="秩 n ≥ 1")
        parser.add_argument("--q", required=True, help="素数幂 q")

    def records(self, config, options):
        record = density(GroupSpec(config["n"], config["q"]))
        yield {**record.as_dict(), "density_float": float(record)}
