"""count：GL_n(q) 中 Singer 循环的个数。."""

from ...forms import GroupForm
from ...singer import GroupSpec, gl_order, singer_count
from ..base import SingerCommand


class Command(SingerCommand):
    help = "计算 GL_n(q) 中 Singer 循环（阶为 q^n - 1 的元素）的个数"
    form_class = GroupForm

    def add_operation_arguments(self, parser):
        parser.add_argument("--n", required=True, help="秩 n ≥ 1")
        parser.add_argument("--q", required=True, help="素数幂 q")

    def records(self, config, options):
        spec = GroupSpec(config["n"], config["q"])
        yield {
            "n": spec.n,
            "q": spec.q,
            "gl_order": gl_order(spec),
            "singer_count": singer_count(spec),
        }
