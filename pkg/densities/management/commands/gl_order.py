"""gl-order：|GL_n(q)|。."""

from ...forms import GroupForm
from ...singer import GroupSpec, gl_order
from ..base import SingerCommand


class Command(SingerCommand):
    help = "计算 |GL_n(q)| = Π (q^n - q^i)"
    form_class = GroupForm

    def add_operation_arguments(self, parser):
        parser.add_argument("--n", required=True, help="秩 n ≥ 1")
        parser.add_argument("--q", required=True, help="素数幂 q")

    def records(self, config, options):
        spec = GroupSpec(config["n"], config["q"])
        yield {"n": spec.n, "q": spec.q, "gl_order": gl_order(spec)}
