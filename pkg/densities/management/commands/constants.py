"""constants：极限常数的带误差界估计。.

- artin: p_n 的截断 Euler 乘积
- series: P(p, r)，grouped 为带误差界的主方法，direct 仅作交叉校验
"""

from ...constants import euler_product_pn, series_P_direct, series_P_grouped
from ...forms import ProductForm, SeriesForm
from ..base import SingerCommand

DIRECT_DEFAULT_M = 10**5


class Command(SingerCommand):
    help = "计算常数 p_n（artin）或 P(p, r)（series）"

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest="constant", required=True)

        artin = self.add_subcommand(subparsers, "artin", "Euler 乘积 p_n")
        artin.add_argument("--n", required=True)
        artin.add_argument("--prime-bound", help="素数上界，默认 10^6")

        series = self.add_subcommand(subparsers, "series", "级数 P(p, r)")
        series.add_argument("--p", required=True)
        series.add_argument("--r", default="1")
        series.add_argument("--method", choices=SeriesForm.METHODS)
        series.add_argument("--k", help="grouped 的截断 K")
        series.add_argument("--m", help=f"direct 的上界 M，默认 {DIRECT_DEFAULT_M}")

    def get_form_class(self, options):
        return ProductForm if options["constant"] == "artin" else SeriesForm

    def records(self, config, options):
        if options["constant"] == "artin":
            n = config["n"]
            if config.get("prime_bound") is None:
                value = euler_product_pn(n)
            else:
                value = euler_product_pn(n, config["prime_bound"])
            yield {"constant": "p_n", "n": n, **value.as_dict()}
            return
        p, r = config["p"], config["r"]
        if config["method"] == "direct":
            M = config.get("m") or DIRECT_DEFAULT_M
            yield {
                "constant": "P",
                "method": "direct",
                "p": p,
                "r": r,
                "m": M,
                "estimate": series_P_direct(p, r, M),
            }
            return
        value = series_P_grouped(p, r, config.get("k"))
        yield {
            "constant": "P",
            "method": "grouped",
            "p": p,
            "r": r,
            **value.as_dict(),
            "exact": value.exact,
            "contains_zero": value.contains_zero,
        }
