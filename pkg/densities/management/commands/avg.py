"""avg：三种族上 p_n(q) 的平均值与对应理论常数。."""

from ...ensembles import convergence_ladder
from ...forms import EnsembleForm, LadderForm
from ..base import ENSEMBLE_MODES, SingerCommand, add_ensemble_arguments

# 精确求和与 fsum 两种行的列集合不同，csv 固定列顺序
AVG_COLUMNS = (
    "mode",
    "params",
    "x",
    "x_effective",
    "truncated",
    "sample_size",
    "raw_sum",
    "raw_sum_decimal",
    "empirical_mean",
    "theoretical_estimate",
    "theoretical_error_bound",
    "discrepancy",
    "summation",
)


class Command(SingerCommand):
    help = "计算素数幂 / 扩张 / 秩三种族上的平均值，或沿 x 阶梯的收敛情况"
    columns = AVG_COLUMNS

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest="action", required=True)
        for mode in ENSEMBLE_MODES:
            sub = self.add_subcommand(subparsers, mode, f"{mode} 族的平均值")
            sub.set_defaults(mode=mode)
            add_ensemble_arguments(sub)
            sub.add_argument("--x", required=True, help="族参数上界 x")
        ladder = self.add_subcommand(subparsers, "ladder", "沿升序 x 列表逐级计算")
        add_ensemble_arguments(ladder, with_mode=True)
        ladder.add_argument(
            "--x-values", required=True, help="逗号分隔的升序 x，如 1000,2000,4000"
        )

    def get_form_class(self, options):
        return LadderForm if options["action"] == "ladder" else EnsembleForm

    def records(self, config, options):
        x_values = config.get("x_values") or [config["x"]]
        reports = convergence_ladder(
            ENSEMBLE_MODES[config["mode"]],
            self.form.params(),
            x_values,
            workers=config["workers"],
            progress=config["progress"],
            prime_bound=config.get("prime_bound"),
            K=config.get("k"),
        )
        for report in reports:
            yield report.as_dict()
