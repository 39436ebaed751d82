"""dist：频率 ν_x 的经验分布函数与稳定性。."""

from ...distribution import ECDF, kolmogorov_distance, stability_ladder
from ...ensembles import ensemble_sample
from ...forms import EnsembleForm, KolmogorovForm, LadderForm
from ..base import ENSEMBLE_MODES, SingerCommand, add_ensemble_arguments


class Command(SingerCommand):
    help = "输出 ECDF 跳跃点、两个 x 之间的 Kolmogorov 距离或稳定性阶梯"

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest="action", required=True)

        ecdf = self.add_subcommand(subparsers, "ecdf", "ECDF 的全部跳跃点")
        add_ensemble_arguments(ecdf, with_mode=True)
        ecdf.add_argument("--x", required=True)
        ecdf.add_argument(
            "--decimals", action="store_true", help="有理数只输出十进制字符串"
        )

        kolmogorov = self.add_subcommand(subparsers, "kolmogorov", "两个 x 的距离")
        add_ensemble_arguments(kolmogorov, with_mode=True)
        kolmogorov.add_argument("--x-values", required=True, help="两个 x，如 32,64")

        ladder = self.add_subcommand(subparsers, "ladder", "相邻两级的距离")
        add_ensemble_arguments(ladder, with_mode=True)
        ladder.add_argument("--x-values", required=True)

    def get_form_class(self, options):
        return {
            "ecdf": EnsembleForm,
            "kolmogorov": KolmogorovForm,
            "ladder": LadderForm,
        }[options["action"]]

    def decimals_only(self, options):
        return bool(options.get("decimals"))

    def get_columns(self, options):
        # csv 导出的 ECDF 只有 (z, F(z)) 两列
        if options["action"] != "ecdf":
            return None
        return ("z", "ecdf")

    def records(self, config, options):
        mode = ENSEMBLE_MODES[config["mode"]]
        params = self.form.params()
        workers, progress = config["workers"], config["progress"]
        if options["action"] == "ecdf":
            ecdf = ECDF.from_sample(
                ensemble_sample(mode, params, config["x"], workers, progress)
            )
            for z, level in ecdf.jumps():
                yield {
                    "mode": mode,
                    "params": ecdf.meta["params"],
                    "x": config["x"],
                    "size": ecdf.size,
                    "z": z,
                    "ecdf": level,
                }
        elif options["action"] == "kolmogorov":
            x1, x2 = config["x_values"]
            full = ensemble_sample(mode, params, max(x1, x2), workers, progress)
            a = ECDF.from_sample(full.prefix(x1))
            b = ECDF.from_sample(full.prefix(x2))
            yield {
                "mode": mode,
                "params": a.meta["params"],
                "x1": x1,
                "x2": x2,
                "size1": a.size,
                "size2": b.size,
                "kolmogorov_distance": kolmogorov_distance(a, b),
            }
        else:
            yield from stability_ladder(
                mode, params, config["x_values"], workers, progress
            )
