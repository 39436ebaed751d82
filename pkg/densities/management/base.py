"""管理命令公共基类。.

所有命令共享同一套运行参数（--format / --cache / --workers / --seedless /
--progress），先经表单校验再计算；记录逐条写到 stdout，
领域错误写一条 JSON 错误记录到 stderr，并以对应退出码结束。
"""

import json
import logging

from django.core.management.base import BaseCommand, CommandError

from .. import conf
from ..arith import FACTOR_CACHE
from ..exceptions import SingerDensityError
from ..forms import RunConfigForm, validate
from ..records import FORMATS, RecordWriter

logger = logging.getLogger("densities.commands")

ENSEMBLE_MODES = {
    "prime-powers": "prime_powers",
    "extensions": "extensions",
    "ranks": "ranks",
}


def add_run_config_arguments(parser):
    """向 parser（或子命令 parser）添加公共运行参数。."""
    group = parser.add_argument_group("run config")
    group.add_argument("--format", choices=FORMATS, help="输出格式，默认 json-lines")
    group.add_argument(
        "--cache", help="分解缓存文件路径（也可用环境变量 SINGER_FACTOR_CACHE）"
    )
    group.add_argument("--workers", help="并行进程数，默认 SINGER_WORKERS")
    group.add_argument(
        "--seedless", action="store_true", help="声明全程确定（恒为真，保留接口）"
    )
    group.add_argument("--progress", action="store_true", help="在 stderr 显示进度条")


def add_ensemble_arguments(parser, with_mode=False):
    """族参数：n、p、q、x 以及理论值的截断参数。."""
    if with_mode:
        parser.add_argument("--mode", required=True, choices=list(ENSEMBLE_MODES))
    parser.add_argument("--n", help="秩 n")
    parser.add_argument("--p", help="素数 p")
    parser.add_argument("--q", help="素数幂 q")
    parser.add_argument("--k", help="理论级数的截断 K")
    parser.add_argument("--prime-bound", help="理论乘积的素数上界")


class SingerCommand(BaseCommand):
    """带参数校验、缓存与结构化输出的命令基类。.

    子类需要:
    - form_class 或 get_form_class(options)
    - add_operation_arguments(parser)
    - records(config, options)：生成要输出的 dict
    """

    requires_system_checks = []
    form_class = RunConfigForm
    default_format = "json-lines"
    columns = None

    def add_arguments(self, parser):
        add_run_config_arguments(parser)
        self.add_operation_arguments(parser)

    def add_operation_arguments(self, parser):
        pass

    def add_subcommand(self, subparsers, name, help_text):
        """创建带公共运行参数的子命令。."""
        sub = subparsers.add_parser(name, help=help_text)
        add_run_config_arguments(sub)
        return sub

    def get_form_class(self, options):
        return self.form_class

    def get_columns(self, options):
        return self.columns

    def decimals_only(self, options):
        return False

    def records(self, config, options):
        raise NotImplementedError

    def handle(self, *args, **options):
        data = {k: v for k, v in options.items() if v is not None and v is not False}
        data.setdefault("format", self.default_format)
        try:
            config, self.form = validate(self.get_form_class(options), data)
            config["workers"] = config.get("workers") or conf.get("SINGER_WORKERS")
            cache_path = config.get("cache") or conf.get("SINGER_FACTOR_CACHE")
            if cache_path:
                FACTOR_CACHE.load(cache_path)
            writer = RecordWriter(
                self.stdout,
                config["format"],
                columns=self.get_columns(options),
                decimals_only=self.decimals_only(options),
            )
            writer.write_all(self.records(config, options))
            if cache_path:
                FACTOR_CACHE.save(cache_path)
        except SingerDensityError as exc:
            self.fail(exc)

    def fail(self, exc):
        """写结构化错误记录到 stderr，再按异常的退出码结束命令。."""
        logger.warning(f"{exc.kind}: {exc}")
        record = json.dumps(exc.as_record(), ensure_ascii=False)
        self.stderr.write(record, style_func=lambda x: x)
        raise CommandError(str(exc), returncode=exc.exit_code) from exc
