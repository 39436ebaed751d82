"""accept：运行验收套件并输出通过/失败表。."""

from django.core.management.base import CommandError

from ...acceptance import CRITERIA, run_suite
from ...exceptions import InvalidArgument
from ..base import SingerCommand


class Command(SingerCommand):
    help = "运行全部（或 --only 指定的）验收标准，任一失败则以退出码 1 结束"
    default_format = "plain"

    def add_operation_arguments(self, parser):
        parser.add_argument("--quick", action="store_true", help="缩小规模的冒烟运行")
        parser.add_argument("--only", help="逗号分隔的标准编号，如 1,3,7")

    def records(self, config, options):
        only = self.parse_only(options.get("only"))
        results = run_suite(
            only=only, quick=bool(options.get("quick")), workers=config["workers"]
        )
        for result in results:
            yield result.as_dict()
        failed = [r.number for r in results if not r.passed]
        if failed:
            raise CommandError(f"acceptance criteria failed: {failed}", returncode=1)

    @staticmethod
    def parse_only(text):
        if not text:
            return None
        try:
            numbers = {int(token) for token in text.split(",") if token.strip()}
        except ValueError as exc:
            raise InvalidArgument(f"cannot parse --only {text!r}") from exc
        unknown = numbers - set(CRITERIA)
        if unknown:
            raise InvalidArgument(f"unknown criteria {sorted(unknown)}")
        return numbers
