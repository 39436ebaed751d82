"""oracle：闭式公式与穷举的逐项核对，以及有限域构造。."""

from ... import conf
from ...exceptions import OracleCapExceeded
from ...forms import OracleForm
from ...singer import (
    build_field,
    format_poly,
    is_irreducible,
    oracle_count_max_order_elements,
    oracle_count_primitive_polys,
    oracle_specs,
    primitive_poly_count,
    singer_count,
)
from ..base import SingerCommand


class Command(SingerCommand):
    help = "穷举核对 Singer 计数（verify），或查看 oracle 使用的有限域（field）"
    form_class = OracleForm

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest="action", required=True)

        verify = self.add_subcommand(
            subparsers, "verify", "核对 |GL_n(q)| ≤ 上限的全部 (n, q)"
        )
        verify.add_argument(
            "--max-group-size", help="群阶上限，默认 SINGER_ORACLE_GROUP_CAP"
        )
        verify.add_argument(
            "--polynomials", action="store_true", help="同时核对本原多项式个数"
        )

        field = self.add_subcommand(subparsers, "field", "构造 F_{p^r}")
        field.add_argument("--p", required=True)
        field.add_argument("--r", default="1")

    def records(self, config, options):
        if options["action"] == "field":
            yield self.field_record(config["p"], config["r"])
            return
        group_cap = conf.get("SINGER_ORACLE_GROUP_CAP")
        cap = config.get("max_group_size") or group_cap
        if cap > group_cap:
            raise OracleCapExceeded(
                f"max group size {cap} exceeds SINGER_ORACLE_GROUP_CAP = {group_cap}"
            )
        poly_cap = conf.get("SINGER_ORACLE_POLY_CAP")
        for spec in oracle_specs(cap):
            formula = singer_count(spec)
            oracle = oracle_count_max_order_elements(
                spec, cap=cap, progress=config["progress"]
            )
            record = {
                "n": spec.n,
                "q": spec.q,
                "formula_count": formula,
                "oracle_count": oracle,
                "match": formula == oracle,
            }
            if options.get("polynomials") and spec.q.q**spec.n <= poly_cap:
                record["primitive_polys"] = primitive_poly_count(spec)
                record["primitive_polys_oracle"] = oracle_count_primitive_polys(spec)
            yield record

    def field_record(self, p, r):
        field = build_field(p, r)
        prime_field = build_field(p, 1)
        return {
            "p": p,
            "r": r,
            "size": field.size,
            "modulus_poly": format_poly(field.modulus_poly),
            "irreducible": r == 1 or is_irreducible(prime_field, field.modulus_poly),
        }
