"""结构化输出：json-lines / csv / plain 三种记录格式及其读取器。.

有理数写成 "num/den"，并附带 15 位有效数字（ROUND_HALF_EVEN）的十进制
字段 `<key>_decimal`。
"""

import csv
import io
import json
import shlex
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction

from django.core.serializers.json import DjangoJSONEncoder

from .arith import PrimePower
from .exceptions import InvalidArgument

FORMATS = ("json-lines", "csv", "plain")
DECIMAL_DIGITS = 15


def decimal_string(value, digits=DECIMAL_DIGITS):
    """有效数字 digits 位、ROUND_HALF_EVEN 的十进制字符串。."""
    context = Context(prec=digits, rounding=ROUND_HALF_EVEN)
    if isinstance(value, Fraction):
        result = context.divide(Decimal(value.numerator), Decimal(value.denominator))
    else:
        result = context.plus(Decimal(value))
    return format(result, "f") if result.adjusted() > -7 else str(result)


def fraction_string(value):
    """Fraction 写成 'num/den'（整数只写分子）。."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def prepare(record, decimals_only=False):
    """把记录中的 Fraction、PrimePower 等转换成可输出的值。.

    Args:
        record: 字段名 -> 值 的 dict（保持顺序）。
        decimals_only: 有理数只输出十进制字符串，不输出 'num/den'。
    """
    out = {}
    for key, value in record.items():
        if isinstance(value, PrimePower):
            value = value.q
        if isinstance(value, Fraction):
            if decimals_only:
                out[key] = decimal_string(value)
            else:
                out[key] = fraction_string(value)
                out[f"{key}_decimal"] = decimal_string(value)
        elif isinstance(value, dict):
            out[key] = prepare(value, decimals_only)
        else:
            out[key] = value
    return out


def _flat(value):
    if isinstance(value, dict):
        return ";".join(f"{k}={_flat(v)}" for k, v in value.items())
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    return str(value)


class RecordWriter:
    """把记录逐条写到 stream。csv 格式在第一条记录前写表头。."""

    def __init__(self, stream, fmt="json-lines", columns=None, decimals_only=False):
        """选择格式；columns 固定 csv 的列顺序。."""
        if fmt not in FORMATS:
            raise InvalidArgument(f"unknown format {fmt!r}; expected one of {FORMATS}")
        self.stream = stream
        self.fmt = fmt
        self.columns = list(columns) if columns else None
        self.decimals_only = decimals_only
        self._csv = None

    def write(self, record):
        record = prepare(record, self.decimals_only)
        if self.fmt == "json-lines":
            line = json.dumps(record, cls=DjangoJSONEncoder, ensure_ascii=False)
            self.stream.write(line + "\n")
        elif self.fmt == "csv":
            if self._csv is None:
                self.columns = self.columns or list(record)
                self._csv = csv.writer(self.stream, lineterminator="\n")
                self._csv.writerow(self.columns)
            self._csv.writerow([_flat(record.get(c)) for c in self.columns])
        else:
            pairs = (f"{k}={shlex.quote(_flat(v))}" for k, v in record.items())
            self.stream.write(" ".join(pairs) + "\n")

    def write_all(self, records):
        for record in records:
            self.write(record)


def render(records, fmt="json-lines", columns=None, decimals_only=False):
    """把一组记录渲染成字符串。."""
    buffer = io.StringIO()
    RecordWriter(buffer, fmt, columns, decimals_only).write_all(records)
    return buffer.getvalue()


def parse_value(text):
    """把输出中的标量还原：'a/b' -> Fraction，整数 -> int，其余尝试 float。."""
    if not isinstance(text, str):
        return text
    if text in ("true", "false"):
        return text == "true"
    try:
        if "/" in text:
            return Fraction(text)
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_records(text, fmt="json-lines"):
    """读取 RecordWriter 的输出，返回 dict 列表（标量已经过 parse_value）。."""
    lines = [line for line in text.splitlines() if line.strip()]
    if fmt == "json-lines":
        rows = [json.loads(line) for line in lines]
        return [{k: parse_value(v) for k, v in row.items()} for row in rows]
    if fmt == "csv":
        reader = csv.DictReader(io.StringIO("\n".join(lines)))
        return [{k: parse_value(v) for k, v in row.items()} for row in reader]
    if fmt == "plain":
        rows = []
        for line in lines:
            pairs = (token.split("=", 1) for token in shlex.split(line))
            rows.append({k: parse_value(v) for k, v in pairs})
        return rows
    raise InvalidArgument(f"unknown format {fmt!r}")
