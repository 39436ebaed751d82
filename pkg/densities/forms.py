"""命令行参数校验表单。.

每条命令在计算开始前先把参数交给对应的表单校验（RunConfig），
校验失败统一转换为 InvalidArgument（退出码 2）。
"""

import math

from django import forms

from .arith import PrimePower, is_prime
from .exceptions import InvalidArgument, RangeError
from .records import FORMATS


class RunConfigForm(forms.Form):
    """所有命令共用的运行参数。."""

    format = forms.ChoiceField(choices=[(f, f) for f in FORMATS], required=False)
    cache = forms.CharField(required=False)
    workers = forms.IntegerField(min_value=1, required=False)
    seedless = forms.BooleanField(required=False)
    progress = forms.BooleanField(required=False)

    def clean_format(self):
        return self.cleaned_data.get("format") or "json-lines"

    def clean_seedless(self):
        # 计算全程确定，此开关恒为真
        return True


class PrimeFieldMixin:
    """校验 p 为素数、q 为素数幂。."""

    def clean_p(self):
        p = self.cleaned_data.get("p")
        if p is not None and not is_prime(p):
            raise forms.ValidationError(f"p = {p} 不是素数")
        return p

    def clean_q(self):
        q = self.cleaned_data.get("q")
        if q is None:
            return q
        try:
            return PrimePower.from_q(q)
        except (InvalidArgument, RangeError) as exc:
            raise forms.ValidationError(str(exc)) from exc


class RealBoundMixin:
    """x 为正实数；整数值保留为 int，便于输出。."""

    def clean_x(self):
        x = self.cleaned_data.get("x")
        if x is None:
            return x
        if not math.isfinite(x) or x <= 0:
            raise forms.ValidationError("x 必须是正的有限实数")
        return int(x) if float(x).is_integer() else x


class GroupForm(PrimeFieldMixin, RunConfigForm):
    """density / count / gl-order / primitive-polys。."""

    n = forms.IntegerField(min_value=1)
    q = forms.IntegerField(min_value=2)


class ProductForm(RunConfigForm):
    """constants artin。."""

    n = forms.IntegerField(min_value=1)
    prime_bound = forms.IntegerField(min_value=2, required=False)


class SeriesForm(PrimeFieldMixin, RunConfigForm):
    """constants series（grouped 用 k，direct 用 m）。."""

    METHODS = ("grouped", "direct")

    p = forms.IntegerField(min_value=2)
    r = forms.IntegerField(min_value=1)
    k = forms.IntegerField(min_value=1, required=False)
    m = forms.IntegerField(min_value=1, required=False)
    method = forms.ChoiceField(choices=[(m, m) for m in METHODS], required=False)

    def clean_method(self):
        return self.cleaned_data.get("method") or "grouped"


class EnsembleForm(PrimeFieldMixin, RealBoundMixin, RunConfigForm):
    """avg / dist 的族参数：按 mode 要求 n、p 或 q。."""

    MODES = ("prime-powers", "extensions", "ranks")
    REQUIRED = {
        "prime-powers": ("n",),
        "extensions": ("p", "n"),
        "ranks": ("q",),
    }

    mode = forms.ChoiceField(choices=[(m, m) for m in MODES])
    n = forms.IntegerField(min_value=1, required=False)
    p = forms.IntegerField(min_value=2, required=False)
    q = forms.IntegerField(min_value=2, required=False)
    x = forms.FloatField(required=False)
    k = forms.IntegerField(min_value=1, required=False)
    prime_bound = forms.IntegerField(min_value=2, required=False)

    def clean(self):
        cleaned = super().clean()
        mode = cleaned.get("mode")
        for name in self.REQUIRED.get(mode, ()):
            if cleaned.get(name) is None and name not in self.errors:
                self.add_error(name, f"mode {mode} 需要参数 --{name}")
        if "x_values" not in self.fields and cleaned.get("x") is None:
            if "x" not in self.errors:
                self.add_error("x", "需要参数 --x")
        return cleaned

    def params(self):
        """按 mode 取出族参数（库函数使用的形式）。."""
        mode = self.cleaned_data["mode"]
        return {name: self.cleaned_data[name] for name in self.REQUIRED[mode]}


class XListMixin:
    """x_values：逗号分隔的升序正实数列表。."""

    def clean_x_values(self):
        raw = self.cleaned_data.get("x_values") or ""
        try:
            values = [float(v) for v in raw.split(",") if v.strip()]
        except ValueError as exc:
            raise forms.ValidationError(f"无法解析 x 列表 {raw!r}") from exc
        if not values:
            raise forms.ValidationError("x 列表不能为空")
        if any(a > b for a, b in zip(values, values[1:], strict=False)):
            raise forms.ValidationError("x 列表必须升序")
        return [int(v) if v.is_integer() else v for v in values]


class LadderForm(XListMixin, EnsembleForm):
    """avg ladder / dist ladder。."""

    x_values = forms.CharField()


class KolmogorovForm(XListMixin, EnsembleForm):
    """dist kolmogorov：比较同一族在两个 x 下的 ECDF。."""

    x_values = forms.CharField()

    def clean_x_values(self):
        values = super().clean_x_values()
        if len(values) != 2:
            raise forms.ValidationError("kolmogorov 需要恰好两个 x")
        return values


class OracleForm(PrimeFieldMixin, RunConfigForm):
    """oracle verify / oracle field。."""

    max_group_size = forms.IntegerField(min_value=1, required=False)
    p = forms.IntegerField(min_value=2, required=False)
    r = forms.IntegerField(min_value=1, required=False)


def validate(form_class, data):
    """校验参数，返回 (cleaned_data, form)；失败时抛 InvalidArgument。."""
    form = form_class(data={k: v for k, v in data.items() if v is not None})
    if not form.is_valid():
        messages = "; ".join(
            f"{field}: {' '.join(errors)}" for field, errors in form.errors.items()
        )
        raise InvalidArgument(messages)
    return form.cleaned_data, form
