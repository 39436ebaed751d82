"""运行参数读取。.

优先读取 Django settings 中的 SINGER_* 配置；未配置 Django 时退回默认值，
这样库函数在 Django 项目之外也能直接调用。
"""

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured

DEFAULTS = {
    "SINGER_SIEVE_CAP": 10**8,
    "SINGER_TRIAL_BOUND": 10**5,
    "SINGER_RHO_BUDGET": 2 * 10**6,
    "SINGER_FIELD_CAP": 512,
    "SINGER_ORACLE_GROUP_CAP": 2 * 10**6,
    "SINGER_ORACLE_POLY_CAP": 10**6,
    "SINGER_EXACT_TERMS": 10**4,
    "SINGER_BLOCK_SIZE": 4096,
    "SINGER_WORKERS": 1,
    "SINGER_FACTOR_CACHE": None,
}


def get(name):
    """返回配置项 name 的当前值。."""
    try:
        return getattr(settings, name, DEFAULTS[name])
    except ImproperlyConfigured:
        return DEFAULTS[name]
