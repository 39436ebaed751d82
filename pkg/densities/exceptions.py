"""异常定义模块。.

所有库函数抛出的异常都继承 SingerDensityError，并携带命令行退出码：

- 2: 参数非法 / 数学定义域错误
- 3: 超出 2^128 范围或规模上限
- 4: 分解失败（rho 预算耗尽）
- 5: oracle 穷举上限
"""


class SingerDensityError(Exception):
    """项目异常基类。."""

    exit_code = 1
    kind = "error"

    def as_record(self):
        """转换为结构化错误记录（写到 stderr）。."""
        return {"error": self.kind, "exit_code": self.exit_code, "message": str(self)}


class InvalidArgument(SingerDensityError, ValueError):
    exit_code = 2
    kind = "invalid_argument"


class DomainError(SingerDensityError, ValueError):
    exit_code = 2
    kind = "domain"


class RangeError(SingerDensityError, OverflowError):
    exit_code = 3
    kind = "range"


class SizeError(RangeError):
    kind = "size"


class FactorizationExhausted(SingerDensityError, ArithmeticError):
    """rho 在固定的参数表内未能拆开合数。."""

    exit_code = 4
    kind = "factorization_exhausted"

    def __init__(self, n, message=None, k=None):
        """记录无法分解的合数；k 为出错时分解的 p^k - 1 的指数。."""
        self.n = n
        self.k = k
        super().__init__(message or f"factorization exhausted on composite {n}")


class OracleCapExceeded(RangeError):
    """穷举规模超过 oracle 上限（退出码单独区分）。."""

    exit_code = 5
    kind = "oracle_cap"
