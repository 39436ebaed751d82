"""singerdensity 控制台入口。.

等价于 ``python manage.py <verb> ...``，额外接受带连字符的命令名
（``gl-order``、``primitive-polys``），Django 命令名本身只能用下划线。
"""

import os
import sys


def main():
    """把连字符命令名映射为 Django 命令名后执行。."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "SingerDensity.settings")
    from django.core.management import execute_from_command_line

    argv = list(sys.argv)
    argv[0] = "singerdensity"
    if len(argv) > 1 and not argv[1].startswith("-"):
        argv[1] = argv[1].replace("-", "_")
    execute_from_command_line(argv)


if __name__ == "__main__":
    main()
