import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "SingerDensity.settings")
django.setup()
