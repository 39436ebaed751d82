from django.apps import AppConfig


class DensitiesConfig(AppConfig):
    name = "densities"
    verbose_name = "Singer cycle densities"
