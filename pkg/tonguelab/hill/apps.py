from django.apps import AppConfig


class HillConfig(AppConfig):
    default = True
    name = "hill"
    verbose_name = "Hill tongues"
