from django.apps import AppConfig


class IwasawaConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'iwasawa'
    verbose_name = 'Finite-level Iwasawa algebra'
