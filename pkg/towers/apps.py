from django.apps import AppConfig


class TowersConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'towers'
    verbose_name = 'Module towers and capitulation reports'
