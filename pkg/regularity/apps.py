from django.apps import AppConfig


class RegularityConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'regularity'
    verbose_name = 'Regularidade e Coberturas Homogêneas'
