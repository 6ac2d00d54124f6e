from django.apps import AppConfig


class HypergraphsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'hypergraphs'
    verbose_name = 'Hipergrafos e Construções'
