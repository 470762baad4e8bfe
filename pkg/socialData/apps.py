from django.apps import AppConfig


class SocialDataConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'socialData'
