import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'unifiedsocial.settings')
django.setup()
