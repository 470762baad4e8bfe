"""
Django settings for the unifiedsocial project.

Only the pieces a command-line toolkit needs are configured: no web stack, one
app (socialData), and a default SQLite database. Each dataset store is its own
SQLite file under SMDT_STORES_DIR and is registered as an extra database alias
at runtime (see socialData.store).
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Not used for anything security relevant here, Django just refuses to start without one
SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'unifiedsocial-local')

DEBUG = bool(os.environ.get('DEBUG'))

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    'socialData',
]

MIDDLEWARE = []

# Database
# The default alias only backs Django's own bookkeeping and the test runner.

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.environ.get('SMDT_DEFAULT_DB', BASE_DIR / 'unifiedsocial.sqlite3'),
    }
}

# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Stores

SMDT_STORES_DIR = Path(os.environ.get('SMDT_STORES_DIR', BASE_DIR / 'stores'))

# Ingestion

INGEST_CHUNK_SIZE = 5000

# Anonymizer

SMDT_PEPPER_ENV = 'SMDT_PEPPER'
ANONYMIZER_TOKEN_CACHE_SIZE = 100000

# Enrichers

ENRICHER_MAX_ATTEMPTS = 3
ENRICHER_RETRY_BASE_DELAY = 1.0
ENRICHER_PARALLELISM = 4
ENRICHER_REQUEST_TIMEOUT = 60
ANTHROPIC_API_VERSION = '2023-06-01'

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'filters': {
        'scrub_secrets': {
            '()': 'unifiedsocial.log.SecretScrubFilter',
        },
    },
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
            'filters': ['scrub_secrets'],
        },
    },
    'root': {
        'handlers': [],
        'level': 'WARNING',
    },
    'loggers': {
        'socialData': {
            'handlers': ['console'],
            'level': os.environ.get('SMDT_LOG_LEVEL', 'WARNING'),
            'propagate': True,
        },
    },
}
