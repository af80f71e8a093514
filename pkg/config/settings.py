"""
Django settings for the iwasawa tower project.

The project has no database and no web surface: every entry point is a
management command (see towers/management/commands). Session parameters
and caps can be overridden from the environment or a .env file.
"""

from pathlib import Path
import os

from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(BASE_DIR / '.env')

SECRET_KEY = os.environ.get('SECRET_KEY', 'iwasawa-local-only-7c1f0e9a2d4b')

DEBUG = os.environ.get('DEBUG', '1') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    # Third party apps
    'rest_framework',

    # Local apps
    'arithmetic',
    'iwasawa',
    'towers',
]

# Computations are in-memory; reports go to flat files.
DATABASES = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# REST Framework Settings
# Serializers are used for validation and report shaping only.
REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [],
}

# Computation Settings
IWASAWA = {
    # characters enumerated per query, 3^6 by default
    'ENUMERATION_CAP': int(os.environ.get('IWASAWA_ENUMERATION_CAP', 729)),
    # above this many kernel elements chains are counted by span intersection
    'CHAIN_ENUMERATION_LIMIT': int(os.environ.get('IWASAWA_CHAIN_LIMIT', 100000)),
    # flattened module dimension g * p^(d*m)
    'MATRIX_DIMENSION_CAP': int(os.environ.get('IWASAWA_MATRIX_CAP', 4096)),
    'SESSION_DEFAULTS': {
        'p': 2,
        'd': 1,
        'N': 3,
        'm': 1,
    },
}

LOG_LEVEL = os.environ.get('IWASAWA_LOG_LEVEL', 'WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'arithmetic': {'handlers': ['console'], 'level': LOG_LEVEL, 'propagate': False},
        'iwasawa': {'handlers': ['console'], 'level': LOG_LEVEL, 'propagate': False},
        'towers': {'handlers': ['console'], 'level': LOG_LEVEL, 'propagate': False},
    },
}
