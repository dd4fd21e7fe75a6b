"""
Django settings for the ellipsoid_forge project.

The project hosts the convex-geometry library as the ``apps.convex`` app and
exposes its command-line surface as management commands. There is no web
surface and no database.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

from pathlib import Path
import environ

env = environ.Env()
environ.Env.read_env()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Only used by Django internals; nothing is signed.
SECRET_KEY = env('SECRET_KEY', default='ellipsoid-forge-cli')

DEBUG = env.bool('DEBUG', default=False)

ALLOWED_HOSTS = env.list('ALLOWED_HOSTS', default=[])


# Application definition

INSTALLED_APPS = [
    'apps.common',
    'apps.convex',
]

DATABASES = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# ELLIPSOID FORGE SETTINGS

# Default tolerance profile: "default", "strict" or "loose"
FORGE_TOLERANCE_PROFILE = env('FORGE_TOLERANCE_PROFILE', default='default')

# Single-gate overrides, e.g. FORGE_TOLERANCE_OVERRIDES=ellipse=1e-5,planarity=1e-7
FORGE_TOLERANCES = env.dict('FORGE_TOLERANCE_OVERRIDES', cast={'value': float}, default={})

FORGE_SEED = env.int('FORGE_SEED', default=20240521)
FORGE_CURVE_SAMPLES = env.int('FORGE_CURVE_SAMPLES', default=64)
# Smallest curve forge_sample will export
FORGE_MIN_CURVE_SAMPLES = env.int('FORGE_MIN_CURVE_SAMPLES', default=64)
FORGE_DIRECTIONS = env.int('FORGE_DIRECTIONS', default=512)
FORGE_DIAMETERS = env.int('FORGE_DIAMETERS', default=128)
FORGE_SLAB_PLANES = env.int('FORGE_SLAB_PLANES', default=7)

# Apex/plane samples are processed by this many threads (1 = serial)
FORGE_WORKERS = env.int('FORGE_WORKERS', default=1)

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,

    'formatters': {
        'simple': {
            'format': '%(levelname)s - %(asctime)s - %(name)s - %(message)s'
        },
    },

    'handlers': {
        'debug_log': {
            'level': 'DEBUG',
            'class': 'logging.FileHandler',
            'filename': env('FORGE_LOG_FILE', default=str(BASE_DIR / 'debug.log')),
            'formatter': 'simple',
        },

        'console': {
            'level': 'WARNING',
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },

    'loggers': {
        # Project app loggers (captures modules under 'apps.*')
        'apps': {
            'handlers': ['debug_log'],
            'propagate': True,
            'level': env('LOG_LEVEL', default='INFO'),
        },

        # Central error logger used across management commands
        'app_errors': {
            'handlers': ['debug_log', 'console'],
            'propagate': False,
            'level': 'ERROR',
        },
    },
}
