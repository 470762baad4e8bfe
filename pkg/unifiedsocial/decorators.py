from functools import wraps

from django.core.management.base import CommandError
from django.db import DatabaseError

from unifiedsocial.log import scrub

EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def command_errors(subcommand):
    """
    Wraps a management command's handle() so every failure surfaces as a CommandError carrying the
    subcommand name: validation problems exit with 1, runtime failures with 2.
    """
    def decorator(function):
        @wraps(function)
        def wrap(*args, **kwargs):
            # Imported here so unifiedsocial stays importable before apps are loaded
            from socialData.exceptions import ValidationFailure, RuntimeFailure
            try:
                return function(*args, **kwargs)
            except CommandError:
                raise
            except ValidationFailure as e:
                raise CommandError(scrub(f'{subcommand}: {e}'), returncode=EXIT_VALIDATION)
            except (RuntimeFailure, DatabaseError, OSError) as e:
                raise CommandError(scrub(f'{subcommand}: {e}'), returncode=EXIT_RUNTIME)
        return wrap
    return decorator
