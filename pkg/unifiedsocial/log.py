import logging
import threading

SCRUBBED = '***'

_secrets = set()
_secrets_lock = threading.Lock()


def register_secret(value):
    # Too-short values would blank out ordinary words in messages
    if value and len(value) >= 4:
        with _secrets_lock:
            _secrets.add(value)


def forget_secret(value):
    with _secrets_lock:
        _secrets.discard(value)


def scrub(text):
    with _secrets_lock:
        secrets = sorted(_secrets, key=len, reverse=True)
    for secret in secrets:
        text = text.replace(secret, SCRUBBED)
    return text


class SecretScrubFilter(logging.Filter):
    """Replaces registered secrets (pepper, api keys) in the rendered message and exception text."""

    def filter(self, record):
        message = record.getMessage()
        scrubbed = scrub(message)
        if scrubbed != message:
            record.msg = scrubbed
            record.args = None

        if record.exc_info and not record.exc_text:
            record.exc_text = logging.Formatter().formatException(record.exc_info)
        if record.exc_text:
            record.exc_text = scrub(record.exc_text)
        return True
