import datetime
import re

from dateutil import parser as date_parser

DURATION_UNITS = {
    's': 'seconds',
    'm': 'minutes',
    'h': 'hours',
    'd': 'days',
}
DURATION_RE = re.compile(r'^(?:\d+[smhd])+$')
DURATION_PART_RE = re.compile(r'(\d+)([smhd])')

COUNT_SUFFIXES = {
    'K': 1_000,
    'M': 1_000_000,
    'B': 1_000_000_000,
}
COUNT_RE = re.compile(r'^(\d+(?:\.\d+)?)([KMB])?$')


def listToChoices(inputs):
    return [(x, x) for x in inputs]


def to_utc(value):
    # Naive datetimes are taken to be UTC already
    if value.tzinfo is None:
        return value.replace(tzinfo=datetime.timezone.utc)
    return value.astimezone(datetime.timezone.utc)


def format_timestamp(value):
    if value is None:
        return None
    return to_utc(value).isoformat().replace('+00:00', 'Z')


def parse_timestamp(value):
    """
    Accepts ISO-8601 strings, epoch seconds (int, float or numeric string) and datetimes.
    Always returns an aware UTC datetime, or None for empty input.
    """
    if value is None or value == '':
        return None
    if isinstance(value, datetime.datetime):
        return to_utc(value)
    if isinstance(value, bool):
        raise ValueError(f'Not a timestamp: {value!r}')
    if isinstance(value, (int, float)):
        return datetime.datetime.fromtimestamp(value, tz=datetime.timezone.utc)
    text = str(value).strip()
    if re.fullmatch(r'\d+(\.\d+)?', text):
        return datetime.datetime.fromtimestamp(float(text), tz=datetime.timezone.utc)
    try:
        return to_utc(date_parser.isoparse(text))
    except ValueError:
        return to_utc(date_parser.parse(text))


def parse_duration(text):
    """'90m', '1h', '1d', '1h30m' -> timedelta"""
    text = str(text).strip().lower()
    if not DURATION_RE.match(text):
        raise ValueError(f'Invalid duration "{text}", expected e.g. 90m, 1h or 1d')
    kwargs = {}
    for amount, unit in DURATION_PART_RE.findall(text):
        name = DURATION_UNITS[unit]
        kwargs[name] = kwargs.get(name, 0) + int(amount)
    return datetime.timedelta(**kwargs)


def parse_count(value):
    """
    Normalizes engagement counts scraped as text: 1234, "1,234", "3.4K", "2M".
    Empty values give None. Anything else raises ValueError.
    """
    if value is None or value == '':
        return None
    if isinstance(value, bool):
        raise ValueError(f'Not a count: {value!r}')
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not value.is_integer():
            raise ValueError(f'Not a count: {value!r}')
        return int(value)
    text = str(value).strip().replace(',', '').replace(' ', '').upper()
    match = COUNT_RE.match(text)
    if not match:
        raise ValueError(f'Not a count: {value!r}')
    number, suffix = match.groups()
    multiplier = COUNT_SUFFIXES[suffix] if suffix else 1
    # Round rather than truncate so "3.4K" is 3400 and not 3399
    return int(round(float(number) * multiplier))


def dig(data, path):
    """Follows a dotted key path ('user.id') through nested dicts. Missing keys give None."""
    current = data
    for key in path.split('.'):
        if not isinstance(current, dict):
            return None
        current = current.get(key)
        if current is None:
            return None
    return current
