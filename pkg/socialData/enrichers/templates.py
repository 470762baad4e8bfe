import datetime
import json
import string

from unifiedsocial.utils import format_timestamp
from socialData.exceptions import ConfigError, UnknownPlaceholder

FORMATTER = string.Formatter()


def parse_template(template):
    try:
        return list(FORMATTER.parse(template))
    except ValueError as e:
        raise ConfigError(f'Malformed template: {e}')


def placeholders(template):
    names = []
    for _, name, format_spec, conversion in parse_template(template):
        if name is None:
            continue
        if format_spec or conversion:
            raise ConfigError(f'Placeholder "{{{name}}}" may not carry a conversion or format spec')
        names.append(name)
    return names


def check_template(template, fields):
    for name in placeholders(template):
        if name not in fields:
            raise UnknownPlaceholder(name)


def _text(value):
    if value is None:
        return ''
    if isinstance(value, datetime.datetime):
        return format_timestamp(value)
    if isinstance(value, (dict, list)):
        return json.dumps(value, ensure_ascii=False)
    return str(value)


def render_prompt(template, record):
    """
    Fills {field} placeholders from record (a schema record or a dict). None renders as an empty
    string and "{{"/"}}" stand for literal braces.
    """
    if isinstance(record, dict):
        fields = record
        get = record.get
    else:
        fields = record.schema_fields()
        get = lambda name: getattr(record, name)  # noqa: E731
    parts = []
    for literal, name, format_spec, conversion in parse_template(template):
        parts.append(literal)
        if name is None:
            continue
        if name not in fields or format_spec or conversion:
            raise UnknownPlaceholder(name)
        parts.append(_text(get(name)))
    return ''.join(parts)
