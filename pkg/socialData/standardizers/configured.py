from unifiedsocial.utils import dig
from .base import Standardizer


def set_path(data, path, value):
    keys = path.split('.')
    for key in keys[:-1]:
        child = data.get(key)
        if not isinstance(child, dict):
            child = {}
            data[key] = child
        data = child
    data[keys[-1]] = value


class FieldMappedStandardizer(Standardizer):
    """
    An adapter declared in the config file: raw records are renamed through field_map (the built-in
    adapter's dotted key -> source column or dotted key) and handed to a built-in adapter.
    """

    def __init__(self, name, base, accepted_format, platform='', field_map=None):
        self.name = name
        self.base = base
        self.accepted_format = accepted_format
        self.platform = platform or base.platform
        self.field_map = dict(field_map or {})

    def remap(self, raw):
        # CSV has no nulls, only empty cells
        mapped = {key: (None if value == '' else value) for key, value in raw.items()}
        for target, source in self.field_map.items():
            value = raw[source] if source in raw else dig(raw, source)
            set_path(mapped, target, None if value == '' else value)
        return mapped

    def standardize(self, raw, info):
        return self.base.standardize(self.remap(raw), info)
