import csv
import json
from abc import ABC, abstractmethod
from dataclasses import dataclass
from datetime import datetime
from typing import Callable, NamedTuple, Optional

from unifiedsocial import constants as CONS
from unifiedsocial.utils import dig, parse_count, parse_timestamp
from socialData.exceptions import (ConfigError, DuplicateAdapter, InvariantViolation, MalformedRecord,
                                   UnknownAdapter)
from socialData.models import Entity
from .entities import extract_entities


@dataclass(frozen=True)
class SourceInfo:
    """Where a raw record came from."""
    dataset_name: str
    platform: str
    file_path: str
    record_index: int
    default_retrieved_at: Optional[datetime] = None

    def __post_init__(self):
        if not self.dataset_name or not self.file_path:
            raise ConfigError('SourceInfo needs a dataset_name and a file_path')
        if self.record_index < 0:
            raise ConfigError(f'record_index must be >= 0, got {self.record_index}')


class AdapterDescriptor(NamedTuple):
    """A plain mapping function registered as an adapter."""
    name: str
    accepted_format: str
    mapping: Callable
    platform: str = ''


class Standardizer(ABC):
    """
    Maps one raw platform record into unified-schema records. Subclasses only have to implement
    standardize(); the helpers below cover the parsing every platform needs.
    """
    name = None
    accepted_format = CONS.FORMAT_JSONL
    platform = ''

    @abstractmethod
    def standardize(self, raw, info):
        """Returns a list of unsaved schema records built from raw."""

    def retrieved_at(self, raw_value, info):
        value = as_timestamp(raw_value) if raw_value not in (None, '') else info.default_retrieved_at
        if value is None:
            raise MalformedRecord('record has no retrieved_at and no default was given')
        return value

    def required(self, raw, path):
        value = dig(raw, path)
        if value is None or value == '':
            raise MalformedRecord(f'missing required field "{path}"')
        return value

    def entities(self, post_id, text, created_at, retrieved_at, media_keys=None):
        records = [Entity(post_id=post_id, body=body, entity_type=entity_type,
                          created_at=created_at, retrieved_at=retrieved_at)
                   for entity_type, body in extract_entities(text)]
        for key in media_keys or []:
            if key not in (None, ''):
                records.append(Entity(post_id=post_id, body=str(key), entity_type=CONS.ENTITY_MEDIA_KEY,
                                      created_at=created_at, retrieved_at=retrieved_at))
        return records

    def read(self, path):
        """Yields (index, raw record or None, problem or None) for each non-blank input record."""
        if self.accepted_format == CONS.FORMAT_CSV:
            yield from read_csv(path)
        else:
            yield from read_jsonl(path)

    def __repr__(self):
        return f'<{type(self).__name__} {self.name}>'


class MappingStandardizer(Standardizer):
    def __init__(self, descriptor):
        self.name = descriptor.name
        self.accepted_format = descriptor.accepted_format
        self.platform = descriptor.platform
        self.mapping = descriptor.mapping

    def standardize(self, raw, info):
        return list(self.mapping(raw, info))


def as_id(value):
    if value is None or value == '':
        return None
    if isinstance(value, bool) or isinstance(value, (dict, list)):
        raise MalformedRecord(f'not an id: {value!r}')
    return str(value)


def as_count(value):
    try:
        return parse_count(value)
    except ValueError as e:
        raise MalformedRecord(str(e))


def as_timestamp(value):
    try:
        return parse_timestamp(value)
    except (ValueError, OverflowError) as e:
        raise MalformedRecord(f'bad timestamp {value!r}: {e}')


def as_bool(value):
    if value is None or value == '':
        return None
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ('true', '1', 'yes', 't', 'y'):
        return True
    if text in ('false', '0', 'no', 'f', 'n'):
        return False
    raise MalformedRecord(f'not a boolean: {value!r}')


def read_jsonl(path):
    with open(path, encoding='utf-8') as source:
        for index, line in enumerate(source):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as e:
                yield index, None, f'invalid JSON: {e.msg}'
                continue
            if not isinstance(raw, dict):
                yield index, None, f'expected a JSON object, got {type(raw).__name__}'
                continue
            yield index, raw, None


def read_csv(path):
    with open(path, encoding='utf-8', newline='') as source:
        reader = csv.DictReader(source)
        for index, row in enumerate(reader):
            # DictReader files surplus cells under None and pads short rows with None
            if None in row:
                yield index, None, 'row has more cells than the header'
            elif None in row.values():
                yield index, None, 'row has fewer cells than the header'
            else:
                yield index, row, None


def standardize_record(adapter, raw, info):
    """
    Runs one raw record through adapter and validates what comes out. Unparseable input raises
    MalformedRecord; records that break schema invariants raise InvariantViolation naming the adapter.
    """
    try:
        records = list(adapter.standardize(raw, info))
    except (MalformedRecord, InvariantViolation):
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise MalformedRecord(f'{type(e).__name__}: {e}')
    for index, record in enumerate(records):
        try:
            record.validate(index)
        except InvariantViolation as e:
            raise InvariantViolation(e.table, e.index, e.reason, adapter=adapter.name)
    return records


class StandardizerRegistry:
    def __init__(self):
        self._adapters = {}

    def register(self, adapter):
        if isinstance(adapter, AdapterDescriptor):
            adapter = MappingStandardizer(adapter)
        if not adapter.name:
            raise ConfigError(f'{adapter!r} has no name')
        if adapter.name in self._adapters:
            raise DuplicateAdapter(f'An adapter named "{adapter.name}" is already registered')
        if adapter.accepted_format not in CONS.FORMAT_VALUES:
            raise ConfigError(f'Adapter "{adapter.name}" has unknown format "{adapter.accepted_format}"')
        self._adapters[adapter.name] = adapter
        return adapter

    def get(self, name):
        try:
            return self._adapters[name]
        except KeyError:
            raise UnknownAdapter(f'No adapter named "{name}"; registered: {", ".join(self.names())}')

    def names(self):
        return list(self._adapters)

    def __contains__(self, name):
        return name in self._adapters


def register_adapter(registry, descriptor):
    return registry.register(descriptor)
