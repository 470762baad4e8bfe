"""
Dataset stores. Each store is one SQLite file under settings.SMDT_STORES_DIR holding the seven
schema tables, registered with Django as an extra database alias while it is open.
"""
import json
import logging
import re
import threading
from dataclasses import dataclass, field
from functools import wraps
from pathlib import Path
from typing import NamedTuple, Optional

from django.conf import settings
from django.core.management import call_command
from django.db import DatabaseError, connections, transaction

from unifiedsocial import constants as CONS
from unifiedsocial.utils import parse_timestamp
from socialData.exceptions import (ConfigError, InvalidStoreName, InvariantViolation, MalformedRange,
                                   StoreError, StoreExistsError, StoreMissingError, UnknownField,
                                   UnknownTable)
from socialData.models import TABLE_MODELS, StandardRecord

logger = logging.getLogger(__name__)

STORE_NAME_RE = re.compile(r'^[A-Za-z0-9_][A-Za-z0-9_.-]*$')
STORE_SUFFIX = '.sqlite3'
INCOMPLETE_SUFFIX = '.incomplete'
SQLITE_SIDE_FILES = ['-wal', '-shm', '-journal']
# Kept under SQLite's bound-variable limit
LOOKUP_CHUNK = 500

_handles = {}
_handles_lock = threading.Lock()


def storage_errors(function):
    @wraps(function)
    def wrap(*args, **kwargs):
        try:
            return function(*args, **kwargs)
        except DatabaseError as e:
            raise StoreError(f'Storage failure in {function.__name__}: {e}') from e
    return wrap


class StoreHandle:
    def __init__(self, name, path):
        self.name = name
        self.path = Path(path)
        self.alias = f'store_{name}'
        # Single writer per store, shared by every handle with the same name
        self.lock = threading.RLock()
        # Open references; the alias is dropped when the last one is closed
        self.refs = 0

    def objects(self, table):
        return get_model(table).objects.using(self.alias)

    def __repr__(self):
        return f'<StoreHandle {self.name} at {self.path}>'


@dataclass
class TableCounts:
    received: int = 0
    inserted: int = 0
    deduplicated: int = 0

    def add(self, other):
        self.received += other.received
        self.inserted += other.inserted
        self.deduplicated += other.deduplicated


@dataclass
class InsertReport:
    tables: dict = field(default_factory=lambda: {table: TableCounts() for table in CONS.SCHEMA_TABLES})

    def record(self, table, received, inserted):
        self.tables[table].add(TableCounts(received, inserted, received - inserted))

    def merge(self, other):
        for table, counts in other.tables.items():
            self.tables[table].add(counts)
        return self

    @property
    def inserted(self):
        return sum(counts.inserted for counts in self.tables.values())

    @property
    def received(self):
        return sum(counts.received for counts in self.tables.values())

    def to_dict(self):
        return {table: {'received': counts.received, 'inserted': counts.inserted,
                        'deduplicated': counts.deduplicated}
                for table, counts in self.tables.items()}


class TimeRange(NamedTuple):
    """Half-open [start, end). Either end may be None for an unbounded side."""
    start: Optional[object] = None
    end: Optional[object] = None


def get_model(table):
    try:
        return TABLE_MODELS[table]
    except (KeyError, TypeError):
        raise UnknownTable(table)


def check_store_name(name):
    if not isinstance(name, str) or not STORE_NAME_RE.match(name):
        raise InvalidStoreName(f'Invalid store name "{name}": use letters, digits, "_", "-" and "."')


def stores_dir():
    return Path(settings.SMDT_STORES_DIR)


def store_path(name):
    check_store_name(name)
    return stores_dir() / f'{name}{STORE_SUFFIX}'


def store_exists(name):
    return store_path(name).exists()


def list_stores():
    directory = stores_dir()
    if not directory.exists():
        return []
    return sorted(path.name[:-len(STORE_SUFFIX)] for path in directory.glob(f'*{STORE_SUFFIX}'))


def _database_settings(path):
    # Registered after start-up, so Django won't fill in defaults for us
    return {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': str(path),
        'ATOMIC_REQUESTS': False,
        'AUTOCOMMIT': True,
        'CONN_MAX_AGE': 0,
        'CONN_HEALTH_CHECKS': False,
        'OPTIONS': {},
        'TIME_ZONE': None,
        'USER': '',
        'PASSWORD': '',
        'HOST': '',
        'PORT': '',
        'TEST': {
            'CHARSET': None,
            'COLLATION': None,
            'MIGRATE': True,
            'MIRROR': None,
            'NAME': None,
        },
    }


def _register(name):
    path = store_path(name)
    with _handles_lock:
        handle = _handles.get(name)
        if handle is None:
            handle = StoreHandle(name, path)
            connections.databases[handle.alias] = _database_settings(path)
            _handles[name] = handle
        handle.refs += 1
    return handle


def _drop(handle):
    _handles.pop(handle.name, None)
    connections[handle.alias].close()
    del connections[handle.alias]
    connections.databases.pop(handle.alias, None)


def _disconnect(name):
    with _handles_lock:
        handle = _handles.get(name)
        if handle is not None:
            connections[handle.alias].close()


def close_store(store):
    """Releases one open_store/init_store reference; the alias goes away with the last one."""
    name = store.name if isinstance(store, StoreHandle) else store
    with _handles_lock:
        handle = _handles.get(name)
        if handle is None:
            return
        handle.refs -= 1
        if handle.refs <= 0:
            _drop(handle)


def close_all_stores():
    with _handles_lock:
        for handle in list(_handles.values()):
            _drop(handle)


@storage_errors
def init_store(name, overwrite=False, require_empty=False):
    """
    Creates (or opens) the store called name with all seven tables in place. overwrite throws the
    existing file away first; require_empty refuses to hand back a store that already holds rows.
    """
    path = store_path(name)
    if overwrite:
        _disconnect(name)
        for candidate in [path] + [Path(f'{path}{suffix}') for suffix in SQLITE_SIDE_FILES]:
            if candidate.exists():
                candidate.unlink()
        clear_incomplete(name)
        logger.info('Cleared store %s', name)
    path.parent.mkdir(parents=True, exist_ok=True)

    handle = _register(name)
    with handle.lock:
        call_command('migrate', 'socialData', database=handle.alias, verbosity=0, interactive=False)

    if require_empty:
        populated = [table for table in CONS.SCHEMA_TABLES if handle.objects(table).exists()]
        if populated:
            close_store(handle)
            raise StoreExistsError(f'Store "{name}" already holds data in {", ".join(populated)}')
    return handle


def open_store(name):
    if not store_exists(name):
        raise StoreMissingError(f'Store "{name}" does not exist in {stores_dir()}')
    return _register(name)


def _existing_keys(store, model, lookups):
    keys = set()
    lookups = list(lookups)
    for i in range(0, len(lookups), LOOKUP_CHUNK):
        chunk = lookups[i:i + LOOKUP_CHUNK]
        queryset = model.objects.using(store.alias).filter(**{f'{model.DEDUP_LOOKUP_FIELD}__in': chunk})
        keys.update(queryset.values_list(*model.DEDUP_FIELDS))
    return keys


def insert_batch(store, records, validate=True):
    """
    Validates and stores records, skipping any whose dedup key is already in the store or earlier in
    the same batch (first one wins). The batch commits as a whole or not at all.
    """
    report = InsertReport()
    grouped = {}
    for index, record in enumerate(records):
        if not isinstance(record, StandardRecord):
            raise InvariantViolation(type(record).__name__, index, 'not a schema record')
        if validate:
            record.validate(index)
        grouped.setdefault(record.TABLE, []).append(record)

    with store.lock:
        try:
            with transaction.atomic(using=store.alias):
                for table in CONS.SCHEMA_TABLES:
                    batch = grouped.get(table)
                    if not batch:
                        continue
                    model = get_model(table)
                    seen = _existing_keys(store, model, {getattr(r, model.DEDUP_LOOKUP_FIELD) for r in batch})
                    fresh = []
                    for record in batch:
                        key = record.dedup_key()
                        if key in seen:
                            continue
                        seen.add(key)
                        fresh.append(record)
                    if fresh:
                        model.objects.using(store.alias).bulk_create(fresh)
                    report.record(table, len(batch), len(fresh))
        except DatabaseError as e:
            raise StoreError(f'Batch insert into "{store.name}" failed, nothing was written: {e}') from e

    logger.debug('Inserted %s of %s records into %s', report.inserted, report.received, store.name)
    return report


def _filter_kwargs(model, filter):
    kwargs = {}
    fields = set(model.schema_fields())
    for name, value in (filter or {}).items():
        if name not in fields:
            raise UnknownField(model.TABLE, name)
        if isinstance(value, TimeRange):
            if name not in model.TIMESTAMP_FIELDS:
                raise MalformedRange(f'{model.TABLE}.{name} is not a timestamp field')
            if value.start is not None and value.end is not None and value.start > value.end:
                raise MalformedRange(f'Range start {value.start} is after its end {value.end}')
            if value.start is not None:
                kwargs[f'{name}__gte'] = value.start
            if value.end is not None:
                kwargs[f'{name}__lt'] = value.end
        elif isinstance(value, (list, tuple, set, frozenset)):
            kwargs[f'{name}__in'] = list(value)
        elif value is None:
            kwargs[f'{name}__isnull'] = True
        else:
            kwargs[name] = value
    return kwargs


def select(store, table, filter=None):
    """The lazy QuerySet behind query(); filters validated the same way."""
    model = get_model(table)
    return model.objects.using(store.alias).filter(**_filter_kwargs(model, filter)).order_by('pk')


@storage_errors
def query(store, table, filter=None):
    """
    Rows of table matching every clause of filter, in primary key order. filter maps a field name to
    a value (equality), a list or set (membership), None (is null) or a TimeRange (start <= t < end).
    """
    return list(select(store, table, filter))


@storage_errors
def count(store, table, filter=None):
    return select(store, table, filter).count()


@storage_errors
def delete_rows(store, table, filter=None):
    with store.lock:
        with transaction.atomic(using=store.alias):
            deleted, _ = select(store, table, filter).delete()
    return deleted


def iter_rows(store, table, chunk_rows, filter=None):
    """Yields lists of at most chunk_rows records in primary key order."""
    queryset = select(store, table, filter)
    last_pk = 0
    while True:
        try:
            chunk = list(queryset.filter(pk__gt=last_pk)[:chunk_rows])
        except DatabaseError as e:
            raise StoreError(f'Reading {table} from "{store.name}" failed: {e}') from e
        if not chunk:
            return
        yield chunk
        last_pk = chunk[-1].pk


def export_json(store, table, path):
    """Writes table as JSON Lines in schema field order. Returns the number of lines written."""
    get_model(table)
    written = 0
    with open(path, 'w', encoding='utf-8', newline='\n') as output:
        for chunk in iter_rows(store, table, settings.INGEST_CHUNK_SIZE):
            for record in chunk:
                output.write(json.dumps(record.to_json_dict(), ensure_ascii=False))
                output.write('\n')
                written += 1
    logger.info('Exported %s %s rows from %s to %s', written, table, store.name, path)
    return written


def parse_filter_spec(table, spec):
    """
    Turns a config-file filter section into a query filter. Scalars mean equality, lists membership,
    and {from: ..., to: ...} a half-open timestamp range.
    """
    model = get_model(table)
    if spec is None:
        return {}
    if not isinstance(spec, dict):
        raise ConfigError(f'Filter for {table} must be a mapping of field names')
    result = {}
    for name, value in spec.items():
        if name not in model.schema_fields():
            raise UnknownField(table, name)
        if isinstance(value, dict):
            unknown = set(value) - {'from', 'to'}
            if unknown:
                raise ConfigError(f'Unknown range keys for {table}.{name}: {sorted(unknown)}')
            try:
                result[name] = TimeRange(parse_timestamp(value.get('from')), parse_timestamp(value.get('to')))
            except (ValueError, OverflowError) as e:
                raise MalformedRange(f'Bad timestamp in range for {table}.{name}: {e}')
        else:
            result[name] = value
    _filter_kwargs(model, result)
    return result


def incomplete_marker(name):
    return stores_dir() / f'{name}{INCOMPLETE_SUFFIX}'


def mark_incomplete(name, reason=''):
    marker = incomplete_marker(name)
    marker.parent.mkdir(parents=True, exist_ok=True)
    marker.write_text(reason, encoding='utf-8')


def clear_incomplete(name):
    marker = incomplete_marker(name)
    if marker.exists():
        marker.unlink()


def is_incomplete(name):
    return incomplete_marker(name).exists()
