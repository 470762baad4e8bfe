"""
Field availability profiling: which schema fields a store actually fills, and how often.
"""
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional

from django.db import DatabaseError
from django.db.models import Count, Max, Min

from unifiedsocial import constants as CONS
from unifiedsocial.utils import format_timestamp
from socialData.exceptions import ConfigError, StoreError, UnknownTable
from socialData.store import get_model

logger = logging.getLogger(__name__)

GLYPHS = {
    CONS.AVAILABLE: CONS.AVAILABLE_GLYPH,
    CONS.ABSENT: CONS.ABSENT_GLYPH,
}
FIELD_COLUMN_TITLE = 'field'
MISSING_CELL = 'n/a'


@dataclass
class FieldStats:
    non_null_count: int
    row_count: int
    null_rate: float
    distinct_count: int
    min_timestamp: Optional[datetime] = None
    max_timestamp: Optional[datetime] = None

    @property
    def availability(self):
        # Any non-null row counts as evidence; an empty table has none
        return CONS.AVAILABLE if self.non_null_count > 0 else CONS.ABSENT

    def to_dict(self):
        return {
            'non_null_count': self.non_null_count,
            'row_count': self.row_count,
            'null_rate': self.null_rate,
            'distinct_count': self.distinct_count,
            'min_timestamp': format_timestamp(self.min_timestamp),
            'max_timestamp': format_timestamp(self.max_timestamp),
        }


@dataclass
class SchemaReport:
    store_name: str
    tables: dict = field(default_factory=dict)

    @property
    def availability(self):
        return {table: {name: stats.availability for name, stats in fields.items()}
                for table, fields in self.tables.items()}

    def to_dict(self):
        return {
            'store_name': self.store_name,
            'tables': {table: {name: stats.to_dict() for name, stats in fields.items()}
                       for table, fields in self.tables.items()},
            'availability': self.availability,
        }


def table_stats(store, table):
    """Exact per-field counts for one table, computed in a single aggregate query."""
    model = get_model(table)
    fields = model.schema_fields()
    aggregates = {'row_count': Count('pk')}
    for i, name in enumerate(fields):
        aggregates[f'non_null_{i}'] = Count(name)
        aggregates[f'distinct_{i}'] = Count(name, distinct=True)
        if name in model.TIMESTAMP_FIELDS:
            aggregates[f'min_{i}'] = Min(name)
            aggregates[f'max_{i}'] = Max(name)
    try:
        values = model.objects.using(store.alias).aggregate(**aggregates)
    except DatabaseError as e:
        raise StoreError(f'Profiling {table} in "{store.name}" failed: {e}') from e

    rows = values['row_count']
    stats = {}
    for i, name in enumerate(fields):
        non_null = values[f'non_null_{i}']
        stats[name] = FieldStats(
            non_null_count=non_null,
            row_count=rows,
            null_rate=(rows - non_null) / rows if rows else 0.0,
            distinct_count=values[f'distinct_{i}'],
            min_timestamp=values.get(f'min_{i}'),
            max_timestamp=values.get(f'max_{i}'),
        )
    return stats


def check_tables(tables):
    if tables is None:
        return list(CONS.SCHEMA_TABLES)
    for table in tables:
        if table not in CONS.SCHEMA_TABLES:
            raise UnknownTable(table)
    return [table for table in CONS.SCHEMA_TABLES if table in tables]


class Inspector:
    def __init__(self, store):
        self.store = store

    def table_stats(self, table):
        return table_stats(self.store, table)

    def report(self, only_tables=None):
        report = SchemaReport(self.store.name)
        for table in check_tables(only_tables):
            report.tables[table] = self.table_stats(table)
        logger.info('Profiled %s tables of %s', len(report.tables), self.store.name)
        return report


def report_schemas(reports, only_tables=None):
    """
    Renders reports side by side: one row per schema field grouped under its table, one column per
    store in the order given. Cells read "+ 123" (available, non-null count) or "- 0" (absent).
    """
    if not reports:
        raise ConfigError('At least one report is needed')
    tables = check_tables(only_tables)

    rows = []
    for table in tables:
        rows.append((table, None))
        for name in get_model(table).schema_fields():
            cells = []
            for report in reports:
                stats = report.tables.get(table, {}).get(name)
                cells.append(MISSING_CELL if stats is None else f'{GLYPHS[stats.availability]} {stats.non_null_count}')
            rows.append((f'  {name}', cells))

    label_width = max([len(FIELD_COLUMN_TITLE)] + [len(label) for label, _ in rows])
    widths = []
    for i, report in enumerate(reports):
        cell_widths = [len(cells[i]) for _, cells in rows if cells is not None]
        widths.append(max([len(report.store_name)] + cell_widths))

    def line(label, cells):
        parts = [label.ljust(label_width)] + [cell.ljust(width) for cell, width in zip(cells, widths)]
        return ' | '.join(parts).rstrip()

    lines = [
        line(FIELD_COLUMN_TITLE, [report.store_name for report in reports]),
        '-+-'.join('-' * width for width in [label_width] + widths),
    ]
    for label, cells in rows:
        lines.append(label if cells is None else line(label, cells))
    return '\n'.join(lines) + '\n'


def export_reports_json(reports, path):
    with open(path, 'w', encoding='utf-8') as output:
        json.dump({'stores': [report.to_dict() for report in reports]}, output, indent=2, ensure_ascii=False)
        output.write('\n')
