import logging
from contextlib import nullcontext
from dataclasses import dataclass, field
from itertools import islice
from pathlib import Path
from typing import NamedTuple

from django.conf import settings
from django.utils import timezone
from joblib import Parallel, delayed

from socialData.exceptions import IngestionAborted, InvariantViolation, MalformedRecord
from socialData.store import InsertReport, insert_batch
from .base import SourceInfo, standardize_record
from .registry import default_registry

logger = logging.getLogger(__name__)

# record_index used when a file could not be read
WHOLE_FILE = -1


class Failure(NamedTuple):
    file_path: str
    record_index: int
    reason: str


@dataclass
class IngestReport:
    files_processed: int = 0
    records_read: int = 0
    # Bad records plus files that could not be read, each of those counting once
    records_failed: int = 0
    failures: list = field(default_factory=list)
    insert_report: InsertReport = field(default_factory=InsertReport)

    def to_dict(self):
        return {
            'files_processed': self.files_processed,
            'records_read': self.records_read,
            'records_failed': self.records_failed,
            'failures': [failure._asdict() for failure in self.failures],
            'insert_report': self.insert_report.to_dict(),
        }


def standardize_one(adapter, info, raw, problem):
    """(records, None) for a good raw record, (None, reason) for a bad one."""
    if problem is not None:
        return None, problem
    try:
        return standardize_record(adapter, raw, info), None
    except (MalformedRecord, InvariantViolation) as e:
        return None, str(e)


def standardize_file(adapter, path, dataset_name, default_retrieved_at, chunk_size, parallel=None):
    """
    Yields (index, records, problem) while path is read, at most chunk_size raw records ahead of the
    consumer. With a joblib Parallel the records of each chunk are standardized on its workers.
    """
    lines = adapter.read(path)
    while True:
        chunk = list(islice(lines, chunk_size))
        if not chunk:
            return
        jobs = []
        for index, raw, problem in chunk:
            info = SourceInfo(dataset_name, adapter.platform, path, index, default_retrieved_at) \
                if problem is None else None
            jobs.append((adapter, info, raw, problem))
        if parallel is None:
            results = [standardize_one(*job) for job in jobs]
        else:
            results = parallel(delayed(standardize_one)(*job) for job in jobs)
        for (index, _, _), (records, problem) in zip(chunk, results):
            yield index, records, problem


def run_ingestion(store, adapter_name, sources, fail_fast=False, default_retrieved_at=None,
                  dataset_name=None, registry=None, n_jobs=1):
    """
    Standardizes every record of every source file with the named adapter and inserts the results every
    INGEST_CHUNK_SIZE records, so a file is never held in memory as a whole. Bad records and unreadable
    files are collected in the report with their file and index; with fail_fast the first one raises
    IngestionAborted instead, leaving chunks inserted before it in place. n_jobs threads share the
    standardization of each chunk, inserts always go through the store one batch at a time.
    """
    adapter = (registry or default_registry()).get(adapter_name)
    # One timestamp per run keeps a run's snapshots consistent with each other
    if default_retrieved_at is None:
        default_retrieved_at = timezone.now().replace(microsecond=0)
    dataset_name = dataset_name or store.name
    chunk_size = settings.INGEST_CHUNK_SIZE
    sources = [str(Path(source)) for source in sources]

    report = IngestReport()
    pool = Parallel(n_jobs=n_jobs, prefer='threads') if n_jobs != 1 else nullcontext()
    with pool as parallel:
        for path in sources:
            read = failed = 0
            pending = []
            try:
                for index, records, problem in standardize_file(adapter, path, dataset_name, default_retrieved_at,
                                                                chunk_size, parallel):
                    read += 1
                    if problem is not None:
                        failure = Failure(path, index, problem)
                        if fail_fast:
                            raise IngestionAborted(*failure)
                        logger.warning('%s:%s rejected: %s', path, index, problem)
                        report.failures.append(failure)
                        failed += 1
                        continue
                    pending.extend(records)
                    if len(pending) >= chunk_size:
                        report.insert_report.merge(insert_batch(store, pending, validate=False))
                        pending = []
            except (OSError, UnicodeDecodeError) as e:
                failure = Failure(path, WHOLE_FILE, f'unreadable file: {e}')
                if fail_fast:
                    raise IngestionAborted(*failure)
                logger.warning('Skipping rest of %s: %s', path, failure.reason)
                report.failures.append(failure)
                failed += 1
            else:
                report.files_processed += 1

            if pending:
                report.insert_report.merge(insert_batch(store, pending, validate=False))
            report.records_read += read
            report.records_failed += failed
            logger.info('Ingested %s (%s records, %s failed) into %s', path, read, failed, store.name)
    return report
