from unifiedsocial.decorators import command_errors
from socialData.management.base import ReportCommand
from socialData.standardizers import run_ingestion
from socialData.store import close_store, init_store

MAX_FAILURES_SHOWN = 20


class Command(ReportCommand):
    help = 'Standardizes raw platform files with an adapter and inserts the records into a store'

    def add_arguments(self, parser):
        parser.add_argument('files', nargs='+', type=str, help='input files')
        parser.add_argument('--store', type=str, required=True, help='store to insert into, created if missing')
        parser.add_argument('--adapter', type=str, required=True,
                            help='a built-in adapter or one declared under adapters in the config')
        self.add_config_argument(parser)
        parser.add_argument('--retrieved-at', type=str, default=None,
                            help='retrieved_at for records without one; pins the default, meant for tests')
        parser.add_argument('--dataset', type=str, default=None, help='dataset name (defaults to the store name)')
        parser.add_argument('--fail-fast', action='store_true', help='stop at the first bad record')
        parser.add_argument('--jobs', type=int, default=1, help='files standardized in parallel')
        self.add_json_argument(parser)

    @command_errors('ingest')
    def handle(self, *args, **options):
        config = self.load_config(options)
        retrieved_at = self.timestamp_option('retrieved-at', options['retrieved_at'])
        store = init_store(options['store'])
        try:
            report = run_ingestion(store, options['adapter'], options['files'], fail_fast=options['fail_fast'],
                                   default_retrieved_at=retrieved_at, dataset_name=options['dataset'],
                                   registry=config.registry(), n_jobs=options['jobs'])
        finally:
            close_store(store)

        for failure in report.failures[:MAX_FAILURES_SHOWN]:
            self.stderr.write(f'{failure.file_path}:{failure.record_index}: {failure.reason}')
        if len(report.failures) > MAX_FAILURES_SHOWN:
            self.stderr.write(f'... and {len(report.failures) - MAX_FAILURES_SHOWN} more failures')

        lines = [
            f'Files processed: {report.files_processed}',
            f'Records read: {report.records_read}, failed: {report.records_failed}',
        ] + self.table_counts(report.insert_report.to_dict())
        self.write_report(report.to_dict(), options['json'], lines)
