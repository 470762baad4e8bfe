from unifiedsocial.decorators import command_errors
from socialData.enrichers import run_enricher
from socialData.management.base import ReportCommand
from socialData.store import close_store, open_store


class Command(ReportCommand):
    help = 'Runs an enricher configured under enrichers over the targets in a store'

    def add_arguments(self, parser):
        parser.add_argument('--store', type=str, required=True)
        self.add_config_argument(parser, required=True)
        parser.add_argument('--name', type=str, required=True, help='enricher section name, e.g. textgen')
        self.add_json_argument(parser)

    @command_errors('enrich')
    def handle(self, *args, **options):
        config = self.load_config(options)
        enricher_config = config.enricher_config(options['name'])
        store = open_store(options['store'])
        try:
            report = run_enricher(options['name'], store, enricher_config)
        finally:
            close_store(store)

        lines = [
            f'Targets considered: {report.targets_considered}, already cached: {report.targets_skipped_cached}',
            f'Requests sent: {report.requests_sent} in {report.batches} batches, retries: {report.retries}',
            f'Responses stored: {report.responses_stored}, failures: {report.failures}',
        ]
        for target_id, reason in report.failure_detail:
            self.stderr.write(f'{target_id}: {reason}')
        self.write_report(report.to_dict(), options['json'], lines)
