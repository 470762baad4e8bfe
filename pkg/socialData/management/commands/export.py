from unifiedsocial.decorators import command_errors
from socialData.management.base import ReportCommand
from socialData.store import close_store, export_json, open_store


class Command(ReportCommand):
    help = 'Writes one table of a store as JSON Lines'

    def add_arguments(self, parser):
        parser.add_argument('--store', type=str, required=True)
        parser.add_argument('--table', type=str, required=True)
        parser.add_argument('--out', type=str, required=True)
        self.add_config_argument(parser)
        self.add_json_argument(parser)

    @command_errors('export')
    def handle(self, *args, **options):
        self.load_config(options)
        store = open_store(options['store'])
        try:
            written = export_json(store, options['table'], options['out'])
        finally:
            close_store(store)
        report = {'store': store.name, 'table': options['table'], 'rows': written, 'out': options['out']}
        self.write_report(report, options['json'], [f'Exported {written} {options["table"]} rows to {options["out"]}'])
