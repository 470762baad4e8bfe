from unifiedsocial.decorators import command_errors
from socialData.inspector import Inspector, export_reports_json, report_schemas
from socialData.management.base import ReportCommand
from socialData.store import close_store, open_store


def split_names(value):
    return [name.strip() for name in value.split(',') if name.strip()] if value else None


class Command(ReportCommand):
    help = 'Prints which schema fields each store fills, side by side'

    def add_arguments(self, parser):
        parser.add_argument('--stores', type=str, required=True, help='comma separated store names')
        parser.add_argument('--tables', type=str, default=None, help='comma separated tables (default: all)')
        self.add_config_argument(parser)
        parser.add_argument('--json', type=str, default=None, metavar='PATH',
                            help='also write the full statistics as JSON to PATH')

    @command_errors('inspect')
    def handle(self, *args, **options):
        self.load_config(options)
        tables = split_names(options['tables'])
        reports = []
        for name in split_names(options['stores']) or []:
            store = open_store(name)
            try:
                reports.append(Inspector(store).report(tables))
            finally:
                close_store(store)

        self.stdout.write(report_schemas(reports, tables), ending='')
        if options['json']:
            export_reports_json(reports, options['json'])
