import sys

from unifiedsocial.decorators import command_errors
from socialData.anonymizer import run_anonymization
from socialData.management.base import ReportCommand


class Command(ReportCommand):
    help = 'Copies a store into a pseudonymized destination store as configured under anonymize'

    def add_arguments(self, parser):
        self.add_config_argument(parser, required=True)
        parser.add_argument('--force', action='store_true', help='replace an existing destination without asking')
        self.add_json_argument(parser)

    def confirm(self, name):
        if not sys.stdin.isatty():
            return False
        answer = input(f'Destination store "{name}" already exists. Reinitialize it? [y/N] ')
        return answer.strip().lower() in ('y', 'yes')

    @command_errors('anonymize')
    def handle(self, *args, **options):
        config = self.load_config(options)
        anonymize_config, policy = config.anonymize_config()
        report = run_anonymization(anonymize_config, policy, confirm=self.confirm, force=options['force'])

        lines = [f'Anonymized {anonymize_config.src_db_name} into {anonymize_config.dst_db_name}']
        lines += [f'  {table}: {copied} rows' for table, copied in report.copied.items()]
        lines.append(f'Tokens issued: {report.tokens_issued}')
        lines += [f'  {entity_type} redactions: {n}' for entity_type, n in report.redactions.items()]
        self.write_report(report.to_dict(), options['json'], lines)
