from unifiedsocial.decorators import command_errors
from socialData.management.base import ReportCommand
from socialData.synthetic import DEFAULT_SEED, generate_fixtures


class Command(ReportCommand):
    help = 'Writes the synthetic microblog and forum files plus their manifest'

    def add_arguments(self, parser):
        parser.add_argument('--seed', type=int, default=DEFAULT_SEED)
        parser.add_argument('--out', type=str, required=True, help='output directory')
        self.add_json_argument(parser)

    @command_errors('generate_fixtures')
    def handle(self, *args, **options):
        manifest = generate_fixtures(options['seed'], options['out'])
        lines = [f'Fixtures for seed {manifest.seed} written to {options["out"]}']
        for file_name, info in manifest.files.items():
            lines.append(f'  {file_name}: {info["records_read"]} lines, {info["records_failed"]} malformed')
        self.write_report(manifest.to_dict(), options['json'], lines)
