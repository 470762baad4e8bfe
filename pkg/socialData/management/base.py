import json
import sys

from django.core.management.base import BaseCommand, CommandError, CommandParser

from unifiedsocial.decorators import EXIT_VALIDATION
from unifiedsocial.utils import parse_duration, parse_timestamp
from socialData.config import CliConfig, load_config
from socialData.exceptions import ConfigError


class ArgumentParser(CommandParser):
    """Bad arguments are validation failures: exit code 1 instead of argparse's 2."""

    def error(self, message):
        if self.called_from_command_line:
            self.print_usage(sys.stderr)
            self.exit(EXIT_VALIDATION, f'{self.prog}: error: {message}\n')
        raise CommandError(f'Error: {message}', returncode=EXIT_VALIDATION)


class ReportCommand(BaseCommand):
    """Shared plumbing: the optional config file, --json output and flag parsing."""

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # BaseCommand builds a plain CommandParser with Django's default options already added
        parser.__class__ = ArgumentParser
        return parser

    def add_config_argument(self, parser, required=False):
        parser.add_argument('--config', type=str, required=required, help='YAML config file')

    def add_json_argument(self, parser):
        parser.add_argument('--json', action='store_true', help='print the run report as JSON')

    def load_config(self, options):
        config = load_config(options['config']) if options.get('config') else CliConfig()
        config.apply()
        return config

    def write_report(self, report, as_json, lines):
        if as_json:
            self.stdout.write(json.dumps(report, indent=2, ensure_ascii=False))
        else:
            for line in lines:
                self.stdout.write(line)

    @staticmethod
    def timestamp_option(name, value):
        if value is None:
            return None
        try:
            return parse_timestamp(value)
        except (ValueError, OverflowError):
            raise ConfigError(f'--{name}: not a timestamp: {value}')

    @staticmethod
    def duration_option(name, value):
        try:
            return parse_duration(value)
        except ValueError as e:
            raise ConfigError(f'--{name}: {e}')

    @staticmethod
    def table_counts(tables):
        return [f'  {table}: {counts["inserted"]} inserted of {counts["received"]} received'
                for table, counts in tables.items()]
