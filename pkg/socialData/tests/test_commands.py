import json
import os
from io import StringIO
from unittest import mock

import yaml
from django.core.management import CommandError, call_command, load_command_class

from unifiedsocial import constants as CONS
from unifiedsocial.decorators import EXIT_RUNTIME, EXIT_VALIDATION
from unifiedsocial.log import register_secret
from socialData.exceptions import StoreError
from socialData.store import count, init_store, open_store, query
from socialData.tests.base import StoreTestCase

PEPPER = 'Zx9-command-test-pepper'
PINNED_RETRIEVED_AT = '2023-05-17T00:00:00Z'


class CommandTestCase(StoreTestCase):
    def call(self, *args):
        out = StringIO()
        call_command(*args, stdout=out, stderr=StringIO())
        return out.getvalue()

    def call_json(self, *args):
        return json.loads(self.call(*args, '--json'))

    def write_config(self, data, name='config.yaml'):
        path = self.tmp_dir / name
        path.write_text(yaml.safe_dump(data), encoding='utf-8')
        return str(path)

    def assertExitCode(self, returncode, *args):
        with self.assertRaises(CommandError) as raised:
            self.call(*args)
        self.assertEqual(raised.exception.returncode, returncode)
        return str(raised.exception)


class PipelineTest(CommandTestCase):
    """generate_fixtures -> ingest -> inspect -> anonymize -> network -> enrich -> export."""

    def setUp(self):
        super().setUp()
        self.fixtures = self.tmp_dir / 'fixtures'
        output = self.call('generate_fixtures', '--out', str(self.fixtures))
        self.assertIn('Fixtures for seed 42', output)
        with open(self.fixtures / CONS.FIXTURE_MANIFEST_FILE, encoding='utf-8') as source:
            self.manifest = json.load(source)

    def ingest(self, store, file_name, adapter):
        return self.call_json('ingest', str(self.fixtures / file_name), '--store', store, '--adapter', adapter,
                              '--retrieved-at', PINNED_RETRIEVED_AT)

    def ingest_fixtures(self, store='raw'):
        self.ingest(store, CONS.FIXTURE_MICROBLOG_FILE, CONS.ADAPTER_GENERIC_MICROBLOG)
        self.ingest(store, CONS.FIXTURE_FORUM_FILE, CONS.ADAPTER_GENERIC_FORUM)

    def test_ingest_is_idempotent(self):
        report = self.ingest('raw', CONS.FIXTURE_MICROBLOG_FILE, CONS.ADAPTER_GENERIC_MICROBLOG)
        info = self.manifest['files'][CONS.FIXTURE_MICROBLOG_FILE]
        self.assertEqual((report['records_read'], report['records_failed']),
                         (info['records_read'], info['records_failed']))
        self.assertEqual([failure['record_index'] for failure in report['failures']], info['malformed_indices'])
        inserted = {table: counts['inserted'] for table, counts in report['insert_report'].items()}
        self.assertEqual(inserted, self.manifest['inserts'][CONS.FIXTURE_MICROBLOG_FILE])

        again = self.ingest('raw', CONS.FIXTURE_MICROBLOG_FILE, CONS.ADAPTER_GENERIC_MICROBLOG)
        self.assertEqual(sum(counts['inserted'] for counts in again['insert_report'].values()), 0)

    def test_inspect(self):
        self.ingest_fixtures()
        init_store('empty')
        json_path = self.tmp_dir / 'inspect.json'
        output = self.call('inspect', '--stores', 'raw,empty', '--tables', 'posts,communities',
                           '--json', str(json_path))
        lines = output.splitlines()
        self.assertTrue(lines[0].startswith('field'))
        self.assertLess(lines[0].index('raw'), lines[0].index('empty'))
        self.assertIn('communities', lines)
        self.assertNotIn('accounts', lines)
        data = json.loads(json_path.read_text(encoding='utf-8'))
        self.assertEqual([report['store_name'] for report in data['stores']], ['raw', 'empty'])

    def test_anonymize_network_enrich_export(self):
        self.ingest_fixtures()
        config = self.write_config({
            'anonymize': {'src_db_name': 'raw', 'dst_db_name': 'anon', 'chunk_rows': 250},
            'enrichers': {'textgen': {'model_id_postfix': 'v1_sentiment', 'chat_model_id': 'mock',
                                      'provider_kind': CONS.PROVIDER_MOCK, 'batch_size': 250,
                                      'user_template': 'Analyze the sentiment of this post: {body}'}},
        })

        with mock.patch.dict(os.environ, {'SMDT_PEPPER': PEPPER}):
            report = self.call_json('anonymize', '--config', config)
        raw, anon = open_store('raw'), open_store('anon')
        for table in CONS.SCHEMA_TABLES:
            with self.subTest(table=table):
                self.assertEqual(report['copied'][table], count(raw, table))
                self.assertEqual(count(anon, table), count(raw, table))
        raw_accounts = {post.account_id for post in query(raw, CONS.TABLE_POSTS)}
        anon_accounts = {post.account_id for post in query(anon, CONS.TABLE_POSTS)}
        self.assertEqual(len(anon_accounts), len(raw_accounts))
        self.assertFalse(raw_accounts & anon_accounts)

        posts_path = self.tmp_dir / 'anon_posts.jsonl'
        self.call('export', '--store', 'anon', '--table', CONS.TABLE_POSTS, '--out', str(posts_path))
        self.assertNotIn(PEPPER, posts_path.read_text(encoding='utf-8'))

        windows_dir = self.tmp_dir / 'windows'
        windows = self.call_json('network', 'interaction', '--store', 'raw', '--start', CONS.FIXTURE_DAY_START,
                                 '--end', CONS.FIXTURE_DAY_END, '--step', '1h', '--out', str(windows_dir))
        self.assertEqual(len(windows['windows']), 24)
        self.assertEqual(len(list(windows_dir.glob('window_*.tsv'))), 24)
        self.assertEqual(windows['windows'][0]['window_start'], CONS.FIXTURE_DAY_START)

        enriched = self.call_json('enrich', '--store', 'raw', '--config', config, '--name', 'textgen')
        posts = len({post.post_id for post in query(raw, CONS.TABLE_POSTS)})
        self.assertEqual((enriched['targets_considered'], enriched['responses_stored']), (posts, posts))
        self.assertEqual(enriched['failures'], 0)
        cached = self.call_json('enrich', '--store', 'raw', '--config', config, '--name', 'textgen')
        self.assertEqual((cached['requests_sent'], cached['targets_skipped_cached']), (0, posts))

    def test_export_reingest_is_byte_stable(self):
        self.ingest_fixtures()
        for table in [CONS.TABLE_POSTS, CONS.TABLE_ACTIONS, CONS.TABLE_ENTITIES]:
            with self.subTest(table=table):
                first = self.tmp_dir / f'{table}_first.jsonl'
                second = self.tmp_dir / f'{table}_second.jsonl'
                exported = self.call_json('export', '--store', 'raw', '--table', table, '--out', str(first))
                self.assertGreater(exported['rows'], 0)
                self.call('ingest', str(first), '--store', f'copy_{table}', '--adapter', CONS.ADAPTER_IDENTITY)
                self.call('export', '--store', f'copy_{table}', '--table', table, '--out', str(second))
                self.assertEqual(first.read_bytes(), second.read_bytes())


class CommandErrorTest(CommandTestCase):
    def test_missing_pepper(self):
        init_store('raw')
        config = self.write_config({'anonymize': {'src_db_name': 'raw', 'dst_db_name': 'anon'}})
        with mock.patch.dict(os.environ):
            os.environ.pop('SMDT_PEPPER', None)
            message = self.assertExitCode(EXIT_VALIDATION, 'anonymize', '--config', config)
        self.assertIn('SMDT_PEPPER', message)
        self.assertTrue(message.startswith('anonymize: '))

    def test_unknown_config_keys(self):
        init_store('raw')
        config = self.write_config({'anonymize': {'src_db_name': 'raw', 'dst_db_name': 'anon', 'pepper': 'x'}})
        message = self.assertExitCode(EXIT_VALIDATION, 'anonymize', '--config', config)
        self.assertIn('unknown key "pepper"', message)
        config = self.write_config({'storage': '/tmp'}, 'top.yaml')
        self.assertExitCode(EXIT_VALIDATION, 'export', '--store', 'raw', '--table', 'posts', '--out', 'x.jsonl',
                            '--config', config)

    def test_destination_exists(self):
        init_store('raw')
        init_store('anon')
        config = self.write_config({'anonymize': {'src_db_name': 'raw', 'dst_db_name': 'anon'}})
        with mock.patch.dict(os.environ, {'SMDT_PEPPER': PEPPER}), \
                mock.patch('socialData.management.commands.anonymize.Command.confirm', return_value=False):
            self.assertExitCode(EXIT_VALIDATION, 'anonymize', '--config', config)
            report = self.call_json('anonymize', '--config', config, '--force')
        self.assertEqual(report['tokens_issued'], 0)

    def test_validation_failures(self):
        self.assertExitCode(EXIT_VALIDATION, 'inspect', '--stores', 'nowhere')
        init_store('raw')
        self.assertExitCode(EXIT_VALIDATION, 'export', '--store', 'raw', '--table', 'tweets', '--out',
                            str(self.tmp_dir / 'x.jsonl'))
        self.assertExitCode(EXIT_VALIDATION, 'network', 'cooccur', '--store', 'raw', '--step', '1h',
                            '--out', str(self.tmp_dir / 'net'))
        self.assertExitCode(EXIT_VALIDATION, 'network', 'interaction', '--store', 'raw', '--start', 'someday',
                            '--out', str(self.tmp_dir / 'net.tsv'))
        self.assertExitCode(EXIT_VALIDATION, 'ingest', 'missing.jsonl', '--store', '../escape',
                            '--adapter', CONS.ADAPTER_IDENTITY)

    def test_runtime_failures_are_scrubbed(self):
        init_store('raw')
        register_secret(PEPPER)
        with mock.patch('socialData.management.commands.export.export_json',
                        side_effect=StoreError(f'disk full while writing with {PEPPER}')):
            message = self.assertExitCode(EXIT_RUNTIME, 'export', '--store', 'raw', '--table', 'posts',
                                          '--out', str(self.tmp_dir / 'x.jsonl'))
        self.assertNotIn(PEPPER, message)
        self.assertIn('export: disk full', message)


class CommandLineTest(CommandTestCase):
    def run_from_argv(self, name, *args):
        with mock.patch('sys.stderr', new_callable=StringIO) as stderr, \
                mock.patch('sys.stdout', new_callable=StringIO):
            command = load_command_class('socialData', name)
            with self.assertRaises(SystemExit) as raised:
                command.run_from_argv(['manage.py', name, *args])
        return raised.exception.code, stderr.getvalue()

    def test_bad_arguments_exit_with_validation_code(self):
        out = str(self.tmp_dir / 'net.tsv')
        cases = [
            ['interaction', '--store', 'raw', '--interaction', 'FOO', '--out', out],
            ['interaction', '--store', 'raw'],
            ['interaction', '--store', 'raw', '--min-weight', 'abc', '--out', out],
            ['triangle', '--store', 'raw', '--out', out],
        ]
        for args in cases:
            with self.subTest(args=args):
                code, stderr = self.run_from_argv('network', *args)
                self.assertEqual(code, EXIT_VALIDATION)
                self.assertIn('error:', stderr)
        message = self.assertExitCode(EXIT_VALIDATION, 'network', 'interaction', '--store', 'raw',
                                      '--min-weight', 'abc', '--out', out)
        self.assertIn('--min-weight', message)

    def test_failures_inside_commands_keep_their_codes(self):
        code, stderr = self.run_from_argv('inspect', '--stores', 'nowhere')
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn('inspect: ', stderr)
        init_store('raw')
        with mock.patch('socialData.management.commands.export.export_json', side_effect=StoreError('disk full')):
            code, stderr = self.run_from_argv('export', '--store', 'raw', '--table', 'posts',
                                              '--out', str(self.tmp_dir / 'x.jsonl'))
        self.assertEqual(code, EXIT_RUNTIME)
        self.assertIn('export: disk full', stderr)

    def test_commands_leave_callers_handles_open(self):
        store = init_store('raw')
        self.call('export', '--store', 'raw', '--table', CONS.TABLE_POSTS, '--out', str(self.tmp_dir / 'p.jsonl'))
        self.call('inspect', '--stores', 'raw')
        self.call('network', 'interaction', '--store', 'raw', '--out', str(self.tmp_dir / 'net.tsv'))
        self.assertEqual(count(store, CONS.TABLE_POSTS), 0)
