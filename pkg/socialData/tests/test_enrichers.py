import logging
import random
import sys
from unittest import mock

import requests
from django.test import SimpleTestCase

from unifiedsocial import constants as CONS
from unifiedsocial.log import SecretScrubFilter, register_secret
from socialData.enrichers import (AnthropicProvider, EnricherConfig, GeminiProvider, MockProvider,
                                  OpenAICompatProvider, build_provider, provider_send, render_prompt, run_enricher)
from socialData.exceptions import (ConfigError, ProviderAuthError, ProviderError, ProviderResponseError,
                                   UnknownPlaceholder)
from socialData.store import count, export_json, init_store, insert_batch, query
from socialData.tests.base import StoreTestCase, make_account, make_post, ts

API_KEY = 'sk-enricher-test-key-31337'
STUB_URL = 'http://stub.local/v1'
COMPLETION = {'choices': [{'message': {'role': 'assistant', 'content': 'positive'}, 'finish_reason': 'stop'}]}


def response(status, body=None, json_error=False):
    reply = mock.Mock(status_code=status)
    if json_error:
        reply.json.side_effect = ValueError('Expecting value')
    else:
        reply.json.return_value = body
    return reply


def stub_session(*replies):
    session = mock.Mock()
    session.post.side_effect = list(replies)
    return session


def mock_config(**kwargs):
    options = dict(model_id_postfix='v1_sentiment', chat_model_id='mock-model', provider_kind=CONS.PROVIDER_MOCK)
    options.update(kwargs)
    return EnricherConfig(**options)


class RenderPromptTest(SimpleTestCase):
    def test_placeholders(self):
        post = make_post('p1', body='great!')
        self.assertEqual(render_prompt('Analyze the sentiment of this post: {body}', post),
                         'Analyze the sentiment of this post: great!')
        self.assertEqual(render_prompt('No placeholders here.', post), 'No placeholders here.')
        self.assertEqual(render_prompt('{body}{body}', make_post('p1', body='x')), 'xx')
        self.assertEqual(render_prompt('{{body}} is {body}', post), '{body} is great!')
        self.assertEqual(render_prompt('[{community_id}]', post), '[]')
        self.assertEqual(render_prompt('{created_at}', post), '2023-05-14T10:00:00Z')
        self.assertEqual(render_prompt('{location}', make_post('p1', location=[1.5, 2.0])), '[1.5, 2.0]')
        self.assertEqual(render_prompt('{name}!', {'name': 'dict'}), 'dict!')

    def test_bad_templates(self):
        post = make_post('p1')
        with self.assertRaises(UnknownPlaceholder) as raised:
            render_prompt('{text}', post)
        self.assertEqual(raised.exception.key, 'text')
        with self.assertRaises(UnknownPlaceholder):
            render_prompt('{body!r}', post)
        with self.assertRaises(ConfigError):
            render_prompt('{body', post)


class EnricherConfigTest(SimpleTestCase):
    def test_model_id(self):
        config = mock_config(api_key=API_KEY)
        self.assertEqual(config.model_id, 'mock-model:v1_sentiment')
        self.assertNotIn(API_KEY, repr(config))
        self.assertEqual(config.parallelism, 4)

    def test_invalid(self):
        for kwargs in [dict(provider_kind='OPENAI'), dict(batch_size=0), dict(max_tokens=True),
                       dict(target_kind='COMMENT'), dict(model_id_postfix='')]:
            with self.subTest(**kwargs):
                with self.assertRaises(ConfigError):
                    mock_config(**kwargs)
        with self.assertRaises(UnknownPlaceholder):
            mock_config(user_template='{user_name}')
        mock_config(user_template='{user_name}', target_kind=CONS.TARGET_KIND_ACCOUNT)


class MockRunTest(StoreTestCase):
    def setUp(self):
        super().setUp()
        self.store = init_store('alpha')
        insert_batch(self.store, [make_post(f'p{i:02d}', account_id=f'a{i % 3}', body=f'post {i}')
                                  for i in range(25)])

    def enrichments(self, model_id='mock-model:v1_sentiment'):
        return query(self.store, CONS.TABLE_POST_ENRICHMENTS, {'model_id': model_id})

    def test_batches_and_cache(self):
        config = mock_config(user_template='Analyze the sentiment of this post: {body}')
        report = run_enricher(CONS.ENRICHER_TEXTGEN, self.store, config)
        self.assertEqual((report.targets_considered, report.requests_sent, report.responses_stored, report.batches),
                         (25, 25, 25, 3))
        self.assertEqual(report.failures, 0)
        row = query(self.store, CONS.TABLE_POST_ENRICHMENTS, {'post_id': 'p07'})[0]
        self.assertEqual(row.body, {'response_text': 'Analyze the sentiment of this post: post 7',
                                    'provider_kind': CONS.PROVIDER_MOCK, 'finish_reason': 'stop',
                                    'chat_model_id': 'mock-model'})

        again = run_enricher(CONS.ENRICHER_TEXTGEN, self.store, config)
        self.assertEqual((again.requests_sent, again.targets_skipped_cached, again.batches), (0, 25, 0))
        self.assertEqual(len(self.enrichments()), 25)

        other = run_enricher(CONS.ENRICHER_TEXTGEN, self.store, mock_config(model_id_postfix='v2'))
        self.assertEqual(other.responses_stored, 25)

    def test_reset_cache_refreshes(self):
        first = ts('2023-06-01T00:00:00Z')
        second = ts('2023-06-02T00:00:00Z')
        with mock.patch('socialData.enrichers.runner.timezone.now', return_value=first):
            run_enricher(CONS.ENRICHER_TEXTGEN, self.store, mock_config())
        with mock.patch('socialData.enrichers.runner.timezone.now', return_value=second):
            report = run_enricher(CONS.ENRICHER_TEXTGEN, self.store, mock_config(reset_cache=True))
        self.assertEqual(report.responses_stored, 25)
        rows = self.enrichments()
        self.assertEqual(len(rows), 25)
        self.assertEqual({row.created_at for row in rows}, {second})

    def test_failures_do_not_stop_the_run(self):
        config = mock_config(batch_size=4, mock_fail_marker='post 1')
        report = run_enricher(CONS.ENRICHER_TEXTGEN, self.store, config)
        # "post 1" and "post 10" ... "post 19"
        self.assertEqual(report.failures, 11)
        self.assertEqual(report.responses_stored, 14)
        self.assertEqual(report.batches, 7)
        self.assertIn(('p01', 'MOCK produced a malformed response'), report.failure_detail)
        self.assertEqual(report.targets_considered,
                         report.targets_skipped_cached + report.responses_stored + report.failures)

    def test_auth_failure_aborts(self):
        config = mock_config()
        with self.assertRaises(ProviderAuthError):
            run_enricher(CONS.ENRICHER_TEXTGEN, self.store, config, provider=MockProvider(auth_failure=True))
        self.assertEqual(count(self.store, CONS.TABLE_POST_ENRICHMENTS), 0)

    def test_latest_snapshot_and_filter(self):
        insert_batch(self.store, [make_post('p00', account_id='a0', body='edited',
                                            retrieved_at='2023-05-20T00:00:00Z')])
        report = run_enricher(CONS.ENRICHER_TEXTGEN, self.store, mock_config(target_filter={'account_id': 'a0'}))
        self.assertEqual(report.targets_considered, 9)
        row = query(self.store, CONS.TABLE_POST_ENRICHMENTS, {'post_id': 'p00'})[0]
        self.assertEqual(row.body['response_text'], 'edited')

    def test_accounts(self):
        insert_batch(self.store, [make_account('a0', user_name='alice'), make_account('a1')])
        provider = MockProvider(CONS.MOCK_MODE_FIXED, 'bot')
        report = run_enricher(CONS.ENRICHER_TEXTGEN, self.store, provider=provider, model_id_postfix='bots',
                              chat_model_id='mock', provider_kind=CONS.PROVIDER_MOCK,
                              target_kind=CONS.TARGET_KIND_ACCOUNT, user_template='Is {user_name} a bot?')
        self.assertEqual(report.responses_stored, 2)
        self.assertEqual(provider.calls, 2)
        rows = query(self.store, CONS.TABLE_ACCOUNT_ENRICHMENTS)
        self.assertEqual([(row.account_id, row.body['response_text']) for row in rows], [('a0', 'bot'), ('a1', 'bot')])

    def test_unknown_enricher(self):
        with self.assertRaises(ConfigError):
            run_enricher('summarize', self.store, mock_config())

    def test_report_conservation(self):
        rng = random.Random(11)
        for case in range(200):
            config = mock_config(
                model_id_postfix=f'task{rng.randrange(4)}',
                batch_size=rng.randint(1, 12),
                only_missing=rng.random() < 0.7,
                reset_cache=rng.random() < 0.2,
                parallelism=1,
                mock_fail_marker=rng.choice([None, 'post 2', 'post 1', 'post']),
                target_filter=rng.choice([None, {'account_id': 'a1'}, {'post_id': ['p01', 'p02', 'p03']}]),
            )
            report = run_enricher(CONS.ENRICHER_TEXTGEN, self.store, config)
            with self.subTest(case=case):
                self.assertEqual(report.targets_considered,
                                 report.targets_skipped_cached + report.responses_stored + report.failures)
                self.assertEqual(report.requests_sent, report.responses_stored + report.failures)
                self.assertEqual(len(report.failure_detail), report.failures)


class HttpProviderTest(SimpleTestCase):
    def provider(self, session, cls=OpenAICompatProvider, base_url=STUB_URL):
        return cls(base_url, API_KEY, session=session, max_attempts=3, base_delay=0)

    def test_openai_compat(self):
        session = stub_session(response(200, COMPLETION))
        reply = provider_send(self.provider(session), 'be brief', 'hello', 'gpt-test', 64)
        self.assertEqual(reply, {'response_text': 'positive', 'finish_reason': 'stop'})
        args, kwargs = session.post.call_args
        self.assertEqual(args, (STUB_URL + '/chat/completions',))
        self.assertEqual(kwargs['json'], {'model': 'gpt-test', 'max_tokens': 64, 'messages': [
            {'role': 'system', 'content': 'be brief'}, {'role': 'user', 'content': 'hello'}]})
        self.assertEqual(kwargs['headers']['Authorization'], f'Bearer {API_KEY}')

    def test_retries_transient_failures(self):
        session = stub_session(response(500), response(500), response(200, COMPLETION))
        reply = self.provider(session).send('', 'hello', 'gpt-test', 64)
        self.assertEqual(reply.response_text, 'positive')
        self.assertEqual((reply.attempts, reply.retries), (3, 2))
        self.assertEqual(session.post.call_count, 3)

        session = stub_session(requests.ConnectionError('refused'), response(200, COMPLETION))
        self.assertEqual(self.provider(session).send('', 'hello', 'gpt-test', 64).attempts, 2)

    def test_gives_up_after_max_attempts(self):
        session = stub_session(response(503), response(429), response(500))
        with self.assertRaises(ProviderError) as raised:
            self.provider(session).send('', 'hello', 'gpt-test', 64)
        self.assertEqual((raised.exception.status, raised.exception.attempts), (500, 3))

    def test_terminal_statuses(self):
        session = stub_session(response(401))
        with self.assertRaises(ProviderAuthError):
            self.provider(session).send('', 'hello', 'gpt-test', 64)
        self.assertEqual(session.post.call_count, 1)

        session = stub_session(response(404))
        with self.assertRaises(ProviderError) as raised:
            self.provider(session).send('', 'hello', 'gpt-test', 64)
        self.assertEqual(raised.exception.status, 404)
        self.assertNotIsInstance(raised.exception, ProviderAuthError)
        self.assertEqual(session.post.call_count, 1)

    def test_malformed_bodies(self):
        for reply in [response(200, json_error=True), response(200, {}),
                      response(200, {'choices': [{'message': {'content': 7}}]})]:
            with self.subTest(reply=reply):
                with self.assertRaises(ProviderResponseError):
                    self.provider(stub_session(reply)).send('', 'hello', 'gpt-test', 64)

    def test_anthropic(self):
        session = stub_session(response(200, {'content': [{'type': 'text', 'text': 'neutral'}],
                                              'stop_reason': 'end_turn'}))
        url = 'https://api.anthropic.com/v1/messages'
        reply = self.provider(session, AnthropicProvider, url).send('be brief', 'hello', 'claude-test', 32)
        self.assertEqual((reply.response_text, reply.finish_reason), ('neutral', 'end_turn'))
        args, kwargs = session.post.call_args
        self.assertEqual(args, (url,))
        self.assertEqual(kwargs['json'], {'model': 'claude-test', 'system': 'be brief', 'max_tokens': 32,
                                          'messages': [{'role': 'user', 'content': 'hello'}]})
        self.assertEqual(kwargs['headers']['x-api-key'], API_KEY)
        self.assertEqual(kwargs['headers']['anthropic-version'], '2023-06-01')

    def test_gemini_only_through_openai_surface(self):
        with self.assertRaises(ConfigError):
            GeminiProvider('https://generativelanguage.googleapis.com/v1beta', API_KEY)
        provider = GeminiProvider('https://generativelanguage.googleapis.com/v1beta/openai/', API_KEY)
        self.assertEqual(provider.url, 'https://generativelanguage.googleapis.com/v1beta/openai/chat/completions')

    def test_build_provider(self):
        self.assertIsInstance(build_provider(mock_config()), MockProvider)
        config = mock_config(provider_kind=CONS.PROVIDER_OPENAI_COMPAT, base_url=STUB_URL)
        self.assertIsInstance(build_provider(config), OpenAICompatProvider)
        with self.assertRaises(ConfigError):
            build_provider(mock_config(provider_kind=CONS.PROVIDER_ANTHROPIC))

    def test_mock_echo(self):
        self.assertEqual(provider_send(MockProvider(), '', 'say this', 'mock', 8)['response_text'], 'say this')
        with self.assertRaises(ConfigError):
            MockProvider('random')


class HttpRunTest(StoreTestCase):
    def test_retries_land_in_the_report(self):
        store = init_store('alpha')
        insert_batch(store, [make_post('p0', body='first'), make_post('p1', body='second')])
        session = stub_session(response(500), response(200, COMPLETION), response(200, COMPLETION))
        config = mock_config(provider_kind=CONS.PROVIDER_OPENAI_COMPAT, base_url=STUB_URL, api_key=API_KEY,
                             batch_size=1, parallelism=1)
        provider = OpenAICompatProvider(STUB_URL, API_KEY, session=session)
        report = run_enricher(CONS.ENRICHER_TEXTGEN, store, config, provider=provider)
        self.assertEqual(report.responses_stored, 2)
        self.assertEqual(report.retry_detail, [('p0', 1)])
        self.assertEqual(report.retries, 1)

        path = self.tmp_dir / 'enrichments.jsonl'
        export_json(store, CONS.TABLE_POST_ENRICHMENTS, path)
        self.assertNotIn(API_KEY, path.read_text(encoding='utf-8'))
        self.assertNotIn(API_KEY, str(report.to_dict()))


class SecretScrubTest(SimpleTestCase):
    def test_registered_secrets_are_scrubbed(self):
        register_secret(API_KEY)
        record = logging.LogRecord('socialData', logging.WARNING, __file__, 1, 'sending with %s to %s',
                                   (API_KEY, STUB_URL), None)
        self.assertTrue(SecretScrubFilter().filter(record))
        self.assertEqual(record.getMessage(), f'sending with *** to {STUB_URL}')

    def test_short_values_are_not_registered(self):
        register_secret('ab')
        record = logging.LogRecord('socialData', logging.INFO, __file__, 1, 'about abc', None, None)
        SecretScrubFilter().filter(record)
        self.assertEqual(record.getMessage(), 'about abc')

    def test_exception_text(self):
        register_secret(API_KEY)
        try:
            raise ProviderError(f'bad key {API_KEY}')
        except ProviderError:
            record = logging.LogRecord('socialData', logging.ERROR, __file__, 1, 'failed', None, sys.exc_info())
        SecretScrubFilter().filter(record)
        self.assertNotIn(API_KEY, record.exc_text)
