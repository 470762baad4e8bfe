"""
Chat-completion providers. Every provider turns (system prompt, user prompt) into one reply;
the HTTP ones retry transport errors, 429 and 5xx responses with exponential backoff.
"""
import logging
import threading
from abc import ABC, abstractmethod
from typing import NamedTuple, Optional

import requests
from django.conf import settings
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt, wait_exponential

from unifiedsocial import constants as CONS
from socialData.exceptions import ConfigError, ProviderAuthError, ProviderError, ProviderResponseError

logger = logging.getLogger(__name__)


class ProviderReply(NamedTuple):
    response_text: str
    finish_reason: Optional[str]
    attempts: int = 1

    @property
    def retries(self):
        return self.attempts - 1


class TransientFailure(Exception):
    def __init__(self, reason, status=None):
        super().__init__(reason)
        self.status = status


class Provider(ABC):
    kind = None

    @abstractmethod
    def send(self, system_prompt, user_prompt, chat_model_id, max_tokens):
        """Returns a ProviderReply or raises ProviderError."""

    def __repr__(self):
        return f'<{type(self).__name__}>'


class HttpProvider(Provider):
    def __init__(self, base_url, api_key='', session=None, timeout=None, max_attempts=None, base_delay=None):
        if not base_url:
            raise ConfigError(f'{self.kind} needs a base_url')
        self.base_url = base_url
        self._api_key = api_key
        self.session = session or requests.Session()
        self.timeout = settings.ENRICHER_REQUEST_TIMEOUT if timeout is None else timeout
        self.max_attempts = settings.ENRICHER_MAX_ATTEMPTS if max_attempts is None else max_attempts
        self.base_delay = settings.ENRICHER_RETRY_BASE_DELAY if base_delay is None else base_delay

    @property
    @abstractmethod
    def url(self):
        pass

    @abstractmethod
    def headers(self):
        pass

    @abstractmethod
    def payload(self, system_prompt, user_prompt, chat_model_id, max_tokens):
        pass

    @abstractmethod
    def extract(self, body):
        """(response_text, finish_reason) from a decoded response body."""

    def post_once(self, payload):
        try:
            response = self.session.post(self.url, json=payload, headers=self.headers(), timeout=self.timeout)
        except requests.RequestException as e:
            raise TransientFailure(f'transport error ({type(e).__name__})')
        status = response.status_code
        if status in CONS.RETRY_STATUS_CODES:
            raise TransientFailure(f'HTTP {status}', status)
        if status in CONS.AUTH_STATUS_CODES:
            raise ProviderAuthError(f'{self.kind} rejected the credentials (HTTP {status})', status=status, attempts=1)
        if not 200 <= status < 300:
            raise ProviderError(f'{self.kind} answered HTTP {status}', status=status, attempts=1)
        try:
            return response.json()
        except ValueError:
            raise ProviderResponseError(f'{self.kind} returned a body that is not JSON', status=status, attempts=1)

    def send(self, system_prompt, user_prompt, chat_model_id, max_tokens):
        payload = self.payload(system_prompt, user_prompt, chat_model_id, max_tokens)
        retrying = Retrying(
            stop=stop_after_attempt(self.max_attempts),
            wait=wait_exponential(multiplier=self.base_delay, min=0),
            retry=retry_if_exception_type(TransientFailure),
            reraise=True,
        )
        attempts = 0
        try:
            for attempt in retrying:
                with attempt:
                    attempts = attempt.retry_state.attempt_number
                    body = self.post_once(payload)
        except TransientFailure as e:
            raise ProviderError(f'{self.kind} failed after {attempts} attempts: {e}', status=e.status,
                                attempts=attempts)
        except ProviderError as e:
            e.attempts = attempts
            raise
        try:
            text, finish_reason = self.extract(body)
        except (KeyError, IndexError, TypeError) as e:
            raise ProviderResponseError(f'{self.kind} response is missing {e}', attempts=attempts)
        if not isinstance(text, str):
            raise ProviderResponseError(f'{self.kind} response text is not a string', attempts=attempts)
        return ProviderReply(text, finish_reason, attempts)


class OpenAICompatProvider(HttpProvider):
    """POST {base_url}/chat/completions with bearer auth; vLLM and other local servers speak this too."""
    kind = CONS.PROVIDER_OPENAI_COMPAT

    @property
    def url(self):
        return self.base_url.rstrip('/') + '/chat/completions'

    def headers(self):
        headers = {'Content-Type': 'application/json'}
        if self._api_key:
            headers['Authorization'] = f'Bearer {self._api_key}'
        return headers

    def payload(self, system_prompt, user_prompt, chat_model_id, max_tokens):
        messages = []
        if system_prompt:
            messages.append({'role': 'system', 'content': system_prompt})
        messages.append({'role': 'user', 'content': user_prompt})
        return {'model': chat_model_id, 'messages': messages, 'max_tokens': max_tokens}

    def extract(self, body):
        choice = body['choices'][0]
        return choice['message']['content'], choice.get('finish_reason')


class GeminiProvider(OpenAICompatProvider):
    kind = CONS.PROVIDER_GEMINI

    def __init__(self, base_url, *args, **kwargs):
        if not base_url or 'openai' not in base_url.lower():
            raise ConfigError('GEMINI is unsupported except through its OpenAI-compatible endpoint; '
                              'set base_url to that endpoint (it ends in /openai/)')
        super().__init__(base_url, *args, **kwargs)


class AnthropicProvider(HttpProvider):
    kind = CONS.PROVIDER_ANTHROPIC

    @property
    def url(self):
        return self.base_url

    def headers(self):
        return {
            'Content-Type': 'application/json',
            'x-api-key': self._api_key,
            'anthropic-version': settings.ANTHROPIC_API_VERSION,
        }

    def payload(self, system_prompt, user_prompt, chat_model_id, max_tokens):
        payload = {
            'model': chat_model_id,
            'messages': [{'role': 'user', 'content': user_prompt}],
            'max_tokens': max_tokens,
        }
        if system_prompt:
            payload['system'] = system_prompt
        return payload

    def extract(self, body):
        return body['content'][0]['text'], body.get('stop_reason')


class MockProvider(Provider):
    """
    In-process stand-in. echo returns the user prompt, fixed returns fixed_response. Prompts that
    contain fail_marker fail like a malformed response; auth_failure fails every call like a bad key.
    """
    kind = CONS.PROVIDER_MOCK

    def __init__(self, mode=CONS.MOCK_MODE_ECHO, fixed_response='', fail_marker=None, auth_failure=False):
        if mode not in CONS.MOCK_MODE_VALUES:
            raise ConfigError(f'Unknown mock mode "{mode}"')
        self.mode = mode
        self.fixed_response = fixed_response
        self.fail_marker = fail_marker
        self.auth_failure = auth_failure
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def calls(self):
        return self._calls

    def send(self, system_prompt, user_prompt, chat_model_id, max_tokens):
        with self._lock:
            self._calls += 1
        if self.auth_failure:
            raise ProviderAuthError('MOCK rejected the credentials', status=401, attempts=1)
        if self.fail_marker and self.fail_marker in user_prompt:
            raise ProviderResponseError('MOCK produced a malformed response', attempts=1)
        text = user_prompt if self.mode == CONS.MOCK_MODE_ECHO else self.fixed_response
        return ProviderReply(text, 'stop', 1)


HTTP_PROVIDERS = {
    CONS.PROVIDER_OPENAI_COMPAT: OpenAICompatProvider,
    CONS.PROVIDER_ANTHROPIC: AnthropicProvider,
    CONS.PROVIDER_GEMINI: GeminiProvider,
}


def build_provider(config, session=None):
    if config.provider_kind == CONS.PROVIDER_MOCK:
        return MockProvider(config.mock_mode, config.mock_response, config.mock_fail_marker)
    try:
        provider_class = HTTP_PROVIDERS[config.provider_kind]
    except KeyError:
        raise ConfigError(f'Unknown provider_kind "{config.provider_kind}"')
    return provider_class(config.base_url, config.api_key, session=session)


def provider_send(provider, system_prompt, user_prompt, chat_model_id, max_tokens):
    reply = provider.send(system_prompt, user_prompt, chat_model_id, max_tokens)
    return {'response_text': reply.response_text, 'finish_reason': reply.finish_reason}
