import logging
from dataclasses import dataclass, field
from typing import Optional

from django.conf import settings
from django.utils import timezone
from joblib import Parallel, delayed

from unifiedsocial import constants as CONS
from unifiedsocial.log import register_secret
from socialData.exceptions import ConfigError, ProviderAuthError, ProviderError
from socialData.models import ENRICHMENT_MODELS, Account, Post, enrichment_record
from socialData.store import delete_rows, insert_batch, select
from .providers import build_provider
from .templates import check_template, render_prompt

logger = logging.getLogger(__name__)

TARGET_TABLES = {
    CONS.TARGET_KIND_ACCOUNT: Account,
    CONS.TARGET_KIND_POST: Post,
}


@dataclass
class EnricherConfig:
    model_id_postfix: str
    chat_model_id: str
    provider_kind: str
    base_url: str = ''
    api_key: str = field(default='', repr=False)
    system_prompt: str = ''
    user_template: str = '{body}'
    only_missing: bool = True
    batch_size: int = 10
    reset_cache: bool = False
    max_tokens: int = 512
    target_kind: str = CONS.TARGET_KIND_POST
    target_filter: Optional[dict] = None
    parallelism: Optional[int] = None
    mock_mode: str = CONS.MOCK_MODE_ECHO
    mock_response: str = ''
    mock_fail_marker: Optional[str] = None

    def __post_init__(self):
        register_secret(self.api_key)
        if not self.model_id_postfix or not self.chat_model_id:
            raise ConfigError('model_id_postfix and chat_model_id are required')
        if self.provider_kind not in CONS.PROVIDER_KIND_VALUES:
            raise ConfigError(f'Unknown provider_kind "{self.provider_kind}", choose from '
                              f'{", ".join(CONS.PROVIDER_KIND_VALUES)}')
        if self.target_kind not in TARGET_TABLES:
            raise ConfigError(f'Unknown target_kind "{self.target_kind}"')
        for name in ('batch_size', 'max_tokens'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f'{name} must be a positive integer')
        if self.parallelism is None:
            self.parallelism = settings.ENRICHER_PARALLELISM
        check_template(self.user_template, self.target_model.schema_fields())

    @property
    def model_id(self):
        return f'{self.chat_model_id}:{self.model_id_postfix}'

    @property
    def target_model(self):
        return TARGET_TABLES[self.target_kind]

    @property
    def enrichment_model(self):
        return ENRICHMENT_MODELS[self.target_kind]


@dataclass
class EnrichReport:
    targets_considered: int = 0
    targets_skipped_cached: int = 0
    requests_sent: int = 0
    responses_stored: int = 0
    failures: int = 0
    failure_detail: list = field(default_factory=list)
    retry_detail: list = field(default_factory=list)
    batches: int = 0

    @property
    def retries(self):
        return sum(retries for _, retries in self.retry_detail)

    def fail(self, target_id, reason):
        self.failures += 1
        self.failure_detail.append((target_id, reason))

    def to_dict(self):
        return {
            'targets_considered': self.targets_considered,
            'targets_skipped_cached': self.targets_skipped_cached,
            'requests_sent': self.requests_sent,
            'responses_stored': self.responses_stored,
            'failures': self.failures,
            'failure_detail': [{'target_id': t, 'reason': r} for t, r in self.failure_detail],
            'retry_detail': [{'target_id': t, 'retries': r} for t, r in self.retry_detail],
            'batches': self.batches,
        }


class TextGenEnricher:
    """
    Sends every target record through a chat model and stores the reply as an enrichment row keyed
    by "chat_model_id:model_id_postfix".
    """
    name = CONS.ENRICHER_TEXTGEN

    def __init__(self, config, provider=None):
        self.config = config
        self.provider = provider or build_provider(config)

    def latest_targets(self, store):
        """The newest snapshot of every distinct target, in order of first appearance."""
        model = self.config.target_model
        id_field = model.DEDUP_LOOKUP_FIELD
        latest = {}
        for record in select(store, model.TABLE, self.config.target_filter).iterator():
            target_id = getattr(record, id_field)
            current = latest.get(target_id)
            if current is None or record.retrieved_at >= current.retrieved_at:
                latest[target_id] = record
        return latest

    def cached_targets(self, store):
        model = self.config.enrichment_model
        return set(select(store, model.TABLE, {'model_id': self.config.model_id})
                   .values_list(model.TARGET_FIELD, flat=True))

    def request(self, record):
        """Runs in a worker thread. Returns the reply or the per-target error."""
        prompt = render_prompt(self.config.user_template, record)
        try:
            return self.provider.send(self.config.system_prompt, prompt, self.config.chat_model_id,
                                      self.config.max_tokens)
        except ProviderAuthError:
            raise
        except ProviderError as e:
            return e

    def run(self, store):
        config = self.config
        report = EnrichReport()
        enrichment_model = config.enrichment_model
        if config.reset_cache:
            removed = delete_rows(store, enrichment_model.TABLE, {'model_id': config.model_id})
            logger.info('Removed %s cached %s enrichments', removed, config.model_id)

        targets = self.latest_targets(store)
        report.targets_considered = len(targets)
        cached = self.cached_targets(store) if config.only_missing else set()
        pending = [record for target_id, record in targets.items() if target_id not in cached]
        report.targets_skipped_cached = report.targets_considered - len(pending)

        for start in range(0, len(pending), config.batch_size):
            batch = pending[start:start + config.batch_size]
            report.requests_sent += len(batch)
            outcomes = Parallel(n_jobs=min(config.parallelism, len(batch)), prefer='threads')(
                delayed(self.request)(record) for record in batch)

            created_at = timezone.now()
            rows = []
            for record, outcome in zip(batch, outcomes):
                target_id = getattr(record, config.target_model.DEDUP_LOOKUP_FIELD)
                if isinstance(outcome, ProviderError):
                    report.fail(target_id, str(outcome))
                    if outcome.attempts > 1:
                        report.retry_detail.append((target_id, outcome.attempts - 1))
                    continue
                if outcome.retries:
                    report.retry_detail.append((target_id, outcome.retries))
                body = {
                    'response_text': outcome.response_text,
                    'provider_kind': config.provider_kind,
                    'finish_reason': outcome.finish_reason,
                    'chat_model_id': config.chat_model_id,
                }
                rows.append(enrichment_record(config.target_kind, target_id, config.model_id, body,
                                              created_at, created_at))

            inserted = insert_batch(store, rows).tables[enrichment_model.TABLE]
            report.responses_stored += inserted.inserted
            # Only possible if a row for the same target carries this exact created_at already
            for _ in range(inserted.deduplicated):
                report.fail(None, 'an enrichment with the same created_at already exists')
            report.batches += 1
            logger.info('Enrichment batch %s: %s stored, %s failed so far', report.batches,
                        report.responses_stored, report.failures)
        return report


ENRICHERS = {
    TextGenEnricher.name: TextGenEnricher,
}


def run_enricher(name, store, config=None, provider=None, **options):
    """Runs the enricher called name over store. Options may be given as keyword arguments instead of
    an EnricherConfig."""
    try:
        enricher_class = ENRICHERS[name]
    except KeyError:
        raise ConfigError(f'Unknown enricher "{name}", choose from {", ".join(ENRICHERS)}')
    if config is None:
        config = EnricherConfig(**options)
    return enricher_class(config, provider).run(store)
