"""
Pseudonymized copies of a store. Identifiers are replaced by peppered hash tokens, PII entities in
free text are replaced by "<TYPE:token>" markers, and selected fields are nulled. The same source
value always maps to the same token so joins between tables survive the copy.
"""
import hashlib
import logging
from dataclasses import dataclass, field
from functools import lru_cache

from django.conf import settings
from django.db import DatabaseError

from unifiedsocial import constants as CONS
from unifiedsocial.log import register_secret
from socialData.exceptions import (AnonymizationFailed, ConfigError, DestinationExistsError, MissingSecret,
                                   PolicyError, SmdtError, TokenCollision, UnknownField, UnknownTable,
                                   UnsupportedAlgorithm)
from socialData.models import TABLE_MODELS
from socialData.standardizers.entities import iter_entity_matches
from socialData.store import (clear_incomplete, close_store, init_store, insert_batch, iter_rows,
                              mark_incomplete, open_store, store_exists)

logger = logging.getLogger(__name__)

TEXT_FIELD_TYPES = ('CharField', 'TextField')

# Fields holding the same kind of identifier. Hashing has to cover all of a group or none of it,
# otherwise joins between the hashed and the plain side break.
ID_FIELD_GROUPS = {
    'account': [
        (CONS.TABLE_ACCOUNTS, 'account_id'),
        (CONS.TABLE_POSTS, 'account_id'),
        (CONS.TABLE_ACTIONS, 'originator_account_id'),
        (CONS.TABLE_ACTIONS, 'target_account_id'),
        (CONS.TABLE_COMMUNITIES, 'owner_account_id'),
        (CONS.TABLE_ACCOUNT_ENRICHMENTS, 'account_id'),
    ],
    'post': [
        (CONS.TABLE_POSTS, 'post_id'),
        (CONS.TABLE_POSTS, 'conversation_id'),
        (CONS.TABLE_ACTIONS, 'originator_post_id'),
        (CONS.TABLE_ACTIONS, 'target_post_id'),
        (CONS.TABLE_ENTITIES, 'post_id'),
        (CONS.TABLE_POST_ENRICHMENTS, 'post_id'),
    ],
    'community': [
        (CONS.TABLE_COMMUNITIES, 'community_id'),
        (CONS.TABLE_POSTS, 'community_id'),
    ],
}


def hashlib_name(algorithm):
    """The hashlib constructor name for algorithm, if this Python can actually compute it."""
    try:
        name = CONS.ALGORITHM_HASHLIB_NAMES[algorithm]
    except (KeyError, TypeError):
        raise UnsupportedAlgorithm(f'Unknown algorithm "{algorithm}", choose from {", ".join(CONS.ALGORITHM_VALUES)}')
    try:
        hashlib.new(name)
    except ValueError:
        raise UnsupportedAlgorithm(f'{algorithm} is not provided by the hashlib/OpenSSL build in use')
    return name


def digest_hex_len(algorithm):
    return hashlib.new(hashlib_name(algorithm)).digest_size * 2


def hash_value(value, algorithm, pepper, output_hex_len):
    """Lowercase hex digest of pepper + value (UTF-8, no separator), cut to output_hex_len characters."""
    if not value:
        raise ValueError('Cannot hash an empty value')
    digest = hashlib.new(hashlib_name(algorithm), (pepper + value).encode('utf-8'))
    return digest.hexdigest()[:output_hex_len]


@dataclass
class AnonymizeConfig:
    src_db_name: str
    dst_db_name: str
    pepper: str = field(repr=False)
    algorithm: str = CONS.ALGORITHM_SHA256
    output_hex_len: int = 64
    chunk_rows: int = 5000
    ask_reinit: bool = True

    def __post_init__(self):
        if not self.pepper:
            raise MissingSecret('The pepper must not be empty')
        register_secret(self.pepper)
        if self.src_db_name == self.dst_db_name:
            raise ConfigError('Source and destination store must differ')
        full_length = digest_hex_len(self.algorithm)
        if isinstance(self.output_hex_len, bool) or not isinstance(self.output_hex_len, int):
            raise ConfigError('output_hex_len must be an integer')
        if self.output_hex_len % 2 or not CONS.MIN_OUTPUT_HEX_LEN <= self.output_hex_len <= full_length:
            raise ConfigError(f'output_hex_len must be even and between {CONS.MIN_OUTPUT_HEX_LEN} and '
                              f'{full_length} for {self.algorithm}')
        if isinstance(self.chunk_rows, bool) or not isinstance(self.chunk_rows, int) or self.chunk_rows < 1:
            raise ConfigError('chunk_rows must be a positive integer')


@dataclass
class AnonymizePolicy:
    hashed_fields: dict = field(default_factory=dict)
    redacted_text_fields: dict = field(default_factory=dict)
    entity_redaction_types: list = field(default_factory=list)
    dropped_fields: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data):
        unknown = set(data) - {'hashed_fields', 'redacted_text_fields', 'entity_redaction_types', 'dropped_fields'}
        if unknown:
            raise ConfigError(f'Unknown policy keys: {", ".join(sorted(unknown))}')
        policy = cls(
            hashed_fields=data.get('hashed_fields') or {},
            redacted_text_fields=data.get('redacted_text_fields') or {},
            entity_redaction_types=data.get('entity_redaction_types') or [],
            dropped_fields=data.get('dropped_fields') or {},
        )
        policy.validate()
        return policy

    def fields(self, section, table):
        return getattr(self, section).get(table, [])

    def is_hashed(self, table, name):
        return name in self.fields('hashed_fields', table)

    def validate(self):
        listed = {}
        for section in ('hashed_fields', 'redacted_text_fields', 'dropped_fields'):
            mapping = getattr(self, section)
            if not isinstance(mapping, dict):
                raise PolicyError(f'{section} must map table names to field lists')
            for table, names in mapping.items():
                if table not in TABLE_MODELS:
                    raise UnknownTable(table)
                model = TABLE_MODELS[table]
                for name in names:
                    if name not in model.schema_fields():
                        raise UnknownField(table, name)
                    if (table, name) in listed:
                        raise PolicyError(f'{table}.{name} is listed in both {listed[(table, name)]} and {section}')
                    listed[(table, name)] = section
                    self._check_field(section, model, name)

        for entity_type in self.entity_redaction_types:
            if entity_type not in CONS.REDACTABLE_ENTITY_TYPES:
                raise PolicyError(f'Cannot redact entity type "{entity_type}", choose from '
                                  f'{", ".join(CONS.REDACTABLE_ENTITY_TYPES)}')

        for group, members in ID_FIELD_GROUPS.items():
            hashed = [member for member in members if self.is_hashed(*member)]
            if hashed and len(hashed) != len(members):
                missing = ', '.join(f'{t}.{f}' for t, f in members if (t, f) not in hashed)
                raise PolicyError(f'{group} ids are hashed in some tables but not in {missing}')

    def _check_field(self, section, model, name):
        model_field = model._meta.get_field(name)
        if section in ('hashed_fields', 'redacted_text_fields') and \
                model_field.get_internal_type() not in TEXT_FIELD_TYPES:
            raise PolicyError(f'{model.TABLE}.{name} is not a text field and cannot be {section.split("_")[0]}')
        if section == 'dropped_fields' and (not model_field.null or name in model.DEDUP_FIELDS):
            raise PolicyError(f'{model.TABLE}.{name} is required or part of the row key and cannot be dropped')


DEFAULT_POLICY = AnonymizePolicy(
    hashed_fields={
        CONS.TABLE_COMMUNITIES: ['community_id', 'community_username', 'owner_account_id'],
        CONS.TABLE_ACCOUNTS: ['account_id', 'user_name', 'profile_name'],
        CONS.TABLE_POSTS: ['post_id', 'account_id', 'conversation_id', 'community_id'],
        CONS.TABLE_ACTIONS: ['originator_account_id', 'originator_post_id', 'target_account_id', 'target_post_id'],
        CONS.TABLE_ENTITIES: ['post_id'],
        CONS.TABLE_ACCOUNT_ENRICHMENTS: ['account_id'],
        CONS.TABLE_POST_ENRICHMENTS: ['post_id'],
    },
    redacted_text_fields={
        CONS.TABLE_COMMUNITIES: ['bio'],
        CONS.TABLE_ACCOUNTS: ['bio'],
        CONS.TABLE_POSTS: ['body'],
        CONS.TABLE_ENTITIES: ['body'],
    },
    entity_redaction_types=[CONS.ENTITY_MENTION, CONS.ENTITY_EMAIL],
    dropped_fields={
        CONS.TABLE_COMMUNITIES: ['profile_image_url'],
        CONS.TABLE_ACCOUNTS: ['profile_image_url', 'location'],
        CONS.TABLE_POSTS: ['location'],
    },
)


class Pseudonymizer:
    """Issues tokens for one run and fails loudly if two different values ever share one."""

    def __init__(self, algorithm, pepper, output_hex_len, cache_size=None):
        self.algorithm = algorithm
        self._pepper = pepper
        self.output_hex_len = output_hex_len
        self._owners = {}
        cache_size = settings.ANONYMIZER_TOKEN_CACHE_SIZE if cache_size is None else cache_size
        self.token = lru_cache(maxsize=cache_size)(self._token)

    @classmethod
    def from_config(cls, config):
        return cls(config.algorithm, config.pepper, config.output_hex_len)

    def _token(self, value):
        token = hash_value(value, self.algorithm, self._pepper, self.output_hex_len)
        owner = self._owners.setdefault(token, value)
        if owner != value:
            raise TokenCollision(f'Two distinct values hash to the same {self.output_hex_len}-character token; '
                                 f'use a longer output_hex_len')
        return token

    def __call__(self, value):
        return self.token(value)

    @property
    def tokens_issued(self):
        return len(self._owners)

    def __repr__(self):
        return f'<Pseudonymizer {self.algorithm}/{self.output_hex_len}>'


def redaction_marker(entity_type, body, hasher):
    value = body[1:] if entity_type == CONS.ENTITY_MENTION else body
    return f'<{entity_type}:{hasher(value)}>'


def anonymize_text(body, policy, hasher):
    """
    Replaces every entity of a type listed in policy.entity_redaction_types with "<TYPE:token>".
    Mentions are hashed without their "@" so they match the token of the account id. Returns the new
    text and the number of replacements per entity type.
    """
    counts = {entity_type: 0 for entity_type in policy.entity_redaction_types}
    if not body or not counts:
        return body, counts
    parts = []
    last = 0
    for entity_type, entity, start, end in iter_entity_matches(body):
        if entity_type not in counts:
            continue
        parts.append(body[last:start])
        parts.append(redaction_marker(entity_type, entity, hasher))
        last = end
        counts[entity_type] += 1
    parts.append(body[last:])
    return ''.join(parts), counts


def anonymize_entity_body(entity_type, body, policy, hasher):
    """Entity rows hold a single entity; mentions keep their "@" shape."""
    if entity_type not in policy.entity_redaction_types:
        return body, False
    if entity_type == CONS.ENTITY_MENTION:
        return '@' + hasher(body[1:]), True
    return redaction_marker(entity_type, body, hasher), True


@dataclass
class AnonymizeReport:
    copied: dict = field(default_factory=lambda: {table: 0 for table in CONS.SCHEMA_TABLES})
    tokens_issued: int = 0
    redactions: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            'copied': dict(self.copied),
            'tokens_issued': self.tokens_issued,
            'redactions': dict(self.redactions),
        }


class Anonymizer:
    """
    Copies config.src_db_name into config.dst_db_name table by table, chunk_rows at a time. An existing
    destination is only replaced when forced, when ask_reinit is off, or when confirm(dst_name) agrees.
    """

    def __init__(self, config, policy=None, confirm=None, force=False):
        self.config = config
        self.policy = DEFAULT_POLICY if policy is None else policy
        self.policy.validate()
        self.confirm = confirm
        self.force = force
        self.hasher = Pseudonymizer.from_config(config)
        self.report = AnonymizeReport(redactions={t: 0 for t in self.policy.entity_redaction_types})

    def check_destination(self):
        name = self.config.dst_db_name
        if not store_exists(name) or self.force or not self.config.ask_reinit:
            return
        if self.confirm is not None and self.confirm(name):
            return
        raise DestinationExistsError(f'Destination store "{name}" exists; confirm reinitialization or force it')

    def anonymize_row(self, table, row):
        model = TABLE_MODELS[table]
        values = {name: getattr(row, name) for name in model.schema_fields()}
        for name in self.policy.fields('hashed_fields', table):
            if values[name] not in (None, ''):
                values[name] = self.hasher(values[name])
        for name in self.policy.fields('redacted_text_fields', table):
            if values[name] in (None, ''):
                continue
            if table == CONS.TABLE_ENTITIES and name == 'body':
                values[name], redacted = anonymize_entity_body(row.entity_type, values[name], self.policy,
                                                               self.hasher)
                if redacted:
                    self.report.redactions[row.entity_type] += 1
            else:
                values[name], counts = anonymize_text(values[name], self.policy, self.hasher)
                for entity_type, n in counts.items():
                    self.report.redactions[entity_type] += n
        for name in self.policy.fields('dropped_fields', table):
            values[name] = None
        return model(**values)

    def run(self):
        source = open_store(self.config.src_db_name)
        try:
            self.check_destination()
            destination = init_store(self.config.dst_db_name, overwrite=True)
        except BaseException:
            close_store(source)
            raise
        try:
            return self.copy(source, destination)
        finally:
            close_store(source)
            close_store(destination)

    def copy(self, source, destination):
        mark_incomplete(destination.name, f'anonymization from {source.name} in progress')
        logger.info('Anonymizing %s into %s with %s', source.name, destination.name, self.config.algorithm)
        try:
            for table in CONS.SCHEMA_TABLES:
                for chunk in iter_rows(source, table, self.config.chunk_rows):
                    rows = [self.anonymize_row(table, row) for row in chunk]
                    inserted = insert_batch(destination, rows, validate=False)
                    self.report.copied[table] += inserted.tables[table].received
        except SmdtError:
            logger.error('Anonymization into %s failed, store left marked incomplete', destination.name)
            raise
        except DatabaseError as e:
            raise AnonymizationFailed(f'Anonymization into "{destination.name}" failed: {e}') from e
        clear_incomplete(destination.name)
        self.report.tokens_issued = self.hasher.tokens_issued
        logger.info('Anonymized %s rows, %s tokens issued', sum(self.report.copied.values()),
                    self.report.tokens_issued)
        return self.report


def run_anonymization(config, policy=None, confirm=None, force=False):
    return Anonymizer(config, policy, confirm=confirm, force=force).run()
