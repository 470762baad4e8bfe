"""
The YAML file the management commands read. Each section is checked by its form in socialData.forms
and then turned into the config object of the module it drives.
"""
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml
from django.conf import settings

from unifiedsocial.log import register_secret
from socialData.anonymizer import AnonymizeConfig, AnonymizePolicy
from socialData.enrichers.runner import TARGET_TABLES, EnricherConfig
from socialData.exceptions import ConfigError, MissingSecret
from socialData.forms import AdapterConfigForm, AnonymizeConfigForm, EnricherConfigForm
from socialData.standardizers import FieldMappedStandardizer, build_registry
from socialData.store import parse_filter_spec

logger = logging.getLogger(__name__)

TOP_LEVEL_KEYS = ['stores_dir', 'adapters', 'anonymize', 'enrichers']


def clean_section(form_class, section, data):
    if not isinstance(data, dict):
        raise ConfigError(f'{section}: expected a mapping')
    form = form_class(data)
    unknown = form.unknown_keys()
    if unknown:
        raise ConfigError(f'{section}: unknown key "{unknown[0]}"')
    if not form.is_valid():
        for name, messages in form.errors.items():
            label = section if name == '__all__' else f'{section}.{name}'
            raise ConfigError(f'{label}: {" ".join(messages)}')
    return form.cleaned_data


def read_secret(section, env_name, file_path, base_dir):
    """The secret from file_path if given, otherwise from the environment variable env_name."""
    if file_path:
        path = Path(file_path)
        if not path.is_absolute():
            path = base_dir / path
        try:
            secret = path.read_text(encoding='utf-8').strip()
        except OSError as e:
            raise MissingSecret(f'{section}: cannot read secret file {path}: {e.strerror}')
        if not secret:
            raise MissingSecret(f'{section}: secret file {path} is empty')
    elif env_name:
        secret = os.environ.get(env_name, '')
        if not secret:
            raise MissingSecret(f'{section}: environment variable {env_name} is not set')
    else:
        return ''
    register_secret(secret)
    return secret


@dataclass
class CliConfig:
    path: Optional[Path] = None
    stores_dir: Optional[Path] = None
    adapters: dict = field(default_factory=dict)
    anonymize: Optional[dict] = None
    enrichers: dict = field(default_factory=dict)

    @property
    def base_dir(self):
        return self.path.parent if self.path else Path.cwd()

    def apply(self):
        if self.stores_dir is not None:
            settings.SMDT_STORES_DIR = self.stores_dir

    def registry(self):
        """The built-in adapters plus one derived adapter per adapters entry."""
        registry = build_registry()
        for name, section in self.adapters.items():
            base = registry.get(section['base'])
            registry.register(FieldMappedStandardizer(
                name, base, section['format'] or base.accepted_format, section['platform'], section['field_map']))
        return registry

    def anonymize_config(self):
        if self.anonymize is None:
            raise ConfigError('the config has no anonymize section')
        section = self.anonymize
        pepper = read_secret('anonymize', section['pepper_env'] or settings.SMDT_PEPPER_ENV, section['pepper_file'],
                             self.base_dir)
        config = AnonymizeConfig(
            src_db_name=section['src_db_name'],
            dst_db_name=section['dst_db_name'],
            pepper=pepper,
            algorithm=section['algorithm'],
            output_hex_len=section['output_hex_len'],
            chunk_rows=section['chunk_rows'],
            ask_reinit=section['ask_reinit'],
        )
        policy = AnonymizePolicy.from_dict(section['policy']) if section['policy'] else None
        return config, policy

    def enricher_config(self, name):
        try:
            section = self.enrichers[name]
        except KeyError:
            raise ConfigError(f'the config has no enrichers.{name} section')
        label = f'enrichers.{name}'
        api_key = read_secret(label, section['api_key_env'], section['api_key_file'], self.base_dir)
        target_filter = None
        if section['target_filter'] is not None:
            table = TARGET_TABLES[section['target_kind']].TABLE
            target_filter = parse_filter_spec(table, section['target_filter'])
        try:
            return EnricherConfig(
                model_id_postfix=section['model_id_postfix'],
                chat_model_id=section['chat_model_id'],
                provider_kind=section['provider_kind'],
                base_url=section['base_url'],
                api_key=api_key,
                system_prompt=section['system_prompt'],
                user_template=section['user_template'],
                only_missing=section['only_missing'],
                batch_size=section['batch_size'],
                reset_cache=section['reset_cache'],
                max_tokens=section['max_tokens'],
                target_kind=section['target_kind'],
                target_filter=target_filter,
                parallelism=section['parallelism'],
                mock_mode=section['mock_mode'],
                mock_response=section['mock_response'],
                mock_fail_marker=section['mock_fail_marker'] or None,
            )
        except ConfigError as e:
            raise ConfigError(f'{label}: {e}')


def parse_config(data, path=None):
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError('the config file must hold a mapping at the top level')
    unknown = sorted(set(data) - set(TOP_LEVEL_KEYS))
    if unknown:
        raise ConfigError(f'unknown top-level key "{unknown[0]}"')
    config = CliConfig(path=Path(path) if path else None)

    if data.get('stores_dir'):
        stores_dir = Path(str(data['stores_dir']))
        config.stores_dir = stores_dir if stores_dir.is_absolute() else config.base_dir / stores_dir
    for key in ('adapters', 'enrichers'):
        if not isinstance(data.get(key) or {}, dict):
            raise ConfigError(f'{key}: expected a mapping of names to sections')
    for name, section in (data.get('adapters') or {}).items():
        config.adapters[name] = clean_section(AdapterConfigForm, f'adapters.{name}', section)
    if data.get('anonymize') is not None:
        config.anonymize = clean_section(AnonymizeConfigForm, 'anonymize', data['anonymize'])
    for name, section in (data.get('enrichers') or {}).items():
        config.enrichers[name] = clean_section(EnricherConfigForm, f'enrichers.{name}', section)
    return config


def load_config(path):
    path = Path(path)
    try:
        with open(path, encoding='utf-8') as source:
            data = yaml.safe_load(source)
    except OSError as e:
        raise ConfigError(f'cannot read config file {path}: {e.strerror}')
    except yaml.YAMLError as e:
        raise ConfigError(f'{path} is not valid YAML: {e}')
    config = parse_config(data, path)
    logger.info('Loaded config %s (%s adapters, %s enrichers)', path, len(config.adapters), len(config.enrichers))
    return config
