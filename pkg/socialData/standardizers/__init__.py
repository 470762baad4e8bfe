from .base import (AdapterDescriptor, SourceInfo, Standardizer, StandardizerRegistry, register_adapter,
                   standardize_record)
from .configured import FieldMappedStandardizer
from .entities import extract_entities, iter_entity_matches, normalize_entity
from .forum import GenericForumStandardizer
from .identity import IdentityStandardizer
from .ingestion import IngestReport, run_ingestion
from .microblog import GenericMicroblogStandardizer
from .registry import build_registry, default_registry
