from .base import StandardizerRegistry
from .forum import GenericForumStandardizer
from .identity import IdentityStandardizer
from .microblog import GenericMicroblogStandardizer

BUILTIN_STANDARDIZERS = [
    GenericMicroblogStandardizer,
    GenericForumStandardizer,
    IdentityStandardizer,
]

_default_registry = None


def build_registry():
    """A fresh registry holding only the built-in adapters."""
    registry = StandardizerRegistry()
    for standardizer in BUILTIN_STANDARDIZERS:
        registry.register(standardizer())
    return registry


def default_registry():
    global _default_registry
    if _default_registry is None:
        _default_registry = build_registry()
    return _default_registry
