from unifiedsocial import constants as CONS
from socialData.exceptions import MalformedRecord
from socialData.models import TABLE_MODELS
from .base import Standardizer

# First match wins: more specific key sets come first
TABLE_SIGNATURES = [
    ('community_type', CONS.TABLE_COMMUNITIES),
    ('action_type', CONS.TABLE_ACTIONS),
    ('entity_type', CONS.TABLE_ENTITIES),
    (('model_id', 'account_id'), CONS.TABLE_ACCOUNT_ENRICHMENTS),
    (('model_id', 'post_id'), CONS.TABLE_POST_ENRICHMENTS),
    ('post_id', CONS.TABLE_POSTS),
    ('account_id', CONS.TABLE_ACCOUNTS),
]


def infer_table(raw):
    for keys, table in TABLE_SIGNATURES:
        keys = (keys,) if isinstance(keys, str) else keys
        if all(key in raw for key in keys):
            return table
    raise MalformedRecord('cannot tell which table this record belongs to')


class IdentityStandardizer(Standardizer):
    """Reads back this toolkit's own JSON Lines exports, one table row per line."""
    name = CONS.ADAPTER_IDENTITY
    accepted_format = CONS.FORMAT_JSONL
    platform = 'unified'

    def standardize(self, raw, info):
        model = TABLE_MODELS[infer_table(raw)]
        try:
            return [model.from_json_dict(raw)]
        except (ValueError, OverflowError) as e:
            raise MalformedRecord(str(e))
