from unifiedsocial.utils import listToChoices

TABLE_COMMUNITIES = 'communities'
TABLE_ACCOUNTS = 'accounts'
TABLE_POSTS = 'posts'
TABLE_ACTIONS = 'actions'
TABLE_ENTITIES = 'entities'
TABLE_ACCOUNT_ENRICHMENTS = 'account_enrichments'
TABLE_POST_ENRICHMENTS = 'post_enrichments'

# Order matters: it is the order tables are reported, exported and copied in
SCHEMA_TABLES = [
    TABLE_COMMUNITIES,
    TABLE_ACCOUNTS,
    TABLE_POSTS,
    TABLE_ACTIONS,
    TABLE_ENTITIES,
    TABLE_ACCOUNT_ENRICHMENTS,
    TABLE_POST_ENRICHMENTS,
]

COMMUNITY_TYPE_CHANNEL = 'CHANNEL'
COMMUNITY_TYPE_GROUP = 'GROUP'
COMMUNITY_TYPE_VALUES = [
    COMMUNITY_TYPE_CHANNEL,
    COMMUNITY_TYPE_GROUP,
]
COMMUNITY_TYPE_CHOICES = listToChoices(COMMUNITY_TYPE_VALUES)

ACTION_LIKE = 'LIKE'
ACTION_UPVOTE = 'UPVOTE'
ACTION_DOWNVOTE = 'DOWNVOTE'
ACTION_SHARE = 'SHARE'
ACTION_QUOTE = 'QUOTE'
ACTION_REPLY = 'REPLY'
ACTION_MENTION = 'MENTION'
ACTION_FOLLOW = 'FOLLOW'
ACTION_BLOCK = 'BLOCK'
ACTION_LINK = 'LINK'
ACTION_TYPE_VALUES = [
    ACTION_LIKE,
    ACTION_UPVOTE,
    ACTION_DOWNVOTE,
    ACTION_SHARE,
    ACTION_QUOTE,
    ACTION_REPLY,
    ACTION_MENTION,
    ACTION_FOLLOW,
    ACTION_BLOCK,
    ACTION_LINK,
]
ACTION_TYPE_CHOICES = listToChoices(ACTION_TYPE_VALUES)
# Social ties need both accounts, content engagement needs the target post
ACTIONS_REQUIRING_ACCOUNTS = [ACTION_FOLLOW, ACTION_BLOCK]
ACTIONS_REQUIRING_TARGET_POST = [ACTION_SHARE, ACTION_QUOTE, ACTION_REPLY]

ENTITY_HASHTAG = 'HASHTAG'
ENTITY_MENTION = 'MENTION'
ENTITY_URL = 'URL'
ENTITY_EMAIL = 'EMAIL'
ENTITY_MEDIA_KEY = 'MEDIA_KEY'
ENTITY_TYPE_VALUES = [
    ENTITY_HASHTAG,
    ENTITY_MENTION,
    ENTITY_URL,
    ENTITY_EMAIL,
    ENTITY_MEDIA_KEY,
]
ENTITY_TYPE_CHOICES = listToChoices(ENTITY_TYPE_VALUES)
ENTITY_BODY_PREFIXES = {
    ENTITY_HASHTAG: '#',
    ENTITY_MENTION: '@',
}
REDACTABLE_ENTITY_TYPES = [ENTITY_MENTION, ENTITY_EMAIL, ENTITY_URL]

TARGET_KIND_ACCOUNT = 'ACCOUNT'
TARGET_KIND_POST = 'POST'
TARGET_KIND_VALUES = [
    TARGET_KIND_ACCOUNT,
    TARGET_KIND_POST,
]

FORMAT_JSONL = 'JSONL'
FORMAT_CSV = 'CSV'
FORMAT_VALUES = [
    FORMAT_JSONL,
    FORMAT_CSV,
]

ADAPTER_GENERIC_MICROBLOG = 'generic_microblog'
ADAPTER_GENERIC_FORUM = 'generic_forum'
ADAPTER_IDENTITY = 'identity'

ALGORITHM_SHA256 = 'SHA256'
ALGORITHM_SHA512 = 'SHA512'
ALGORITHM_WHIRLPOOL = 'WHIRLPOOL'
ALGORITHM_BLAKE2B = 'BLAKE2B'
ALGORITHM_VALUES = [
    ALGORITHM_SHA256,
    ALGORITHM_SHA512,
    ALGORITHM_WHIRLPOOL,
    ALGORITHM_BLAKE2B,
]
# hashlib names
ALGORITHM_HASHLIB_NAMES = {
    ALGORITHM_SHA256: 'sha256',
    ALGORITHM_SHA512: 'sha512',
    ALGORITHM_WHIRLPOOL: 'whirlpool',
    ALGORITHM_BLAKE2B: 'blake2b',
}
MIN_OUTPUT_HEX_LEN = 8

NETWORK_KIND_INTERACTION = 'interaction'
NETWORK_KIND_COOCCURRENCE = 'cooccurrence'
NETWORK_KIND_BIPARTITE = 'bipartite'

WEIGHTING_COUNT = 'COUNT'
WEIGHTING_BINARY = 'BINARY'
WEIGHTING_VALUES = [
    WEIGHTING_COUNT,
    WEIGHTING_BINARY,
]

BIPARTITE_LEFT = 'LEFT'
BIPARTITE_RIGHT = 'RIGHT'
BIPARTITE_RIGHT_DOMAIN = 'DOMAIN'

PROVIDER_OPENAI_COMPAT = 'OPENAI_COMPAT'
PROVIDER_ANTHROPIC = 'ANTHROPIC'
PROVIDER_GEMINI = 'GEMINI'
PROVIDER_MOCK = 'MOCK'
PROVIDER_KIND_VALUES = [
    PROVIDER_OPENAI_COMPAT,
    PROVIDER_ANTHROPIC,
    PROVIDER_GEMINI,
    PROVIDER_MOCK,
]
MOCK_MODE_ECHO = 'echo'
MOCK_MODE_FIXED = 'fixed'
MOCK_MODE_VALUES = [
    MOCK_MODE_ECHO,
    MOCK_MODE_FIXED,
]
RETRY_STATUS_CODES = {429, 500, 502, 503, 504}
AUTH_STATUS_CODES = {401, 403}

ENRICHER_TEXTGEN = 'textgen'

AVAILABLE = 'available'
ABSENT = 'absent'
AVAILABLE_GLYPH = '+'
ABSENT_GLYPH = '-'

# Deterministic fixture day, the same range the hourly SHARE network recipe uses
FIXTURE_DAY_START = '2023-05-14T00:00:00Z'
FIXTURE_DAY_END = '2023-05-15T00:00:00Z'
FIXTURE_MALFORMED_PER_FILE = 3
FIXTURE_MICROBLOG_FILE = 'microblog.jsonl'
FIXTURE_FORUM_FILE = 'forum.jsonl'
FIXTURE_MANIFEST_FILE = 'manifest.json'
