from unifiedsocial import constants as CONS
from .Record import StandardRecord
from .Community import Community
from .Account import Account
from .Post import Post
from .Action import Action
from .Entity import Entity
from .Enrichment import AccountEnrichment, PostEnrichment, ENRICHMENT_MODELS, enrichment_record

TABLE_MODELS = {
    CONS.TABLE_COMMUNITIES: Community,
    CONS.TABLE_ACCOUNTS: Account,
    CONS.TABLE_POSTS: Post,
    CONS.TABLE_ACTIONS: Action,
    CONS.TABLE_ENTITIES: Entity,
    CONS.TABLE_ACCOUNT_ENRICHMENTS: AccountEnrichment,
    CONS.TABLE_POST_ENRICHMENTS: PostEnrichment,
}
