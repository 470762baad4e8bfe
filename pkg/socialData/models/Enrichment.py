from django.core.exceptions import ValidationError
from django.db import models

from unifiedsocial import constants as CONS
from .Record import StandardRecord


class Enrichment(StandardRecord):
    """Model output attached to an account or a post, keyed by model_id."""
    class Meta:
        abstract = True

    TARGET_KIND = None
    TARGET_FIELD = None

    model_id = models.TextField(null=False, blank=False)
    body = models.JSONField(null=False, blank=True)
    created_at = models.DateTimeField(null=False, blank=False)
    retrieved_at = models.DateTimeField(null=False, blank=False)

    @classmethod
    def schema_fields(cls):
        return [cls.TARGET_FIELD, 'model_id', 'body', 'created_at', 'retrieved_at']

    @property
    def target_kind(self):
        return self.TARGET_KIND

    @property
    def target_id(self):
        return getattr(self, self.TARGET_FIELD)

    def clean(self):
        if not isinstance(self.body, dict):
            raise ValidationError({'body': 'must be a JSON object'})


class AccountEnrichment(Enrichment):
    class Meta:
        app_label = 'socialData'
        db_table = CONS.TABLE_ACCOUNT_ENRICHMENTS
        constraints = [
            models.UniqueConstraint(fields=['account_id', 'model_id', 'created_at'],
                                    name='account_enrichment_unique'),
        ]

    TABLE = CONS.TABLE_ACCOUNT_ENRICHMENTS
    TARGET_KIND = CONS.TARGET_KIND_ACCOUNT
    TARGET_FIELD = 'account_id'
    ID_FIELDS = ['account_id']
    DEDUP_FIELDS = ['account_id', 'model_id', 'created_at']
    DEDUP_LOOKUP_FIELD = 'account_id'

    account_id = models.TextField(null=False, blank=False)


class PostEnrichment(Enrichment):
    class Meta:
        app_label = 'socialData'
        db_table = CONS.TABLE_POST_ENRICHMENTS
        constraints = [
            models.UniqueConstraint(fields=['post_id', 'model_id', 'created_at'], name='post_enrichment_unique'),
        ]

    TABLE = CONS.TABLE_POST_ENRICHMENTS
    TARGET_KIND = CONS.TARGET_KIND_POST
    TARGET_FIELD = 'post_id'
    ID_FIELDS = ['post_id']
    DEDUP_FIELDS = ['post_id', 'model_id', 'created_at']
    DEDUP_LOOKUP_FIELD = 'post_id'

    post_id = models.TextField(null=False, blank=False)


ENRICHMENT_MODELS = {
    CONS.TARGET_KIND_ACCOUNT: AccountEnrichment,
    CONS.TARGET_KIND_POST: PostEnrichment,
}


def enrichment_record(target_kind, target_id, model_id, body, created_at, retrieved_at):
    model = ENRICHMENT_MODELS[target_kind]
    return model(**{model.TARGET_FIELD: target_id}, model_id=model_id, body=body,
                 created_at=created_at, retrieved_at=retrieved_at)
