from django.core.exceptions import ValidationError
from django.db import models

from unifiedsocial import constants as CONS
from .Record import StandardRecord


class Entity(StandardRecord):
    """Hashtags, mentions, urls, emails and media keys found in a post. created_at is the post's."""
    class Meta:
        app_label = 'socialData'
        db_table = CONS.TABLE_ENTITIES
        constraints = [
            models.UniqueConstraint(fields=['post_id', 'entity_type', 'body', 'created_at'], name='entity_unique'),
        ]

    TABLE = CONS.TABLE_ENTITIES
    ID_FIELDS = ['post_id']
    DEDUP_FIELDS = ['post_id', 'entity_type', 'body', 'created_at']
    DEDUP_LOOKUP_FIELD = 'post_id'

    post_id = models.TextField(null=False, blank=False)
    body = models.TextField(null=False, blank=False)
    entity_type = models.CharField(max_length=16, null=False, blank=False, choices=CONS.ENTITY_TYPE_CHOICES)
    created_at = models.DateTimeField(null=False, blank=False)
    retrieved_at = models.DateTimeField(null=False, blank=False)

    def clean(self):
        prefix = CONS.ENTITY_BODY_PREFIXES.get(self.entity_type)
        if prefix and self.body and not (self.body.startswith(prefix) and len(self.body) > len(prefix)):
            raise ValidationError(f'{self.entity_type} body must start with "{prefix}"')
