from django.core.exceptions import ValidationError
from django.db import models

from unifiedsocial import constants as CONS
from .Record import StandardRecord, check_not_after


class Post(StandardRecord):
    class Meta:
        app_label = 'socialData'
        db_table = CONS.TABLE_POSTS
        constraints = [
            models.UniqueConstraint(fields=['post_id', 'retrieved_at'], name='post_snapshot_unique'),
        ]

    TABLE = CONS.TABLE_POSTS
    COUNT_FIELDS = ['like_count', 'dislike_count', 'view_count', 'share_count', 'comment_count',
                    'quote_count', 'bookmark_count']
    GEO_FIELDS = ['location']
    ID_FIELDS = ['post_id', 'account_id', 'conversation_id', 'community_id']
    DEDUP_FIELDS = ['post_id', 'retrieved_at']
    DEDUP_LOOKUP_FIELD = 'post_id'

    post_id = models.TextField(null=False, blank=False)
    account_id = models.TextField(null=False, blank=False)
    conversation_id = models.TextField(null=True, blank=True)
    community_id = models.TextField(null=True, blank=True)
    body = models.TextField(null=False, blank=True, default='')
    location = models.JSONField(null=True, blank=True)
    like_count = models.PositiveBigIntegerField(null=True, blank=True)
    dislike_count = models.PositiveBigIntegerField(null=True, blank=True)
    view_count = models.PositiveBigIntegerField(null=True, blank=True)
    share_count = models.PositiveBigIntegerField(null=True, blank=True)
    comment_count = models.PositiveBigIntegerField(null=True, blank=True)
    quote_count = models.PositiveBigIntegerField(null=True, blank=True)
    bookmark_count = models.PositiveBigIntegerField(null=True, blank=True)
    created_at = models.DateTimeField(null=False, blank=False)
    retrieved_at = models.DateTimeField(null=False, blank=False)

    def clean(self):
        errors = []
        check_not_after(errors, self, 'created_at', 'retrieved_at')
        if errors:
            raise ValidationError(errors)
