from django.db import models

from unifiedsocial import constants as CONS
from .Record import StandardRecord


class Account(StandardRecord):
    """A profile as it looked at retrieved_at; later retrievals are new rows."""
    class Meta:
        app_label = 'socialData'
        db_table = CONS.TABLE_ACCOUNTS
        constraints = [
            models.UniqueConstraint(fields=['account_id', 'retrieved_at'], name='account_snapshot_unique'),
        ]

    TABLE = CONS.TABLE_ACCOUNTS
    COUNT_FIELDS = ['post_count', 'friend_count', 'follower_count']
    GEO_FIELDS = ['location']
    ID_FIELDS = ['account_id']
    DEDUP_FIELDS = ['account_id', 'retrieved_at']
    DEDUP_LOOKUP_FIELD = 'account_id'

    account_id = models.TextField(null=False, blank=False)
    user_name = models.TextField(null=True, blank=True)
    profile_name = models.TextField(null=True, blank=True)
    bio = models.TextField(null=True, blank=True)
    location = models.JSONField(null=True, blank=True)
    post_count = models.PositiveBigIntegerField(null=True, blank=True)
    friend_count = models.PositiveBigIntegerField(null=True, blank=True)
    follower_count = models.PositiveBigIntegerField(null=True, blank=True)
    is_verified = models.BooleanField(null=True, blank=True)
    profile_image_url = models.TextField(null=True, blank=True)
    created_at = models.DateTimeField(null=True, blank=True)
    retrieved_at = models.DateTimeField(null=False, blank=False)
