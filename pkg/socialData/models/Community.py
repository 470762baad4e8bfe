from django.core.exceptions import ValidationError
from django.db import models

from unifiedsocial import constants as CONS
from .Record import StandardRecord, check_not_after


class Community(StandardRecord):
    """Channels (one-to-many broadcast) and groups (many-to-many discussion)."""
    class Meta:
        app_label = 'socialData'
        db_table = CONS.TABLE_COMMUNITIES
        constraints = [
            models.UniqueConstraint(fields=['community_id', 'retrieved_at'], name='community_snapshot_unique'),
        ]

    TABLE = CONS.TABLE_COMMUNITIES
    COUNT_FIELDS = ['member_count', 'post_count']
    ID_FIELDS = ['community_id', 'owner_account_id']
    DEDUP_FIELDS = ['community_id', 'retrieved_at']
    DEDUP_LOOKUP_FIELD = 'community_id'

    community_id = models.TextField(null=False, blank=False)
    community_type = models.CharField(max_length=16, null=False, blank=False, choices=CONS.COMMUNITY_TYPE_CHOICES)
    community_username = models.TextField(null=True, blank=True)
    community_name = models.TextField(null=True, blank=True)
    bio = models.TextField(null=True, blank=True)
    is_public = models.BooleanField(null=True, blank=True)
    member_count = models.PositiveBigIntegerField(null=True, blank=True)
    post_count = models.PositiveBigIntegerField(null=True, blank=True)
    profile_image_url = models.TextField(null=True, blank=True)
    owner_account_id = models.TextField(null=True, blank=True)
    created_at = models.DateTimeField(null=True, blank=True)
    retrieved_at = models.DateTimeField(null=False, blank=False)

    def clean(self):
        errors = []
        check_not_after(errors, self, 'created_at', 'retrieved_at')
        if errors:
            raise ValidationError(errors)
