from django.core.exceptions import ValidationError
from django.db import models

from unifiedsocial import constants as CONS
from .Record import StandardRecord


class Action(StandardRecord):
    """One dated edge between accounts and/or posts."""
    class Meta:
        app_label = 'socialData'
        db_table = CONS.TABLE_ACTIONS
        # Nullable members mean SQLite treats NULLs as distinct here; insert_batch dedups on
        # the full key in Python so a NULL matches a NULL
        constraints = [
            models.UniqueConstraint(
                fields=['originator_account_id', 'originator_post_id', 'target_account_id', 'target_post_id',
                        'action_type', 'created_at'],
                name='action_unique',
            ),
        ]

    TABLE = CONS.TABLE_ACTIONS
    ID_FIELDS = ['originator_account_id', 'originator_post_id', 'target_account_id', 'target_post_id']
    DEDUP_FIELDS = ['originator_account_id', 'originator_post_id', 'target_account_id', 'target_post_id',
                    'action_type', 'created_at']
    DEDUP_LOOKUP_FIELD = 'created_at'

    originator_account_id = models.TextField(null=True, blank=True)
    originator_post_id = models.TextField(null=True, blank=True)
    target_account_id = models.TextField(null=True, blank=True)
    target_post_id = models.TextField(null=True, blank=True)
    action_type = models.CharField(max_length=16, null=False, blank=False, choices=CONS.ACTION_TYPE_CHOICES)
    created_at = models.DateTimeField(null=False, blank=False)
    retrieved_at = models.DateTimeField(null=False, blank=False)

    def clean(self):
        errors = []
        if not (self.originator_account_id or self.originator_post_id):
            errors.append(ValidationError('an originator account or post is required'))
        if not (self.target_account_id or self.target_post_id):
            errors.append(ValidationError('a target account or post is required'))
        if self.action_type in CONS.ACTIONS_REQUIRING_ACCOUNTS and \
                not (self.originator_account_id and self.target_account_id):
            errors.append(ValidationError(f'{self.action_type} needs originator and target accounts'))
        if self.action_type in CONS.ACTIONS_REQUIRING_TARGET_POST and not self.target_post_id:
            errors.append(ValidationError(f'{self.action_type} needs a target post'))
        if errors:
            raise ValidationError(errors)
