from unifiedsocial import constants as CONS
from socialData.exceptions import MalformedRecord
from socialData.models import Account, Action, Post
from .base import Standardizer, as_bool, as_count, as_id, as_timestamp

# raw key -> Post field
ENGAGEMENT_COUNTS = {
    'like_count': 'like_count',
    'share_count': 'share_count',
    'reply_count': 'comment_count',
    'quote_count': 'quote_count',
    'view_count': 'view_count',
    'bookmark_count': 'bookmark_count',
}

# raw key holding the referenced post -> (action type, raw key holding that post's author)
REFERENCES = [
    ('repost_of', CONS.ACTION_SHARE, 'repost_of_user'),
    ('quote_of', CONS.ACTION_QUOTE, 'quote_of_user'),
    ('reply_to', CONS.ACTION_REPLY, 'reply_to_user'),
]


class GenericMicroblogStandardizer(Standardizer):
    """
    Twitter-like JSON Lines: one post per line with its author embedded under "user", engagement
    counts, repost/quote/reply references and structured mentions. No community information.
    """
    name = CONS.ADAPTER_GENERIC_MICROBLOG
    accepted_format = CONS.FORMAT_JSONL
    platform = 'microblog'

    def standardize(self, raw, info):
        post_id = as_id(self.required(raw, 'id'))
        account_id = as_id(self.required(raw, 'user.id'))
        created_at = as_timestamp(self.required(raw, 'ts'))
        retrieved_at = self.retrieved_at(raw.get('retrieved_at'), info)
        body = raw.get('text') or ''
        if not isinstance(body, str):
            raise MalformedRecord('"text" must be a string')

        user = raw['user']
        account = Account(
            account_id=account_id,
            user_name=user.get('name'),
            profile_name=user.get('display_name'),
            bio=user.get('description'),
            location=user.get('geo'),
            post_count=as_count(user.get('statuses_count')),
            friend_count=as_count(user.get('friends_count')),
            follower_count=as_count(user.get('followers_count')),
            is_verified=as_bool(user.get('verified')),
            profile_image_url=user.get('profile_image_url'),
            created_at=as_timestamp(user.get('created_at')),
            retrieved_at=retrieved_at,
        )

        conversation_id = as_id(raw.get('conversation_id'))
        if conversation_id is None and not raw.get('reply_to'):
            # Not a reply, so the post starts its own thread
            conversation_id = post_id
        post = Post(
            post_id=post_id,
            account_id=account_id,
            conversation_id=conversation_id,
            body=body,
            location=raw.get('geo'),
            created_at=created_at,
            retrieved_at=retrieved_at,
            **{field: as_count(raw.get(key)) for key, field in ENGAGEMENT_COUNTS.items()},
        )

        media_keys = raw.get('media_keys')
        if media_keys is not None and not isinstance(media_keys, list):
            raise MalformedRecord('"media_keys" must be a list')
        records = [account, post]
        records.extend(self.entities(post_id, body, created_at, retrieved_at, media_keys))

        for key, action_type, author_key in REFERENCES:
            target_post_id = as_id(raw.get(key))
            if target_post_id is None:
                continue
            records.append(Action(
                originator_account_id=account_id,
                originator_post_id=post_id,
                target_account_id=as_id(raw.get(author_key)),
                target_post_id=target_post_id,
                action_type=action_type,
                created_at=created_at,
                retrieved_at=retrieved_at,
            ))

        mentions = raw.get('mentions') or []
        if not isinstance(mentions, list):
            raise MalformedRecord('"mentions" must be a list')
        for mention in mentions:
            target_account_id = as_id(mention.get('id')) if isinstance(mention, dict) else None
            if target_account_id is None:
                continue
            records.append(Action(
                originator_account_id=account_id,
                originator_post_id=post_id,
                target_account_id=target_account_id,
                action_type=CONS.ACTION_MENTION,
                created_at=created_at,
                retrieved_at=retrieved_at,
            ))
        return records
