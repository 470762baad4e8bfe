from unifiedsocial import constants as CONS
from socialData.exceptions import MalformedRecord
from socialData.models import Account, Action, Community, Post
from .base import Standardizer, as_bool, as_count, as_id, as_timestamp

KIND_SUBMISSION = 'submission'
KIND_COMMENT = 'comment'
DELETED_AUTHOR = '[deleted]'


class GenericForumStandardizer(Standardizer):
    """
    Reddit-like JSON Lines: submissions and comments, each carrying the subforum it was posted in.
    Score becomes like_count; comments reply to their parent_id and belong to the thread in link_id.
    """
    name = CONS.ADAPTER_GENERIC_FORUM
    accepted_format = CONS.FORMAT_JSONL
    platform = 'forum'

    def standardize(self, raw, info):
        post_id = as_id(self.required(raw, 'id'))
        created_at = as_timestamp(self.required(raw, 'created_utc'))
        retrieved_at = self.retrieved_at(raw.get('retrieved_at'), info)
        kind = raw.get('kind', KIND_SUBMISSION)
        if kind not in (KIND_SUBMISSION, KIND_COMMENT):
            raise MalformedRecord(f'unknown kind "{kind}"')

        records = []
        subforum = raw.get('subforum')
        if subforum is not None and not isinstance(subforum, dict):
            raise MalformedRecord('"subforum" must be an object')
        community_id = None
        if subforum and subforum.get('id') not in (None, ''):
            community_id = as_id(subforum['id'])
            records.append(Community(
                community_id=community_id,
                community_type=CONS.COMMUNITY_TYPE_GROUP,
                community_username=subforum.get('name'),
                community_name=subforum.get('title'),
                bio=subforum.get('description'),
                is_public=as_bool(subforum.get('public')),
                member_count=as_count(subforum.get('members')),
                created_at=as_timestamp(subforum.get('created')),
                retrieved_at=retrieved_at,
            ))

        author_id = as_id(raw.get('author'))
        has_author = author_id is not None and raw.get('author_name') != DELETED_AUTHOR
        account_id = author_id if has_author else DELETED_AUTHOR
        if has_author:
            records.append(Account(account_id=account_id, user_name=raw.get('author_name'),
                                   retrieved_at=retrieved_at))

        if kind == KIND_SUBMISSION:
            title = raw.get('title') or ''
            selftext = raw.get('selftext') or ''
            body = f'{title}\n\n{selftext}' if selftext else title
            conversation_id = post_id
        else:
            body = raw.get('body') or ''
            conversation_id = as_id(raw.get('link_id'))
        if not isinstance(body, str):
            raise MalformedRecord('post text must be a string')

        score = as_count(raw.get('score')) if not _is_negative(raw.get('score')) else None
        records.append(Post(
            post_id=post_id,
            account_id=account_id,
            conversation_id=conversation_id,
            community_id=community_id,
            body=body,
            like_count=score,
            comment_count=as_count(raw.get('num_comments')),
            created_at=created_at,
            retrieved_at=retrieved_at,
        ))
        records.extend(self.entities(post_id, body, created_at, retrieved_at))

        parent_id = as_id(raw.get('parent_id'))
        if kind == KIND_COMMENT and parent_id:
            records.append(Action(
                originator_account_id=account_id if has_author else None,
                originator_post_id=post_id,
                target_post_id=parent_id,
                action_type=CONS.ACTION_REPLY,
                created_at=created_at,
                retrieved_at=retrieved_at,
            ))
        return records


def _is_negative(value):
    # Net scores go below zero; a like_count can't
    return isinstance(value, (int, float)) and not isinstance(value, bool) and value < 0
