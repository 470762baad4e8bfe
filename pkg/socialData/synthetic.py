"""
Deterministic synthetic datasets: a Twitter-like microblog file and a Reddit-like forum file covering
one day, each with a few deliberately broken lines, plus a manifest of what ingesting them must
produce. The manifest is tallied here from the generated values, not by running the adapters.
"""
import datetime
import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path

from unifiedsocial import constants as CONS
from unifiedsocial.utils import format_timestamp, parse_timestamp
from socialData.models import TABLE_MODELS

logger = logging.getLogger(__name__)

DEFAULT_SEED = 42
MICROBLOG_LINES = 1000
MICROBLOG_ACCOUNTS = 200
FORUM_LINES = 500
FORUM_COMMUNITIES = 10
FORUM_AUTHORS = 120
MICROBLOG_RETRIEVED_AT = '2023-05-16T00:00:00Z'
DAY_SECONDS = 24 * 60 * 60

WORDS = [
    'today', 'vote', 'people', 'debate', 'budget', 'policy', 'city', 'school', 'market', 'winter',
    'summer', 'energy', 'prices', 'rally', 'speech', 'report', 'survey', 'result', 'future', 'change',
    'support', 'agree', 'wrong', 'right', 'great', 'terrible', 'finally', 'again', 'morning', 'evening',
]
HASHTAGS = [
    '#election2023', '#Election2023', '#climate', '#ClimateAction', '#economy', '#healthcare', '#Healthcare',
    '#debate', '#polls', '#news', '#energy', '#housing', '#education', '#jobs', '#tax',
]
URLS = [
    'https://www.Example.org/p/{n}',
    'https://news.example.com/story/{n}',
    'http://blog.example.net:8080/{n}',
    'https://www.media.example.fi/a/{n}?ref=share',
    'https://example.org/about',
]
# (before, after) wrapped around a URL; the adapter has to strip what follows it
URL_WRAPPERS = [('', ''), ('', '.'), ('', ','), ('(', ')'), ('', '!')]
EMAILS = ['press@example.org', 'anna.k@mail.example.fi', 'info@news.example.com']
MALFORMED_KINDS = ['truncated', 'array', 'missing_id']


@dataclass
class FixtureManifest:
    seed: int
    files: dict = field(default_factory=dict)
    inserts: dict = field(default_factory=dict)
    availability: dict = field(default_factory=dict)
    share_actions: int = 0

    def to_dict(self):
        return {
            'seed': self.seed,
            'files': self.files,
            'inserts': self.inserts,
            'availability': self.availability,
            'share_actions': self.share_actions,
        }

    @classmethod
    def load(cls, path):
        with open(path, encoding='utf-8') as source:
            return cls(**json.load(source))


class Tally:
    """Dedup keys and non-null fields of the rows a file should produce, per table."""

    def __init__(self):
        self.keys = {table: set() for table in CONS.SCHEMA_TABLES}
        self.filled = {table: set() for table in CONS.SCHEMA_TABLES}

    def add(self, table, key, **values):
        self.keys[table].add(key)
        self.filled[table].update(name for name, value in values.items() if value is not None)

    def inserts(self):
        return {table: len(self.keys[table]) for table in CONS.SCHEMA_TABLES}

    def availability(self):
        return {table: {name: CONS.AVAILABLE if name in self.filled[table] else CONS.ABSENT
                        for name in TABLE_MODELS[table].schema_fields()}
                for table in CONS.SCHEMA_TABLES}


def _day_times(rng, count):
    start = parse_timestamp(CONS.FIXTURE_DAY_START)
    offsets = sorted(rng.randrange(DAY_SECONDS) for _ in range(count))
    return [format_timestamp(start + datetime.timedelta(seconds=offset)) for offset in offsets]


def _text_tokens(rng, usernames=None, url_rate=0.25, email_rate=0.04):
    """[(text, entity_type, entity_body)] making up one post's text, entities in order."""
    tokens = [(word, None, None) for word in rng.sample(WORDS, rng.randint(3, 8))]
    extras = []
    for tag in rng.sample(HASHTAGS, rng.choice([0, 0, 1, 1, 2, 3])):
        extras.append((tag, CONS.ENTITY_HASHTAG, tag))
    if usernames:
        for _ in range(rng.choice([0, 0, 0, 1, 1, 2])):
            mention = '@' + rng.choice(usernames)
            extras.append((mention, CONS.ENTITY_MENTION, mention))
    if rng.random() < url_rate:
        url = rng.choice(URLS).format(n=rng.randrange(1000))
        before, after = rng.choice(URL_WRAPPERS)
        extras.append((f'{before}{url}{after}', CONS.ENTITY_URL, url))
    if rng.random() < email_rate:
        email = rng.choice(EMAILS)
        extras.append((email, CONS.ENTITY_EMAIL, email))
    for token in extras:
        tokens.insert(rng.randint(0, len(tokens)), token)
    return tokens


def _join(tokens):
    return ' '.join(text for text, _, _ in tokens)


def _malformed_line(kind, sample):
    if kind == 'truncated':
        return json.dumps(sample, ensure_ascii=False)[:40]
    if kind == 'array':
        return json.dumps([sample.get('id'), sample.get('text')], ensure_ascii=False)
    broken = dict(sample)
    broken.pop('id')
    return json.dumps(broken, ensure_ascii=False)


def _microblog_users(rng):
    users = []
    for i in range(MICROBLOG_ACCOUNTS):
        created = datetime.datetime(2010, 1, 1, tzinfo=datetime.timezone.utc) + \
            datetime.timedelta(days=rng.randrange(4500), seconds=rng.randrange(DAY_SECONDS))
        followers = rng.randrange(50000)
        user = {
            'id': f'u{i:03d}',
            'name': f'user{i:03d}',
            'display_name': f'User Number {i}',
            'description': rng.choice(['', 'Citizen journalist.', 'Opinions my own. contact: press@example.org',
                                       'Policy nerd, ping @user000']),
            'followers_count': f'{followers / 1000:.1f}K' if followers >= 10000 else followers,
            'friends_count': rng.randrange(2000),
            'statuses_count': f'{rng.randrange(1, 30000):,}',
            'verified': rng.random() < 0.1,
            'profile_image_url': f'https://img.example.com/u{i:03d}.jpg',
            'created_at': format_timestamp(created),
        }
        if rng.random() < 0.2:
            user['geo'] = [round(rng.uniform(59.8, 70.0), 4), round(rng.uniform(20.5, 31.5), 4)]
        users.append(user)
    return users


def _tally_microblog(tally, raw):
    user = raw['user']
    retrieved_at = raw['retrieved_at']
    created_at = raw['ts']
    post_id = raw['id']
    tally.add(CONS.TABLE_ACCOUNTS, (user['id'], retrieved_at),
              account_id=user['id'], user_name=user['name'], profile_name=user['display_name'],
              bio=user['description'], location=user.get('geo'), post_count=user['statuses_count'],
              friend_count=user['friends_count'], follower_count=user['followers_count'],
              is_verified=user['verified'], profile_image_url=user['profile_image_url'],
              created_at=user['created_at'], retrieved_at=retrieved_at)
    tally.add(CONS.TABLE_POSTS, (post_id, retrieved_at),
              post_id=post_id, account_id=user['id'], conversation_id=raw.get('conversation_id', post_id),
              body=raw['text'], location=raw.get('geo'), like_count=raw['like_count'],
              share_count=raw['share_count'], comment_count=raw['reply_count'], quote_count=raw['quote_count'],
              view_count=raw.get('view_count'), bookmark_count=raw.get('bookmark_count'),
              created_at=created_at, retrieved_at=retrieved_at)
    for entity_type, body in raw['_entities'] + [(CONS.ENTITY_MEDIA_KEY, k) for k in raw.get('media_keys', [])]:
        tally.add(CONS.TABLE_ENTITIES, (post_id, entity_type, body, created_at),
                  post_id=post_id, body=body, entity_type=entity_type, created_at=created_at,
                  retrieved_at=retrieved_at)
    for key, action_type, author_key in [('repost_of', CONS.ACTION_SHARE, 'repost_of_user'),
                                         ('quote_of', CONS.ACTION_QUOTE, 'quote_of_user'),
                                         ('reply_to', CONS.ACTION_REPLY, 'reply_to_user')]:
        if key in raw:
            target_account = raw.get(author_key)
            tally.add(CONS.TABLE_ACTIONS, (user['id'], post_id, target_account, raw[key], action_type, created_at),
                      originator_account_id=user['id'], originator_post_id=post_id,
                      target_account_id=target_account, target_post_id=raw[key], action_type=action_type,
                      created_at=created_at, retrieved_at=retrieved_at)
    for mention in raw.get('mentions', []):
        tally.add(CONS.TABLE_ACTIONS, (user['id'], post_id, mention['id'], None, CONS.ACTION_MENTION, created_at),
                  originator_account_id=user['id'], originator_post_id=post_id, target_account_id=mention['id'],
                  action_type=CONS.ACTION_MENTION, created_at=created_at, retrieved_at=retrieved_at)


def generate_microblog(rng, path):
    users = _microblog_users(rng)
    usernames = [user['name'] for user in users]
    ids_by_username = {user['name']: user['id'] for user in users}
    valid_count = MICROBLOG_LINES - CONS.FIXTURE_MALFORMED_PER_FILE
    times = _day_times(rng, valid_count)
    malformed_at = sorted(rng.sample(range(1, MICROBLOG_LINES), CONS.FIXTURE_MALFORMED_PER_FILE))

    tally = Tally()
    posts = []
    shares = 0
    lines = []
    for line_index in range(MICROBLOG_LINES):
        if line_index in malformed_at:
            kind = MALFORMED_KINDS[malformed_at.index(line_index)]
            sample = {'id': f'bad{line_index}', 'ts': times[0], 'text': 'broken line',
                      'user': {'id': users[0]['id']}}
            lines.append(_malformed_line(kind, sample))
            continue
        i = len(posts)
        user = rng.choice(users)
        raw = {'id': f'm{i:04d}', 'ts': times[i]}
        tokens = _text_tokens(rng, usernames)
        roll = rng.random() if posts else 1.0
        if roll < 0.22:
            original = rng.choice(posts)
            tokens = [('RT', None, None)] + original['_tokens']
            raw['repost_of'] = original['id']
            if rng.random() < 0.5:
                raw['repost_of_user'] = original['user']['id']
        elif roll < 0.25:
            raw['repost_of'] = f'ext{rng.randrange(10 ** 6)}'
            if rng.random() < 0.5:
                raw['repost_of_user'] = rng.choice(users)['id']
        elif roll < 0.33:
            original = rng.choice(posts)
            raw['quote_of'] = original['id']
            raw['quote_of_user'] = original['user']['id']
        elif roll < 0.43:
            original = rng.choice(posts)
            raw['reply_to'] = original['id']
            raw['reply_to_user'] = original['user']['id']
            raw['conversation_id'] = original.get('conversation_id', original['id'])
        if 'repost_of' in raw:
            shares += 1

        raw['text'] = _join(tokens)
        raw['user'] = user
        raw['retrieved_at'] = MICROBLOG_RETRIEVED_AT
        raw['like_count'] = rng.randrange(500)
        raw['share_count'] = rng.choice([rng.randrange(100), '1,234', '3.4K'])
        raw['reply_count'] = rng.randrange(50)
        raw['quote_count'] = rng.randrange(20)
        if rng.random() < 0.5:
            raw['view_count'] = rng.randrange(100000)
        if rng.random() < 0.3:
            raw['bookmark_count'] = rng.randrange(30)
        mentions = [body[1:] for _, entity_type, body in tokens if entity_type == CONS.ENTITY_MENTION]
        if mentions:
            raw['mentions'] = [{'id': ids_by_username[name], 'username': name} for name in mentions]
        if rng.random() < 0.1:
            raw['media_keys'] = [f'3_{rng.randrange(10 ** 9)}']
        if rng.random() < 0.05:
            raw['geo'] = [round(rng.uniform(59.8, 70.0), 4), round(rng.uniform(20.5, 31.5), 4)]

        raw['_tokens'] = tokens
        raw['_entities'] = [(entity_type, body) for _, entity_type, body in tokens if entity_type]
        _tally_microblog(tally, raw)
        posts.append(raw)
        lines.append(json.dumps({key: value for key, value in raw.items() if not key.startswith('_')},
                                ensure_ascii=False))

    _write_lines(path, lines)
    return lines, malformed_at, tally, shares


def generate_forum(rng, path):
    created = datetime.datetime(2015, 1, 1, tzinfo=datetime.timezone.utc)
    communities = []
    for i in range(FORUM_COMMUNITIES):
        communities.append({
            'id': f'c{i:02d}',
            'name': f'sub{i:02d}',
            'title': f'Discussion board {i}',
            'description': rng.choice(['Local news and talk.', 'Questions welcome. mods: info@news.example.com',
                                       'All about #energy']),
            'members': rng.choice([rng.randrange(100, 9999), f'{rng.randrange(10, 99)}.{rng.randrange(10)}K']),
            'public': rng.random() < 0.8,
            'created': int((created + datetime.timedelta(days=rng.randrange(2000))).timestamp()),
        })
    valid_count = FORUM_LINES - CONS.FIXTURE_MALFORMED_PER_FILE
    times = _day_times(rng, valid_count)
    malformed_at = sorted(rng.sample(range(1, FORUM_LINES), CONS.FIXTURE_MALFORMED_PER_FILE))

    tally = Tally()
    posts = []
    lines = []
    for line_index in range(FORUM_LINES):
        if line_index in malformed_at:
            kind = MALFORMED_KINDS[malformed_at.index(line_index)]
            sample = {'id': f'bad{line_index}', 'kind': 'submission', 'title': 'broken line',
                      'created_utc': int(parse_timestamp(times[0]).timestamp())}
            lines.append(_malformed_line(kind, sample))
            continue
        i = len(posts)
        post_id = f'f{i:04d}'
        created_utc = int(parse_timestamp(times[i]).timestamp())
        if rng.random() < 0.05:
            author, author_name = None, '[deleted]'
        else:
            author_index = rng.randrange(FORUM_AUTHORS)
            author, author_name = f'r{author_index:03d}', f'redditor{author_index}'

        if not posts or rng.random() < 0.3:
            community = rng.choice(communities)
            title_tokens = _text_tokens(rng, url_rate=0.1, email_rate=0.0)
            self_tokens = _text_tokens(rng, url_rate=0.3) if rng.random() < 0.6 else []
            raw = {'id': post_id, 'kind': 'submission', 'title': _join(title_tokens),
                   'num_comments': rng.randrange(200)}
            if self_tokens:
                raw['selftext'] = _join(self_tokens)
            tokens = title_tokens + self_tokens
            raw['_root'] = post_id
        else:
            parent = rng.choice(posts)
            community = parent['subforum']
            tokens = _text_tokens(rng, url_rate=0.2)
            raw = {'id': post_id, 'kind': 'comment', 'body': _join(tokens), 'parent_id': parent['id'],
                   'link_id': parent['_root']}
            raw['_root'] = parent['_root']
        raw.update({'author': author, 'author_name': author_name, 'subforum': community,
                    'score': rng.randint(-5, 500), 'created_utc': created_utc})
        raw['_entities'] = [(entity_type, body) for _, entity_type, body in tokens if entity_type]
        _tally_forum(tally, raw, times[i])
        posts.append(raw)
        lines.append(json.dumps({key: value for key, value in raw.items() if not key.startswith('_')},
                                ensure_ascii=False))

    _write_lines(path, lines)
    return lines, malformed_at, tally


def _tally_forum(tally, raw, created_at):
    # Forum records carry no retrieved_at; ingestion fills one value in for the whole run
    retrieved_at = 'ingestion'
    community = raw['subforum']
    tally.add(CONS.TABLE_COMMUNITIES, (community['id'], retrieved_at),
              community_id=community['id'], community_type=CONS.COMMUNITY_TYPE_GROUP,
              community_username=community['name'], community_name=community['title'],
              bio=community['description'], is_public=community['public'], member_count=community['members'],
              created_at=community['created'], retrieved_at=retrieved_at)
    has_author = raw['author'] is not None
    account_id = raw['author'] if has_author else '[deleted]'
    if has_author:
        tally.add(CONS.TABLE_ACCOUNTS, (account_id, retrieved_at),
                  account_id=account_id, user_name=raw['author_name'], retrieved_at=retrieved_at)
    tally.add(CONS.TABLE_POSTS, (raw['id'], retrieved_at),
              post_id=raw['id'], account_id=account_id, conversation_id=raw['_root'],
              community_id=community['id'], body='', like_count=raw['score'] if raw['score'] >= 0 else None,
              comment_count=raw.get('num_comments'), created_at=created_at, retrieved_at=retrieved_at)
    for entity_type, body in raw['_entities']:
        tally.add(CONS.TABLE_ENTITIES, (raw['id'], entity_type, body, created_at),
                  post_id=raw['id'], body=body, entity_type=entity_type, created_at=created_at,
                  retrieved_at=retrieved_at)
    if raw['kind'] == 'comment':
        originator = account_id if has_author else None
        tally.add(CONS.TABLE_ACTIONS, (originator, raw['id'], None, raw['parent_id'], CONS.ACTION_REPLY, created_at),
                  originator_account_id=originator, originator_post_id=raw['id'], target_post_id=raw['parent_id'],
                  action_type=CONS.ACTION_REPLY, created_at=created_at, retrieved_at=retrieved_at)


def _write_lines(path, lines):
    with open(path, 'w', encoding='utf-8', newline='\n') as output:
        for line in lines:
            output.write(line + '\n')


def generate_fixtures(seed=DEFAULT_SEED, out_dir='.'):
    """
    Writes the microblog file, the forum file and manifest.json into out_dir and returns the
    manifest. The same seed always produces byte-identical files.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    manifest = FixtureManifest(seed=seed)

    lines, malformed_at, tally, shares = generate_microblog(rng, out_dir / CONS.FIXTURE_MICROBLOG_FILE)
    manifest.files[CONS.FIXTURE_MICROBLOG_FILE] = {
        'adapter': CONS.ADAPTER_GENERIC_MICROBLOG,
        'records_read': len(lines),
        'records_failed': len(malformed_at),
        'malformed_indices': malformed_at,
    }
    manifest.inserts[CONS.FIXTURE_MICROBLOG_FILE] = tally.inserts()
    manifest.availability[CONS.FIXTURE_MICROBLOG_FILE] = tally.availability()
    manifest.share_actions = shares

    lines, malformed_at, tally = generate_forum(rng, out_dir / CONS.FIXTURE_FORUM_FILE)
    manifest.files[CONS.FIXTURE_FORUM_FILE] = {
        'adapter': CONS.ADAPTER_GENERIC_FORUM,
        'records_read': len(lines),
        'records_failed': len(malformed_at),
        'malformed_indices': malformed_at,
    }
    manifest.inserts[CONS.FIXTURE_FORUM_FILE] = tally.inserts()
    manifest.availability[CONS.FIXTURE_FORUM_FILE] = tally.availability()

    with open(out_dir / CONS.FIXTURE_MANIFEST_FILE, 'w', encoding='utf-8', newline='\n') as output:
        json.dump(manifest.to_dict(), output, indent=2, ensure_ascii=False)
        output.write('\n')
    logger.info('Wrote fixtures with seed %s to %s', seed, out_dir)
    return manifest
