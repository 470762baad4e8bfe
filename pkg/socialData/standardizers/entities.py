import re

from unifiedsocial import constants as CONS

URL_PATTERN = r'https?://\S+'
EMAIL_PATTERN = r'[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}'
# Alternatives are tried left to right at each position, so an email starting at "b" in
# "b@c.org" is found before the mention at "@c" is ever considered.
ENTITY_RE = re.compile(
    rf'(?P<URL>{URL_PATTERN})'
    rf'|(?P<EMAIL>{EMAIL_PATTERN})'
    r'|(?P<HASHTAG>#[A-Za-z0-9_]+)'
    r'|(?P<MENTION>@[A-Za-z0-9_]+)'
)
EMAIL_RE = re.compile(EMAIL_PATTERN)
URL_TRAILING_PUNCTUATION = '.,;:!?)'

CASEFOLDED_ENTITY_TYPES = [CONS.ENTITY_HASHTAG, CONS.ENTITY_MENTION, CONS.ENTITY_EMAIL]


def iter_entity_matches(text):
    """
    Yields (entity_type, body, start, end) for every entity in text, left to right. A hashtag or mention
    that overlaps an email ("@anna@example.com", "#tag@example.com") gives way to the email.
    """
    if not text:
        return
    pos = 0
    while True:
        match = ENTITY_RE.search(text, pos)
        if match is None:
            return
        entity_type = match.lastgroup
        if entity_type in (CONS.ENTITY_HASHTAG, CONS.ENTITY_MENTION):
            email = EMAIL_RE.search(text, match.start() + 1)
            if email is not None and email.start() < match.end():
                match, entity_type = email, CONS.ENTITY_EMAIL
        body = match.group()
        start, end = match.span()
        pos = end
        if entity_type == CONS.ENTITY_URL:
            body = body.rstrip(URL_TRAILING_PUNCTUATION)
            end = start + len(body)
        yield entity_type, body, start, end


def extract_entities(text):
    return [(entity_type, body) for entity_type, body, _, _ in iter_entity_matches(text)]


def normalize_entity(entity_type, body):
    if entity_type in CASEFOLDED_ENTITY_TYPES:
        return body.casefold()
    return body
