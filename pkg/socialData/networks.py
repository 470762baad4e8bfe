"""
Interaction, co-occurrence and bipartite networks built from a store's actions and entities.
"""
import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from datetime import datetime, timedelta
from itertools import combinations
from urllib.parse import urlsplit

import networkx as nx

from unifiedsocial import constants as CONS
from unifiedsocial.utils import format_timestamp
from socialData.exceptions import ConfigError, MalformedRange, NetworkKindError
from socialData.standardizers.entities import normalize_entity
from socialData.store import LOOKUP_CHUNK, TimeRange, select, storage_errors

logger = logging.getLogger(__name__)

EDGE_LIST_HEADER = 'source\ttarget\tweight'
METRICS_HEADER = 'node\tdegree\tstrength\tlocal_clustering'


class Network:
    """A weighted graph plus the counts and parameters it was built from."""

    def __init__(self, graph, kind, params, skipped=None, exemplars=None, bipartite=False):
        self.graph = graph
        self.kind = kind
        self.params = params
        self.skipped = skipped or {}
        self.exemplars = exemplars or {}
        self.bipartite = bipartite

    @property
    def directed(self):
        return self.graph.is_directed()

    @property
    def nodes(self):
        return sorted(self.graph.nodes)

    def _side(self, side):
        return sorted(node for node, data in self.graph.nodes(data=True) if data.get('side') == side)

    @property
    def left_nodes(self):
        return self._side(CONS.BIPARTITE_LEFT)

    @property
    def right_nodes(self):
        return self._side(CONS.BIPARTITE_RIGHT)

    @property
    def edges(self):
        """(u, v) -> weight. Undirected edges as (min, max), bipartite ones as (left, right)."""
        edges = {}
        for u, v, weight in self.graph.edges(data='weight'):
            if self.bipartite:
                if self.graph.nodes[u].get('side') != CONS.BIPARTITE_LEFT:
                    u, v = v, u
            elif not self.directed and v < u:
                u, v = v, u
            edges[(u, v)] = weight
        return dict(sorted(edges.items()))

    @property
    def meta(self):
        return {
            'node_count': self.graph.number_of_nodes(),
            'edge_count': self.graph.number_of_edges(),
            'kind': self.kind,
            'params': self.params,
            'skipped': dict(self.skipped),
            'exemplars': self.exemplars,
        }

    def to_dict(self):
        return {
            'directed': self.directed,
            'nodes': self.nodes,
            'edges': [{'source': u, 'target': v, 'weight': w} for (u, v), w in self.edges.items()],
            'meta': self.meta,
        }

    def __repr__(self):
        return f'<Network {self.kind} nodes={self.graph.number_of_nodes()} edges={self.graph.number_of_edges()}>'


@dataclass
class NetworkWindow:
    window_start: datetime
    window_end: datetime
    network: Network


def _check_weighting(weighting, min_weight):
    if weighting not in CONS.WEIGHTING_VALUES:
        raise ConfigError(f'Unknown weighting "{weighting}", choose from {", ".join(CONS.WEIGHTING_VALUES)}')
    if isinstance(min_weight, bool) or not isinstance(min_weight, int) or min_weight < 1:
        raise ConfigError('min_weight must be a positive integer')


def _time_filter(time_range):
    if time_range is None:
        return {}
    time_range = TimeRange(*time_range)
    if time_range.start is not None and time_range.end is not None and time_range.start > time_range.end:
        raise MalformedRange(f'Range start {time_range.start} is after its end {time_range.end}')
    return {'created_at': time_range}


def _echo(**params):
    return {key: format_timestamp(value) if isinstance(value, datetime) else
            str(value) if isinstance(value, timedelta) else value
            for key, value in params.items()}


def assemble(kind, counts, directed, weighting, min_weight, params, skipped=None, exemplars=None,
             bipartite=False):
    """
    Turns raw pair counts into a Network: pairs below min_weight are dropped, then BINARY weighting
    sets every surviving weight to 1. Only endpoints of surviving edges become nodes.
    """
    graph = nx.DiGraph() if directed else nx.Graph()
    for (u, v), weight in sorted(counts.items()):
        if weight < min_weight:
            continue
        if bipartite:
            graph.add_node(u, side=CONS.BIPARTITE_LEFT)
            graph.add_node(v, side=CONS.BIPARTITE_RIGHT)
        graph.add_edge(u, v, weight=1 if weighting == CONS.WEIGHTING_BINARY else weight)
    if exemplars is not None:
        exemplars = {node: sorted(exemplars[node]) for node in sorted(graph.nodes) if node in exemplars}
    return Network(graph, kind, params, skipped, exemplars, bipartite)


def post_authors(store, post_ids):
    authors = {}
    post_ids = sorted(set(post_ids))
    for i in range(0, len(post_ids), LOOKUP_CHUNK):
        chunk = post_ids[i:i + LOOKUP_CHUNK]
        for post_id, account_id in select(store, CONS.TABLE_POSTS, {'post_id': chunk}).values_list('post_id',
                                                                                                    'account_id'):
            authors.setdefault(post_id, account_id)
    return authors


def _interaction_events(store, interaction, time_range):
    """(created_at, source account, target account) per action; unresolvable ends are None."""
    if interaction not in CONS.ACTION_TYPE_VALUES:
        raise ConfigError(f'Unknown interaction "{interaction}"')
    filter = {'action_type': interaction, **_time_filter(time_range)}
    rows = list(select(store, CONS.TABLE_ACTIONS, filter).values_list(
        'created_at', 'originator_account_id', 'originator_post_id', 'target_account_id', 'target_post_id'))
    # Only posts standing in for a missing account need their author looked up
    unresolved_posts = {row[2] for row in rows if not row[1] and row[2]} | \
                       {row[4] for row in rows if not row[3] and row[4]}
    authors = post_authors(store, unresolved_posts)
    return [(created_at, source or authors.get(source_post), target or authors.get(target_post))
            for created_at, source, source_post, target, target_post in rows]


def _tally(events, directed):
    counts = Counter()
    skipped = {'unresolved': 0, 'self_loops': 0}
    for _, source, target in events:
        if not source or not target:
            skipped['unresolved'] += 1
        elif source == target:
            skipped['self_loops'] += 1
        else:
            counts[(source, target) if directed else tuple(sorted((source, target)))] += 1
    return counts, skipped


@storage_errors
def build_user_interaction_network(store, interaction=CONS.ACTION_SHARE, time_range=None,
                                   weighting=CONS.WEIGHTING_COUNT, min_weight=1, directed=True):
    """
    Accounts linked by actions of one type, originator -> target. A target given only as a post is
    resolved to that post's author; actions that still lack an end are skipped, as are self-loops,
    and both are counted in meta["skipped"].
    """
    _check_weighting(weighting, min_weight)
    events = _interaction_events(store, interaction, time_range)
    counts, skipped = _tally(events, directed)
    time_range = TimeRange(*time_range) if time_range else TimeRange()
    params = _echo(interaction=interaction, start=time_range.start, end=time_range.end, weighting=weighting,
                   min_weight=min_weight, directed=directed)
    return assemble(CONS.NETWORK_KIND_INTERACTION, counts, directed, weighting, min_weight, params, skipped)


def window_bounds(start_time, end_time, step):
    """Consecutive [start, end) windows of length step; the last one is cut short at end_time."""
    if not start_time < end_time:
        raise MalformedRange('start_time must be before end_time')
    if step <= timedelta(0):
        raise ConfigError('step must be positive')
    bounds = []
    window_start = start_time
    while window_start < end_time:
        window_end = min(window_start + step, end_time)
        bounds.append((window_start, window_end))
        window_start = window_end
    return bounds


@storage_errors
def user_interaction_over_time(store, interaction, start_time, end_time, step, weighting=CONS.WEIGHTING_COUNT,
                               min_weight=1, directed=True):
    """One interaction network per window. Actions are read once and bucketed by created_at."""
    _check_weighting(weighting, min_weight)
    bounds = window_bounds(start_time, end_time, step)
    buckets = defaultdict(list)
    for event in _interaction_events(store, interaction, (start_time, end_time)):
        buckets[(event[0] - start_time) // step].append(event)

    windows = []
    for index, (window_start, window_end) in enumerate(bounds):
        counts, skipped = _tally(buckets[index], directed)
        params = _echo(interaction=interaction, start=window_start, end=window_end, weighting=weighting,
                       min_weight=min_weight, directed=directed)
        network = assemble(CONS.NETWORK_KIND_INTERACTION, counts, directed, weighting, min_weight, params, skipped)
        windows.append(NetworkWindow(window_start, window_end, network))
    logger.info('Built %s %s windows of %s', len(windows), interaction, step)
    return windows


def _entity_rows(store, entity_type, time_range):
    if entity_type not in CONS.ENTITY_TYPE_VALUES:
        raise ConfigError(f'Unknown entity type "{entity_type}"')
    filter = {'entity_type': entity_type, **_time_filter(time_range)}
    return select(store, CONS.TABLE_ENTITIES, filter).values_list('post_id', 'body')


@storage_errors
def build_cooccurrence_network(store, entity_type=CONS.ENTITY_HASHTAG, time_range=None, min_weight=1,
                               weighting=CONS.WEIGHTING_COUNT):
    """
    Entities linked by appearing in the same post; each post adds 1 to every pair of distinct
    entities it contains. Hashtags, mentions and emails are compared case-insensitively, with the
    original spellings kept in meta["exemplars"].
    """
    _check_weighting(weighting, min_weight)
    per_post = defaultdict(set)
    exemplars = defaultdict(set)
    for post_id, body in _entity_rows(store, entity_type, time_range):
        node = normalize_entity(entity_type, body)
        per_post[post_id].add(node)
        exemplars[node].add(body)

    counts = Counter()
    for nodes in per_post.values():
        counts.update(combinations(sorted(nodes), 2))
    time_range = TimeRange(*time_range) if time_range else TimeRange()
    params = _echo(entity_type=entity_type, start=time_range.start, end=time_range.end, weighting=weighting,
                   min_weight=min_weight)
    return assemble(CONS.NETWORK_KIND_COOCCURRENCE, counts, False, weighting, min_weight, params,
                    {'unresolved': 0, 'self_loops': 0}, exemplars)


def domain_of(url):
    """Lowercased host without "www." and port, or None if url has no usable host."""
    try:
        host = urlsplit(url).hostname
    except ValueError:
        return None
    if not host:
        return None
    if host.startswith('www.'):
        host = host[len('www.'):]
    return host or None


@storage_errors
def build_bipartite_network(store, left=CONS.TARGET_KIND_ACCOUNT, right=CONS.ENTITY_HASHTAG, time_range=None,
                            min_weight=1, weighting=CONS.WEIGHTING_COUNT):
    """
    Accounts linked to the entities (or, for DOMAIN, the URL hosts) of their posts. The weight is the
    number of the account's posts that contain the feature.
    """
    if left != CONS.TARGET_KIND_ACCOUNT:
        raise NetworkKindError(f'Bipartite networks start from {CONS.TARGET_KIND_ACCOUNT}, not "{left}"')
    _check_weighting(weighting, min_weight)
    entity_type = CONS.ENTITY_URL if right == CONS.BIPARTITE_RIGHT_DOMAIN else right
    rows = list(_entity_rows(store, entity_type, time_range))
    authors = post_authors(store, [post_id for post_id, _ in rows])

    posts_per_pair = defaultdict(set)
    skipped = {'unresolved': 0, 'malformed_urls': 0}
    for post_id, body in rows:
        account_id = authors.get(post_id)
        if account_id is None:
            skipped['unresolved'] += 1
            continue
        if right == CONS.BIPARTITE_RIGHT_DOMAIN:
            feature = domain_of(body)
            if feature is None:
                skipped['malformed_urls'] += 1
                continue
        else:
            feature = normalize_entity(entity_type, body)
        posts_per_pair[(account_id, feature)].add(post_id)

    counts = {pair: len(posts) for pair, posts in posts_per_pair.items()}
    time_range = TimeRange(*time_range) if time_range else TimeRange()
    params = _echo(left=left, right=right, start=time_range.start, end=time_range.end, weighting=weighting,
                   min_weight=min_weight)
    return assemble(CONS.NETWORK_KIND_BIPARTITE, counts, False, weighting, min_weight, params, skipped,
                    bipartite=True)


def node_metrics(network):
    """
    degree (distinct neighbours, direction ignored), strength (sum of incident weights) and the local
    clustering coefficient of the simple undirected, unweighted version of the graph.
    """
    if network.bipartite:
        raise NetworkKindError('Local clustering is not defined for bipartite networks')
    simple = nx.Graph()
    simple.add_nodes_from(network.graph.nodes)
    simple.add_edges_from(network.graph.edges)
    clustering = nx.clustering(simple)
    strength = dict(network.graph.degree(weight='weight'))
    return {node: {'degree': simple.degree(node), 'strength': strength[node],
                   'local_clustering': float(clustering[node])}
            for node in sorted(simple.nodes)}


def format_weight(weight):
    if isinstance(weight, float) and weight.is_integer():
        return str(int(weight))
    return str(weight)


def export_edge_list(network, path):
    with open(path, 'w', encoding='utf-8', newline='\n') as output:
        output.write(EDGE_LIST_HEADER + '\n')
        for (u, v), weight in network.edges.items():
            output.write(f'{u}\t{v}\t{format_weight(weight)}\n')
    return network.graph.number_of_edges()


def export_json(network, path):
    with open(path, 'w', encoding='utf-8', newline='\n') as output:
        json.dump(network.to_dict(), output, indent=2, ensure_ascii=False)
        output.write('\n')


def export_metrics(metrics, path):
    with open(path, 'w', encoding='utf-8', newline='\n') as output:
        output.write(METRICS_HEADER + '\n')
        for node, values in metrics.items():
            output.write(f'{node}\t{values["degree"]}\t{format_weight(values["strength"])}\t'
                         f'{values["local_clustering"]:.6f}\n')
