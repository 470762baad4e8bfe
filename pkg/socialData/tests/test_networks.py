import json
import random
import tempfile
from datetime import timedelta
from itertools import combinations
from pathlib import Path

import networkx as nx
from django.test import SimpleTestCase

from unifiedsocial import constants as CONS
from socialData.exceptions import ConfigError, MalformedRange, NetworkKindError
from socialData.networks import (Network, build_bipartite_network, build_cooccurrence_network,
                                 build_user_interaction_network, domain_of, export_edge_list, export_json,
                                 export_metrics, node_metrics, user_interaction_over_time, window_bounds)
from socialData.store import TimeRange, init_store, insert_batch
from socialData.tests.base import GOLDEN_DIR, StoreTestCase, make_action, make_entity, make_post, ts

T10 = ts('2023-05-14T10:00:00Z')
T11 = ts('2023-05-14T11:00:00Z')
T12 = ts('2023-05-14T12:00:00Z')


def share(created_at, originator, target_post, target_account=None):
    return make_action(CONS.ACTION_SHARE, created_at=created_at, originator_account_id=originator,
                       target_post_id=target_post, target_account_id=target_account)


def brute_force_clustering(graph, node):
    neighbours = list(graph.neighbors(node))
    k = len(neighbours)
    if k < 2:
        return 0.0
    triangles = sum(1 for u, w in combinations(neighbours, 2) if graph.has_edge(u, w))
    return 2 * triangles / (k * (k - 1))


def network_of(edges, directed=False):
    graph = nx.DiGraph() if directed else nx.Graph()
    for u, v, weight in edges:
        graph.add_edge(u, v, weight=weight)
    return Network(graph, CONS.NETWORK_KIND_COOCCURRENCE, {})


class InteractionNetworkTest(StoreTestCase):
    def setUp(self):
        super().setUp()
        self.store = init_store('alpha')
        insert_batch(self.store, [
            make_post('pa1', account_id='a'),
            make_post('pb1', account_id='b'),
            make_post('pc1', account_id='c'),
            share('2023-05-14T10:00:00Z', 'b', 'pa1', 'a'),
            # Target account resolved through the post's author
            share('2023-05-14T10:30:00Z', 'c', 'pa1'),
            share('2023-05-14T10:45:00Z', 'a', 'pa1'),
            share('2023-05-14T11:15:00Z', 'c', 'pa1'),
            share('2023-05-14T11:30:00Z', 'c', 'pb1', 'b'),
            share('2023-05-14T11:50:00Z', 'd', 'px'),
            make_action(CONS.ACTION_QUOTE, created_at='2023-05-14T10:10:00Z', originator_account_id='b',
                        target_post_id='pc1'),
        ])

    def test_share_network(self):
        network = build_user_interaction_network(self.store, CONS.ACTION_SHARE)
        self.assertTrue(network.directed)
        self.assertEqual(network.edges, {('b', 'a'): 1, ('c', 'a'): 2, ('c', 'b'): 1})
        self.assertEqual(network.nodes, ['a', 'b', 'c'])
        meta = network.meta
        self.assertEqual((meta['node_count'], meta['edge_count'], meta['kind']), (3, 3, 'interaction'))
        self.assertEqual(meta['skipped'], {'unresolved': 1, 'self_loops': 1})
        self.assertEqual(meta['params']['interaction'], CONS.ACTION_SHARE)
        self.assertIsNone(meta['params']['start'])

    def test_other_interaction(self):
        network = build_user_interaction_network(self.store, CONS.ACTION_QUOTE)
        self.assertEqual(network.edges, {('b', 'c'): 1})

    def test_threshold_then_binarize(self):
        self.assertEqual(build_user_interaction_network(self.store, min_weight=2).edges, {('c', 'a'): 2})
        self.assertEqual(build_user_interaction_network(self.store, weighting=CONS.WEIGHTING_BINARY).edges,
                         {('b', 'a'): 1, ('c', 'a'): 1, ('c', 'b'): 1})
        binary = build_user_interaction_network(self.store, weighting=CONS.WEIGHTING_BINARY, min_weight=2)
        self.assertEqual(binary.edges, {('c', 'a'): 1})
        self.assertEqual(binary.nodes, ['a', 'c'])

    def test_threshold_is_monotone(self):
        previous = None
        for min_weight in range(1, 4):
            network = build_user_interaction_network(self.store, min_weight=min_weight)
            count_edges = set(network.edges)
            binary_edges = set(build_user_interaction_network(
                self.store, min_weight=min_weight, weighting=CONS.WEIGHTING_BINARY).edges)
            self.assertEqual(count_edges, binary_edges)
            if previous is not None:
                self.assertLessEqual(count_edges, previous)
            previous = count_edges
        self.assertEqual(previous, set())

    def test_undirected(self):
        network = build_user_interaction_network(self.store, directed=False)
        self.assertFalse(network.directed)
        self.assertEqual(network.edges, {('a', 'b'): 1, ('a', 'c'): 2, ('b', 'c'): 1})

    def test_time_range(self):
        network = build_user_interaction_network(self.store, time_range=TimeRange(T10, T11))
        self.assertEqual(network.edges, {('b', 'a'): 1, ('c', 'a'): 1})
        self.assertEqual(network.params['start'], '2023-05-14T10:00:00Z')
        empty = build_user_interaction_network(self.store, time_range=(ts('2023-06-01T00:00:00Z'), None))
        self.assertEqual(empty.meta['edge_count'], 0)
        self.assertEqual(empty.nodes, [])
        with self.assertRaises(MalformedRange):
            build_user_interaction_network(self.store, time_range=(T11, T10))

    def test_bad_arguments(self):
        with self.assertRaises(ConfigError):
            build_user_interaction_network(self.store, 'RETWEET')
        with self.assertRaises(ConfigError):
            build_user_interaction_network(self.store, min_weight=0)
        with self.assertRaises(ConfigError):
            build_user_interaction_network(self.store, weighting='LOG')

    def test_windows(self):
        windows = user_interaction_over_time(self.store, CONS.ACTION_SHARE, T10, T12, timedelta(hours=1))
        self.assertEqual([(w.window_start, w.window_end) for w in windows], [(T10, T11), (T11, T12)])
        first, second = windows
        self.assertEqual(first.network.edges, {('b', 'a'): 1, ('c', 'a'): 1})
        self.assertEqual(first.network.skipped, {'unresolved': 0, 'self_loops': 1})
        self.assertEqual(second.network.edges, {('c', 'a'): 1, ('c', 'b'): 1})
        self.assertEqual(second.network.skipped, {'unresolved': 1, 'self_loops': 0})
        self.assertEqual(second.network.params['start'], '2023-05-14T11:00:00Z')
        total = sum(sum(w.network.edges.values()) for w in windows)
        self.assertEqual(total, sum(build_user_interaction_network(self.store).edges.values()))

    def test_window_min_weight(self):
        windows = user_interaction_over_time(self.store, CONS.ACTION_SHARE, T10, T12, timedelta(hours=2),
                                             min_weight=2)
        self.assertEqual(len(windows), 1)
        self.assertEqual(windows[0].network.edges, {('c', 'a'): 2})

    def test_edge_list_golden(self):
        path = self.tmp_dir / 'edges.tsv'
        self.assertEqual(export_edge_list(build_user_interaction_network(self.store), path), 3)
        self.assertEqual(path.read_bytes(), (GOLDEN_DIR / 'share_edges.tsv').read_bytes())

    def test_json_export(self):
        path = self.tmp_dir / 'network.json'
        export_json(build_user_interaction_network(self.store), path)
        data = json.loads(path.read_text(encoding='utf-8'))
        self.assertEqual(set(data), {'directed', 'nodes', 'edges', 'meta'})
        self.assertTrue(data['directed'])
        self.assertEqual(data['edges'][1], {'source': 'c', 'target': 'a', 'weight': 2})
        self.assertEqual(data['meta']['edge_count'], len(data['edges']))


class WindowBoundsTest(SimpleTestCase):
    def test_full_day(self):
        bounds = window_bounds(ts('2023-05-14T00:00:00Z'), ts('2023-05-15T00:00:00Z'), timedelta(hours=1))
        self.assertEqual(len(bounds), 24)
        for (_, end), (start, _) in zip(bounds, bounds[1:]):
            self.assertEqual(end, start)
        self.assertEqual(bounds[0][0], ts('2023-05-14T00:00:00Z'))
        self.assertEqual(bounds[-1][1], ts('2023-05-15T00:00:00Z'))

    def test_truncated_tail(self):
        bounds = window_bounds(T10, ts('2023-05-14T11:30:00Z'), timedelta(hours=1))
        self.assertEqual(bounds, [(T10, T11), (T11, ts('2023-05-14T11:30:00Z'))])

    def test_invalid(self):
        with self.assertRaises(ConfigError):
            window_bounds(T10, T11, timedelta(0))
        with self.assertRaises(MalformedRange):
            window_bounds(T11, T10, timedelta(hours=1))
        with self.assertRaises(MalformedRange):
            window_bounds(T10, T10, timedelta(hours=1))


class CooccurrenceNetworkTest(StoreTestCase):
    def setUp(self):
        super().setUp()
        self.store = init_store('alpha')
        tags = {'q1': ['#a', '#b', '#c'], 'q2': ['#A', '#b'], 'q3': ['#a', '#c', '#A'], 'q4': ['#b']}
        records = []
        for i, (post_id, bodies) in enumerate(tags.items()):
            created_at = f'2023-05-14T1{i}:00:00Z'
            # #a and #A in q3 are one node and count once
            for body in bodies:
                records.append(make_entity(post_id, body, created_at=created_at))
        records.append(make_entity('q3', '@someone', CONS.ENTITY_MENTION, created_at='2023-05-14T12:00:00Z'))
        insert_batch(self.store, records)

    def test_weights(self):
        network = build_cooccurrence_network(self.store, CONS.ENTITY_HASHTAG)
        self.assertFalse(network.directed)
        self.assertEqual(network.edges, {('#a', '#b'): 2, ('#a', '#c'): 2, ('#b', '#c'): 1})
        self.assertEqual(network.exemplars['#a'], ['#A', '#a'])
        self.assertEqual(network.meta['kind'], 'cooccurrence')

    def test_threshold_and_range(self):
        self.assertEqual(build_cooccurrence_network(self.store, min_weight=2).edges,
                         {('#a', '#b'): 2, ('#a', '#c'): 2})
        single = build_cooccurrence_network(self.store, time_range=(T10, T11))
        self.assertEqual(single.edges, {('#a', '#b'): 1, ('#a', '#c'): 1, ('#b', '#c'): 1})
        metrics = node_metrics(single)
        self.assertEqual({node: values['local_clustering'] for node, values in metrics.items()},
                         {'#a': 1.0, '#b': 1.0, '#c': 1.0})

    def test_other_types(self):
        self.assertEqual(build_cooccurrence_network(self.store, CONS.ENTITY_MENTION).edges, {})
        with self.assertRaises(ConfigError):
            build_cooccurrence_network(self.store, 'EMOJI')


class BipartiteNetworkTest(StoreTestCase):
    def setUp(self):
        super().setUp()
        self.store = init_store('alpha')
        insert_batch(self.store, [
            make_post('r1', account_id='x'),
            make_post('r2', account_id='x'),
            make_post('r3', account_id='y'),
            make_post('r4', account_id='y'),
            make_entity('r1', '#x'),
            make_entity('r2', '#X'),
            make_entity('r3', '#x'),
            make_entity('r9', '#x'),
            make_entity('r3', 'https://www.Example.org:443/p', CONS.ENTITY_URL),
            make_entity('r4', 'http://example.org/q', CONS.ENTITY_URL),
            make_entity('r4', 'https://news.example.com/a', CONS.ENTITY_URL),
            make_entity('r1', 'http://[broken', CONS.ENTITY_URL),
        ])

    def test_hashtags(self):
        network = build_bipartite_network(self.store, right=CONS.ENTITY_HASHTAG)
        self.assertEqual(network.edges, {('x', '#x'): 2, ('y', '#x'): 1})
        self.assertEqual(network.left_nodes, ['x', 'y'])
        self.assertEqual(network.right_nodes, ['#x'])
        self.assertEqual(network.skipped['unresolved'], 1)

    def test_domains(self):
        network = build_bipartite_network(self.store, right=CONS.BIPARTITE_RIGHT_DOMAIN)
        self.assertEqual(network.edges, {('y', 'example.org'): 2, ('y', 'news.example.com'): 1})
        self.assertEqual(network.skipped, {'unresolved': 0, 'malformed_urls': 1})
        self.assertEqual(build_bipartite_network(self.store, right=CONS.BIPARTITE_RIGHT_DOMAIN, min_weight=2).edges,
                         {('y', 'example.org'): 2})

    def test_edges_are_oriented_left_to_right(self):
        network = build_bipartite_network(self.store, right=CONS.BIPARTITE_RIGHT_DOMAIN)
        for left, right in network.edges:
            self.assertIn(left, network.left_nodes)
            self.assertIn(right, network.right_nodes)

    def test_rejections(self):
        with self.assertRaises(NetworkKindError):
            build_bipartite_network(self.store, left=CONS.TARGET_KIND_POST)
        with self.assertRaises(NetworkKindError):
            node_metrics(build_bipartite_network(self.store))

    def test_empty_store(self):
        network = build_bipartite_network(init_store('beta'))
        self.assertEqual(network.edges, {})
        self.assertEqual(network.meta['node_count'], 0)


class DomainTest(SimpleTestCase):
    def test_domain_of(self):
        cases = {
            'https://www.Example.org:443/p': 'example.org',
            'http://sub.example.com/a?b=c': 'sub.example.com',
            'https://EXAMPLE.org': 'example.org',
            'http://[broken': None,
            'https://': None,
        }
        for url, domain in cases.items():
            with self.subTest(url=url):
                self.assertEqual(domain_of(url), domain)


class NodeMetricsTest(SimpleTestCase):
    def test_triangle(self):
        metrics = node_metrics(network_of([('a', 'b', 1), ('b', 'c', 2), ('a', 'c', 3)]))
        self.assertEqual(metrics['a'], {'degree': 2, 'strength': 4, 'local_clustering': 1.0})
        self.assertEqual(metrics['c']['strength'], 5)

    def test_path(self):
        metrics = node_metrics(network_of([('a', 'b', 1), ('b', 'c', 1)]))
        self.assertEqual(metrics['b'], {'degree': 2, 'strength': 2, 'local_clustering': 0.0})
        self.assertEqual(metrics['a']['local_clustering'], 0.0)

    def test_direction_is_ignored_for_degree(self):
        metrics = node_metrics(network_of([('a', 'b', 2), ('b', 'a', 1), ('b', 'c', 1)], directed=True))
        self.assertEqual(metrics['a'], {'degree': 1, 'strength': 3, 'local_clustering': 0.0})
        self.assertEqual(metrics['b']['degree'], 2)

    def test_random_graphs_match_brute_force(self):
        rng = random.Random(4)
        for case in range(100):
            n = rng.randint(3, 30)
            p = rng.random()
            edges = [(f'n{u}', f'n{v}', rng.randint(1, 5)) for u, v in combinations(range(n), 2) if rng.random() < p]
            network = network_of(edges)
            metrics = node_metrics(network)
            for node in network.graph.nodes:
                with self.subTest(case=case, node=node):
                    self.assertAlmostEqual(metrics[node]['local_clustering'],
                                           brute_force_clustering(network.graph, node), places=12)
                    self.assertEqual(metrics[node]['degree'], network.graph.degree(node))

    def test_export_format(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'metrics.tsv'
            export_metrics(node_metrics(network_of([('a', 'b', 1), ('b', 'c', 2)])), path)
            self.assertEqual(path.read_text(encoding='utf-8'),
                             'node\tdegree\tstrength\tlocal_clustering\n'
                             'a\t1\t1\t0.000000\n'
                             'b\t2\t3\t0.000000\n'
                             'c\t1\t2\t0.000000\n')
