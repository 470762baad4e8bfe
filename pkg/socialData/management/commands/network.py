from pathlib import Path

from unifiedsocial import constants as CONS
from unifiedsocial.decorators import command_errors
from socialData import networks
from socialData.exceptions import ConfigError
from socialData.management.base import ReportCommand
from socialData.store import close_store, open_store

KIND_INTERACTION = 'interaction'
KIND_COOCCUR = 'cooccur'
KIND_BIPARTITE = 'bipartite'
FORMAT_EDGES = 'edges'
FORMAT_JSON = 'json'
SUFFIXES = {
    FORMAT_EDGES: '.tsv',
    FORMAT_JSON: '.json',
}


def window_file_name(index, window, suffix):
    return f'window_{index:03d}_{window.window_start:%Y%m%dT%H%M%SZ}{suffix}'


class Command(ReportCommand):
    help = 'Builds an interaction, co-occurrence or bipartite network from a store and writes it out'

    def add_arguments(self, parser):
        parser.add_argument('kind', choices=[KIND_INTERACTION, KIND_COOCCUR, KIND_BIPARTITE])
        parser.add_argument('--store', type=str, required=True)
        parser.add_argument('--interaction', type=str, default=CONS.ACTION_SHARE,
                            choices=CONS.ACTION_TYPE_VALUES, help='action type linking accounts')
        parser.add_argument('--entity-type', type=str, default=CONS.ENTITY_HASHTAG,
                            choices=CONS.ENTITY_TYPE_VALUES, help='entity type for co-occurrence networks')
        parser.add_argument('--right', type=str, default=CONS.ENTITY_HASHTAG,
                            choices=CONS.ENTITY_TYPE_VALUES + [CONS.BIPARTITE_RIGHT_DOMAIN],
                            help='node class on the right of a bipartite network')
        parser.add_argument('--start', type=str, default=None, help='inclusive start timestamp')
        parser.add_argument('--end', type=str, default=None, help='exclusive end timestamp')
        parser.add_argument('--step', type=str, default=None,
                            help='window length such as 90m, 1h or 1d; writes one file per window into --out')
        parser.add_argument('--min-weight', type=int, default=1)
        parser.add_argument('--weighting', type=str, default=CONS.WEIGHTING_COUNT, choices=CONS.WEIGHTING_VALUES)
        parser.add_argument('--undirected', action='store_true', help='interaction networks only')
        parser.add_argument('--format', type=str, default=FORMAT_EDGES, choices=[FORMAT_EDGES, FORMAT_JSON])
        parser.add_argument('--out', type=str, required=True, help='output file, or directory when --step is given')
        parser.add_argument('--metrics', type=str, default=None,
                            help='also write degree, strength and local clustering per node to this path')
        self.add_config_argument(parser)
        self.add_json_argument(parser)

    def write_network(self, network, out_path, output_format, metrics_path):
        if output_format == FORMAT_JSON:
            networks.export_json(network, out_path)
        else:
            networks.export_edge_list(network, out_path)
        if metrics_path:
            networks.export_metrics(networks.node_metrics(network), metrics_path)

    def build(self, store, options, time_range):
        kind = options['kind']
        common = {'time_range': time_range, 'min_weight': options['min_weight'], 'weighting': options['weighting']}
        if kind == KIND_INTERACTION:
            return networks.build_user_interaction_network(store, options['interaction'],
                                                           directed=not options['undirected'], **common)
        if kind == KIND_COOCCUR:
            return networks.build_cooccurrence_network(store, options['entity_type'], **common)
        return networks.build_bipartite_network(store, CONS.TARGET_KIND_ACCOUNT, options['right'], **common)

    @command_errors('network')
    def handle(self, *args, **options):
        self.load_config(options)
        start = self.timestamp_option('start', options['start'])
        end = self.timestamp_option('end', options['end'])
        suffix = SUFFIXES[options['format']]
        if options['step'] and options['kind'] != KIND_INTERACTION:
            raise ConfigError('--step: only interaction networks can be split into windows')
        if options['step'] and (start is None or end is None):
            raise ConfigError('--step: needs both --start and --end')
        if options['metrics'] and options['kind'] == KIND_BIPARTITE:
            raise ConfigError('--metrics: local clustering is not defined for bipartite networks')

        store = open_store(options['store'])
        try:
            if options['step']:
                step = self.duration_option('step', options['step'])
                windows = networks.user_interaction_over_time(
                    store, options['interaction'], start, end, step, weighting=options['weighting'],
                    min_weight=options['min_weight'], directed=not options['undirected'])
            else:
                time_range = (start, end) if start or end else None
                network = self.build(store, options, time_range)
        finally:
            close_store(store)

        if options['step']:
            out_dir = Path(options['out'])
            out_dir.mkdir(parents=True, exist_ok=True)
            metrics_dir = Path(options['metrics']) if options['metrics'] else None
            if metrics_dir:
                metrics_dir.mkdir(parents=True, exist_ok=True)
            for index, window in enumerate(windows):
                metrics_path = metrics_dir / window_file_name(index, window, '.tsv') if metrics_dir else None
                self.write_network(window.network, out_dir / window_file_name(index, window, suffix),
                                   options['format'], metrics_path)
            report = {'windows': [{'window_start': window.network.params['start'],
                                   'window_end': window.network.params['end'],
                                   'meta': window.network.meta} for window in windows]}
            lines = [f'Wrote {len(windows)} windows to {out_dir}']
            lines += [f'  {w["window_start"]}: {w["meta"]["node_count"]} nodes, {w["meta"]["edge_count"]} edges'
                      for w in report['windows']]
        else:
            self.write_network(network, options['out'], options['format'], options['metrics'])
            report = network.meta
            lines = [f'Wrote {network.kind} network to {options["out"]}: {report["node_count"]} nodes, '
                     f'{report["edge_count"]} edges']
            lines += [f'  skipped {reason}: {n}' for reason, n in report['skipped'].items()]
        self.write_report(report, options['json'], lines)
