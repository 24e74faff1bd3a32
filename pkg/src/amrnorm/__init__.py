"""Normalization and Smatch scoring for AMR graphs."""

__version__ = '0.1.0'

from .corpus import AlignmentError, CorpusEntry, CorpusError, align, read_corpus, write_corpus
from .normalize import (
    NormalizeOptions, canonicalize_roles, collapsible_nodes, dereify_relations, normalize,
    preserve_structure, reifiable_relations, reify_attributes, reify_relations,
)
from .penman import (
    Graph, GraphError, Layout, PenmanError, PenmanSyntaxError, Tree, graph_to_tree, parse,
    serialize, to_triples, tree_to_graph, validate,
)
from .reification import ReificationEntry, ReificationTable, TableError, default_table, load_table
from .smatch import (
    InvalidGraphError, ScoreReport, SizeBoundError, brute_force_map, count_matches, hill_climb,
    score_corpus, score_pair,
)
from .stats import CorpusStats, corpus_stats

__all__ = [
    'AlignmentError', 'CorpusEntry', 'CorpusError', 'CorpusStats', 'Graph', 'GraphError',
    'InvalidGraphError', 'Layout', 'NormalizeOptions', 'PenmanError', 'PenmanSyntaxError',
    'ReificationEntry', 'ReificationTable', 'ScoreReport', 'SizeBoundError', 'TableError',
    'Tree', 'align', 'brute_force_map', 'canonicalize_roles', 'collapsible_nodes',
    'corpus_stats', 'count_matches', 'default_table', 'dereify_relations', 'graph_to_tree',
    'hill_climb', 'load_table', 'normalize', 'parse', 'preserve_structure', 'read_corpus',
    'reifiable_relations', 'reify_attributes', 'reify_relations', 'score_corpus', 'score_pair',
    'serialize', 'to_triples', 'tree_to_graph', 'validate', 'write_corpus',
]
