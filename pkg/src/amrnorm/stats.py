"""Corpus statistics: sizes, non-canonical roles, reifiable and collapsible counts."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .normalize import as_table, collapsible_nodes, reifiable_relations
from .penman import NON_CANONICAL_ROLES, Graph, to_triples, validate

__all__ = ['CorpusStats', 'corpus_stats', 'format_table', 'format_kv']


def _pct(part: int, whole: int) -> float:
    return 100.0 * part / whole if whole else 0.0


@dataclass
class CorpusStats:
    graphs: int = 0
    nodes: int = 0
    triples: int = 0
    relations: int = 0
    # role -> [graphs affected, triples affected]
    non_canonical: dict[str, list[int]] = field(
        default_factory=lambda: {r: [0, 0] for r in NON_CANONICAL_ROLES})
    reifiable_graphs: int = 0
    reifiable_relations: int = 0
    collapsible_graphs: int = 0
    collapsible_nodes: int = 0

    @property
    def reifiable_graphs_pct(self) -> float:
        return _pct(self.reifiable_graphs, self.graphs)

    @property
    def reifiable_relations_pct(self) -> float:
        """Reifiable relations as a share of all triples."""
        return _pct(self.reifiable_relations, self.triples)

    @property
    def collapsible_graphs_pct(self) -> float:
        return _pct(self.collapsible_graphs, self.graphs)

    @property
    def collapsible_nodes_pct(self) -> float:
        return _pct(self.collapsible_nodes, self.nodes)

    def non_canonical_pct(self, role: str) -> tuple[float, float]:
        g, t = self.non_canonical[role]
        return _pct(g, self.graphs), _pct(t, self.triples)

    def __add__(self, other: 'CorpusStats') -> 'CorpusStats':
        out = CorpusStats()
        for name in ('graphs', 'nodes', 'triples', 'relations', 'reifiable_graphs',
                     'reifiable_relations', 'collapsible_graphs', 'collapsible_nodes'):
            setattr(out, name, getattr(self, name) + getattr(other, name))
        for role in NON_CANONICAL_ROLES:
            a, b = self.non_canonical[role], other.non_canonical[role]
            out.non_canonical[role] = [a[0] + b[0], a[1] + b[1]]
        return out


def graph_stats(graph: Graph, table=None) -> CorpusStats:
    table = as_table(table)
    s = CorpusStats(graphs=1)
    s.nodes = len(graph.instances)
    s.triples = len(to_triples(graph))
    s.relations = len(graph.edges) + len(graph.attributes)
    for d in validate(graph):
        if d.code == 'non-canonical-role':
            role = d.message.split()[2]
            s.non_canonical[role][1] += 1
    for role, (g, t) in s.non_canonical.items():
        if t:
            s.non_canonical[role][0] = 1
    s.reifiable_relations = len(reifiable_relations(graph, table))
    s.reifiable_graphs = int(s.reifiable_relations > 0)
    s.collapsible_nodes = len(collapsible_nodes(graph, table))
    s.collapsible_graphs = int(s.collapsible_nodes > 0)
    return s


def corpus_stats(graphs: Iterable[Graph], table=None) -> CorpusStats:
    """Sum per-graph statistics over a corpus, in order."""
    table = as_table(table)
    total = CorpusStats()
    for g in graphs:
        total = total + graph_stats(g, table)
    return total


def format_table(stats: CorpusStats, name: str = 'Corpus') -> str:
    """Tab-separated rows in the shape of the corpus-analysis tables."""
    dom, mod = stats.non_canonical_pct(':domain-of'), stats.non_canonical_pct(':mod-of')
    rows = [
        ['Corpus', '# Graphs', '# Nodes', '# Triples'],
        [name, str(stats.graphs), str(stats.nodes), str(stats.triples)],
        [],
        ['Corpus', '% :domain-of Graphs', '% :domain-of Triples',
         '% :mod-of Graphs', '% :mod-of Triples'],
        [name] + [f'{v:.2f}' for v in (*dom, *mod)],
        [],
        ['Corpus', '% Reifiable Graphs', '% Reifiable Rels',
         '% Collapsible Graphs', '% Collapsible Nodes'],
        [name] + [f'{v:.2f}' for v in (stats.reifiable_graphs_pct,
                                         stats.reifiable_relations_pct,
                                         stats.collapsible_graphs_pct,
                                         stats.collapsible_nodes_pct)],
    ]
    return '\n'.join('\t'.join(r) for r in rows) + '\n'


def format_kv(stats: CorpusStats) -> str:
    items = [
        ('graphs', stats.graphs), ('nodes', stats.nodes), ('triples', stats.triples),
        ('relations', stats.relations),
    ]
    for role in NON_CANONICAL_ROLES:
        key = role.lstrip(':')
        g, t = stats.non_canonical[role]
        gp, tp = stats.non_canonical_pct(role)
        items += [(f'noncanonical.{key}.graphs', g), (f'noncanonical.{key}.triples', t),
                  (f'noncanonical.{key}.graphs_pct', f'{gp:.2f}'),
                  (f'noncanonical.{key}.triples_pct', f'{tp:.2f}')]
    items += [
        ('reifiable.graphs', stats.reifiable_graphs),
        ('reifiable.relations', stats.reifiable_relations),
        ('reifiable.graphs_pct', f'{stats.reifiable_graphs_pct:.2f}'),
        ('reifiable.relations_pct', f'{stats.reifiable_relations_pct:.2f}'),
        ('reifiable.relations_pct_of_relations',
         f'{_pct(stats.reifiable_relations, stats.relations):.2f}'),
        ('collapsible.graphs', stats.collapsible_graphs),
        ('collapsible.nodes', stats.collapsible_nodes),
        ('collapsible.graphs_pct', f'{stats.collapsible_graphs_pct:.2f}'),
        ('collapsible.nodes_pct', f'{stats.collapsible_nodes_pct:.2f}'),
    ]
    return ''.join(f'{k}={v}\n' for k, v in items)
