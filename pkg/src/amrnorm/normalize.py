"""Graph normalization passes.

Each pass takes a :class:`~amrnorm.penman.Graph` and returns a new one.  When
the input graph carries a layout (as graphs read from PENMAN text do), the
layout is updated alongside so the result still serializes in the shape of
the original, with reified nodes nested where the relation used to be.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields
from typing import Optional

from .penman import (
    TOP, TOP_SOURCE, Attribute, Edge, Graph, GraphError, Layout, LayoutBranch,
    default_layout, invert_role, is_inverted,
)
from .reification import ReificationTable, default_table

__all__ = [
    'NormalizeOptions', 'canonicalize_roles', 'reify_relations',
    'dereify_relations', 'reify_attributes', 'preserve_structure', 'normalize',
    'reifiable_relations', 'collapsible_nodes', 'as_table',
]

# inverted spellings with a canonical non-inverted equivalent
_INVERSE_EQUIVALENTS = {':domain-of': ':mod', ':mod-of': ':domain'}
# naive deinversions of roles whose canonical form ends in -of
_NAIVE_OF_ROLES = {':consist': ':consist-of', ':prep-on-behalf': ':prep-on-behalf-of',
                   ':prep-out': ':prep-out-of'}


@dataclass(frozen=True)
class NormalizeOptions:
    canonicalize_roles: bool = False
    reify_relations: bool = False
    dereify_relations: bool = False
    reify_attributes: bool = False
    preserve_structure: bool = False

    def __post_init__(self):
        if self.reify_relations and self.dereify_relations:
            raise ValueError('reify_relations and dereify_relations are mutually exclusive')

    def any(self) -> bool:
        return any(getattr(self, f.name) for f in fields(self))


def as_table(table) -> ReificationTable:
    """Coerce None (bundled table), a table, or a list of entries to a table."""
    if table is None:
        return default_table()
    if isinstance(table, ReificationTable):
        return table
    return ReificationTable(table)


class _Fresh:
    """Allocates variables that clash with no variable or constant."""

    def __init__(self, graph: Graph):
        self.taken = set(graph.instances)
        self.taken.add(TOP_SOURCE)
        self.taken.update(a.target for a in graph.attributes)
        self.taken.update(e.source for e in graph.constant_sourced)

    def __call__(self, concept: str) -> str:
        m = re.search(r'[A-Za-z]', concept)
        base = m.group().lower() if m else 'x'
        var, n = base, 2
        while var in self.taken:
            var = f'{base}{n}'
            n += 1
        self.taken.add(var)
        return var


class _Editor:
    """Mutable working copy of a graph used inside a single pass."""

    def __init__(self, graph: Graph):
        self.top = graph.top
        self.instances = dict(graph.instances)
        self.edges = list(graph.edges)
        self.attributes = list(graph.attributes)
        self.constant_sourced = list(graph.constant_sourced)
        layout = graph.layout
        self.branches: Optional[dict[str, list[LayoutBranch]]] = (
            {v: list(b) for v, b in layout.branches.items()} if layout else None)

    def find_branch(self, source: str, role: str, target: str,
                    kind: str) -> Optional[tuple[str, int]]:
        """Locate the layout branch encoding a relation as (parent, index)."""
        if self.branches is None:
            return None
        if kind == 'attribute':
            candidates = [(source, role, target)]
        elif kind == 'constant_sourced':
            candidates = [(target, invert_role(role), source)]
        else:
            candidates = [(source, role, target), (target, invert_role(role), source)]
        for parent, brole, btarget in candidates:
            for i, br in enumerate(self.branches.get(parent, ())):
                if br.role == brole and br.target == btarget:
                    return parent, i
        return None

    def build(self) -> Graph:
        layout = None
        if self.branches is not None:
            layout = Layout(self.top, {v: tuple(b) for v, b in self.branches.items()})
        return Graph(self.top, self.instances, tuple(self.edges), tuple(self.attributes),
                     tuple(self.constant_sourced), layout)


# -- canonical role inversions ----------------------------------------------

def _canonicalize(graph: Graph) -> tuple[Graph, int]:
    ed = _Editor(graph)
    changed = 0
    if ed.branches is not None:
        for parent, branches in ed.branches.items():
            for i, br in enumerate(branches):
                if br.role in _INVERSE_EQUIVALENTS:
                    new_role = _INVERSE_EQUIVALENTS[br.role]
                    old_role = br.role[:-3]
                    if br.target in ed.instances:
                        j = ed.edges.index(Edge(br.target, old_role, parent))
                        ed.edges[j] = Edge(parent, new_role, br.target)
                    else:
                        ed.constant_sourced.remove(Edge(br.target, old_role, parent))
                        ed.attributes.append(Attribute(parent, new_role, br.target))
                    branches[i] = br._replace(role=new_role)
                    changed += 1
                elif br.role in _NAIVE_OF_ROLES:
                    proper = _NAIVE_OF_ROLES[br.role]
                    if br.target in ed.instances:
                        j = ed.edges.index(Edge(parent, br.role, br.target))
                        ed.edges[j] = Edge(br.target, proper, parent)
                    else:
                        ed.attributes.remove(Attribute(parent, br.role, br.target))
                        ed.constant_sourced.append(Edge(br.target, proper, parent))
                    branches[i] = br._replace(role=invert_role(proper))
                    changed += 1
    else:
        # without a layout only spelling-independent cases are decidable
        for j, (s, r, t) in enumerate(ed.edges):
            if r in _NAIVE_OF_ROLES:
                ed.edges[j] = Edge(t, _NAIVE_OF_ROLES[r], s)
                changed += 1
        for a in list(ed.attributes):
            if a.role in _NAIVE_OF_ROLES:
                ed.attributes.remove(a)
                ed.constant_sourced.append(Edge(a.target, _NAIVE_OF_ROLES[a.role], a.source))
                changed += 1
        for e in list(ed.constant_sourced):
            # a constant-sourced relation can only come from an inverted spelling
            spelled = invert_role(e.role)
            if spelled in _INVERSE_EQUIVALENTS:
                ed.constant_sourced.remove(e)
                ed.attributes.append(Attribute(e.target, _INVERSE_EQUIVALENTS[spelled], e.source))
                changed += 1
    return ed.build(), changed


def canonicalize_roles(graph: Graph) -> Graph:
    """Rewrite non-canonical role spellings.

    ``:domain-of`` becomes ``:mod`` and ``:mod-of`` becomes ``:domain``
    (which reverses the deinverted edge), and the naive deinversions
    ``:consist``, ``:prep-on-behalf`` and ``:prep-out`` become inverted
    ``-of``-final roles such as ``:consist-of-of``.  The ``-of`` spellings
    are only known from the graph's layout; without one, only the latter
    rewrites and constant-sourced relations are handled.
    """
    return _canonicalize(graph)[0]


# -- relation reification ---------------------------------------------------

def reifiable_relations(graph: Graph, table=None) -> list[tuple[str, str, str]]:
    """Edges and attributes whose role has a unique reifying row."""
    table = as_table(table)
    return [rel for rel in graph.relations() if table.reification(rel[1])]


def _reify(graph: Graph, table: ReificationTable) -> tuple[Graph, int]:
    ed = _Editor(graph)
    fresh = _Fresh(graph)
    count = 0
    new_edges: list[Edge] = []
    appended: list[Edge] = []
    for e in ed.edges:
        row = table.reification(e.role)
        if row is None:
            new_edges.append(e)
            continue
        var = fresh(row.concept)
        ed.instances[var] = row.concept
        new_edges.append(Edge(var, row.source_role, e.source))
        new_edges.append(Edge(var, row.target_role, e.target))
        _reify_branch(ed, e, 'edge', var, row)
        count += 1
    new_attrs: list[Attribute] = []
    for a in ed.attributes:
        row = table.reification(a.role)
        if row is None:
            new_attrs.append(a)
            continue
        var = fresh(row.concept)
        ed.instances[var] = row.concept
        appended.append(Edge(var, row.source_role, a.source))
        new_attrs.append(Attribute(var, row.target_role, a.target))
        _reify_branch(ed, a, 'attribute', var, row)
        count += 1
    ed.edges = new_edges + appended
    ed.attributes = new_attrs
    return ed.build(), count


def _reify_branch(ed: _Editor, rel, kind: str, var: str, row) -> None:
    loc = ed.find_branch(rel.source, rel.role, rel.target, kind)
    if loc is None:
        return
    parent, i = loc
    br = ed.branches[parent][i]
    if parent == rel.source and not is_inverted(br.role):
        ed.branches[parent][i] = LayoutBranch(invert_role(row.source_role), var, True)
        ed.branches[var] = [LayoutBranch(row.target_role, rel.target, br.defines)]
    else:
        ed.branches[parent][i] = LayoutBranch(invert_role(row.target_role), var, True)
        ed.branches[var] = [LayoutBranch(row.source_role, rel.source, br.defines)]


def reify_relations(graph: Graph, table=None) -> Graph:
    """Replace each reifiable relation with a new node and two relations.

    ``(a :role b)`` becomes ``(a :<source>-of (c / <concept> :<target> b))``
    using the table row for ``:role``.  Every reified relation gets its own
    node, even when two relations on a node map to the same concept.
    """
    return _reify(graph, as_table(table))[0]


# -- dereification ----------------------------------------------------------

def _collapse_plan(graph: Graph, var: str, table: ReificationTable):
    """Return (row, source_edge, target_relation) if *var* can be collapsed."""
    if var == graph.top:
        return None
    row = table.dereification(graph.instances[var])
    if row is None:
        return None
    src = tgt = None
    for e in graph.edges:
        if e.target == var:
            return None
        if e.source == var:
            if e.role == row.source_role and src is None:
                src = e
            elif e.role == row.target_role and tgt is None:
                tgt = e
            else:
                return None
    for a in graph.attributes:
        if a.source == var:
            if a.role == row.target_role and tgt is None:
                tgt = a
            else:
                return None
    if any(e.target == var for e in graph.constant_sourced):
        return None
    if src is None or tgt is None or src.target == tgt.target:
        return None
    return row, src, tgt


def collapsible_nodes(graph: Graph, table=None) -> list[str]:
    """Variables whose node could be dereified into a single relation."""
    table = as_table(table)
    return [v for v in graph.instances if _collapse_plan(graph, v, table)]


def _dereify_once(graph: Graph, table: ReificationTable) -> tuple[Graph, int]:
    count = 0
    for var in list(graph.instances):
        plan = _collapse_plan(graph, var, table)
        if plan is None:
            continue
        graph = _collapse(graph, var, *plan)
        count += 1
    return graph, count


def _collapse(graph: Graph, var: str, row, src: Edge, tgt) -> Graph:
    ed = _Editor(graph)
    a, b = src.target, tgt.target
    del ed.instances[var]
    if isinstance(tgt, Attribute):
        ed.edges.remove(src)
        ed.attributes[ed.attributes.index(tgt)] = Attribute(a, row.role, b)
    else:
        ed.edges[ed.edges.index(src)] = Edge(a, row.role, b)
        ed.edges.remove(tgt)
    if ed.branches is not None:
        _collapse_branches(ed, var, row, a, b)
    return ed.build()


def _collapse_branches(ed: _Editor, var: str, row, a: str, b: str) -> None:
    node_branches = ed.branches.pop(var, [])
    defined_here = {br.target for br in node_branches if br.defines}
    # drop references to var carried on a or b
    for end, role in ((a, row.source_role), (b, row.target_role)):
        if end in ed.branches:
            ed.branches[end] = [br for br in ed.branches[end]
                                if not (br.target == var and br.role == invert_role(role)
                                        and not br.defines)]
    for parent, branches in ed.branches.items():
        for i, br in enumerate(branches):
            if br.target == var and br.defines:
                if parent == a:
                    branches[i] = LayoutBranch(row.role, b, b in defined_here)
                else:
                    branches[i] = LayoutBranch(invert_role(row.role), a, a in defined_here)
                return


def dereify_relations(graph: Graph, table=None) -> Graph:
    """Collapse reified nodes back into relations, until nothing changes.

    A node collapses only when it is not the top and takes part in exactly
    the two relations created by reification.  Shortcut and ambiguous rows
    never collapse.
    """
    table = as_table(table)
    while True:
        graph, n = _dereify_once(graph, table)
        if not n:
            return graph


# -- attribute reification --------------------------------------------------

def _reify_attrs(graph: Graph) -> tuple[Graph, int]:
    ed = _Editor(graph)
    fresh = _Fresh(graph)
    count = 0
    for a in graph.attributes:
        var = fresh(a.target)
        ed.instances[var] = a.target
        ed.edges.append(Edge(a.source, a.role, var))
        loc = ed.find_branch(a.source, a.role, a.target, 'attribute')
        if loc:
            parent, i = loc
            ed.branches[parent][i] = LayoutBranch(a.role, var, True)
            ed.branches[var] = []
        count += 1
    for e in graph.constant_sourced:
        var = fresh(e.source)
        ed.instances[var] = e.source
        ed.edges.append(Edge(var, e.role, e.target))
        loc = ed.find_branch(e.source, e.role, e.target, 'constant_sourced')
        if loc:
            parent, i = loc
            ed.branches[parent][i] = LayoutBranch(invert_role(e.role), var, True)
            ed.branches[var] = []
        count += 1
    ed.attributes = []
    ed.constant_sourced = []
    return ed.build(), count


def reify_attributes(graph: Graph) -> Graph:
    """Turn every constant into a node whose concept is the constant.

    ``:mod 7`` becomes ``:mod (x / 7)``.  Constants that were the source of
    an inverted relation become nodes too, so those relations start
    producing triples.
    """
    return _reify_attrs(graph)[0]


# -- structure preservation -------------------------------------------------

def _preserve(graph: Graph, layout: Optional[Layout]) -> tuple[Graph, int]:
    if layout is None:
        layout = graph.layout if graph.layout is not None else default_layout(graph)
    sites = layout.definition_site
    ed = _Editor(graph)
    if ed.branches is None or layout is not graph.layout:
        ed.branches = {v: list(b) for v, b in layout.branches.items()}
    existing = set(graph.edges)
    count = 0
    for var in graph.instances:
        if var == graph.top:
            continue
        if var not in sites:
            raise GraphError(f'layout has no definition site for {var!r}')
        edge = Edge(sites[var], TOP, var)
        if edge in existing:
            continue
        ed.edges.append(edge)
        ed.branches.setdefault(sites[var], []).append(LayoutBranch(TOP, var))
        count += 1
    return ed.build(), count


def preserve_structure(graph: Graph, layout: Optional[Layout] = None) -> Graph:
    """Add a ``:TOP`` edge from each node's tree parent to the node.

    The parent is where the node is defined in *layout* (by default the
    graph's own), regardless of edge direction, so the result may contain
    cycles.  A graph with n nodes gains n-1 edges.
    """
    return _preserve(graph, layout)[0]


# -- composition ------------------------------------------------------------

def normalize(graph: Graph, options: NormalizeOptions, table=None,
              layout: Optional[Layout] = None, counts: Optional[dict] = None) -> Graph:
    """Apply the selected passes in a fixed order.

    Order: role canonicalization, relation (de)reification, attribute
    reification, structure preservation.  When *counts* is given, the number
    of changes made by each pass is added to it.
    """
    if options.reify_relations and options.dereify_relations:
        raise ValueError('reify_relations and dereify_relations are mutually exclusive')
    if layout is not None:
        graph = graph.with_(layout=layout)
    table = as_table(table)
    tally = {'roles_canonicalized': 0, 'relations_reified': 0, 'nodes_collapsed': 0,
             'attributes_reified': 0, 'top_triples_added': 0}
    if options.canonicalize_roles:
        graph, tally['roles_canonicalized'] = _canonicalize(graph)
    if options.reify_relations:
        graph, tally['relations_reified'] = _reify(graph, table)
    elif options.dereify_relations:
        while True:
            graph, n = _dereify_once(graph, table)
            tally['nodes_collapsed'] += n
            if not n:
                break
    if options.reify_attributes:
        graph, tally['attributes_reified'] = _reify_attrs(graph)
    if options.preserve_structure:
        graph, tally['top_triples_added'] = _preserve(graph, None)
    if counts is not None:
        for k, v in tally.items():
            counts[k] = counts.get(k, 0) + v
    return graph
