"""PENMAN notation: parsing, serialization, and tree/graph conversion.

A PENMAN string is first parsed into a :class:`Tree`, which keeps the
surface structure (branch order, where each node is defined, and which
relations were written inverted).  :func:`tree_to_graph` turns a tree into
a :class:`Graph` of deinverted triples plus a :class:`Layout` that records
the tree shape, and :func:`graph_to_tree` goes the other way.

    >>> g = Graph.from_string('(a / apple :quant 5)')
    >>> [tuple(t) for t in to_triples(g)]
    [('a', ':instance', 'apple'), ('top', ':TOP', 'a'), ('a', ':quant', '5')]
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Optional, Union

__all__ = [
    'INSTANCE', 'TOP', 'TOP_SOURCE', 'CANONICAL_OF_ROLES',
    'PenmanError', 'PenmanSyntaxError', 'GraphError',
    'Branch', 'Node', 'Tree', 'Triple', 'Edge', 'Attribute',
    'LayoutBranch', 'Layout', 'Graph', 'Diagnostic',
    'parse', 'serialize', 'tree_to_graph', 'graph_to_tree', 'to_triples',
    'validate', 'is_inverted', 'invert_role', 'deinvert_role',
]

INSTANCE = ':instance'
TOP = ':TOP'
TOP_SOURCE = 'top'

# roles whose canonical (non-inverted) spelling already ends in -of
CANONICAL_OF_ROLES = frozenset({':consist-of', ':prep-on-behalf-of', ':prep-out-of'})

# naive spellings that stats/validate flag as non-canonical
NON_CANONICAL_ROLES = (':domain-of', ':mod-of', ':consist', ':prep-on-behalf', ':prep-out')


class PenmanError(Exception):
    """Base class for errors raised by this module."""


class PenmanSyntaxError(PenmanError):
    """Raised when PENMAN text cannot be parsed.

    Attributes ``pos``, ``line`` and ``column`` locate the problem
    (``line`` and ``column`` are 1-based).
    """

    def __init__(self, message: str, text: str = '', pos: int = 0):
        self.pos = pos
        self.line = text.count('\n', 0, pos) + 1
        self.column = pos - (text.rfind('\n', 0, pos) + 1) + 1
        self.reason = message
        super().__init__(f'line {self.line}, column {self.column}: {message}')


class GraphError(PenmanError):
    """Raised when a tree or graph violates a structural constraint."""


def is_inverted(role: str) -> bool:
    return role.endswith('-of') and role not in CANONICAL_OF_ROLES


def invert_role(role: str) -> str:
    """Inverted spelling of a deinverted role (``:ARG0`` -> ``:ARG0-of``)."""
    return role + '-of'


def deinvert_role(role: str) -> str:
    return role[:-3] if is_inverted(role) else role


# -- tree -------------------------------------------------------------------

@dataclass(frozen=True)
class Branch:
    role: str
    target: Union['Node', str]


@dataclass(frozen=True)
class Node:
    variable: str
    concept: str
    branches: tuple[Branch, ...] = ()


@dataclass(frozen=True)
class Tree:
    """Concrete-syntax parse of one PENMAN expression."""

    root: Node

    @property
    def root_variable(self) -> str:
        return self.root.variable

    def nodes(self) -> Iterator[Node]:
        """Yield every node definition in preorder."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed([b.target for b in node.branches
                                   if isinstance(b.target, Node)]))

    def variables(self) -> list[str]:
        return [node.variable for node in self.nodes()]

    def __str__(self) -> str:
        return serialize(self)


# -- graph ------------------------------------------------------------------

class Triple(NamedTuple):
    source: str
    role: str
    target: str


class Edge(NamedTuple):
    source: str
    role: str
    target: str


class Attribute(NamedTuple):
    source: str
    role: str
    target: str


class LayoutBranch(NamedTuple):
    """One branch of a serialized node.

    ``role`` is spelled as serialized (possibly with ``-of``), ``target`` is a
    variable or constant token and ``defines`` marks the branch where the
    target variable's node definition appears.
    """
    role: str
    target: str
    defines: bool = False


@dataclass(frozen=True)
class Layout:
    """Tree shape of a serialized graph, minus the concepts."""

    top: str
    branches: dict[str, tuple[LayoutBranch, ...]]

    @property
    def definition_site(self) -> dict[str, str]:
        sites = {}
        for parent, branches in self.branches.items():
            for br in branches:
                if br.defines:
                    sites[br.target] = parent
        return sites

    @property
    def branch_order(self) -> dict[str, list[str]]:
        return {var: [br.role for br in brs] for var, brs in self.branches.items()}

    def replace(self, var: str, branches: Iterable[LayoutBranch]) -> 'Layout':
        new = dict(self.branches)
        new[var] = tuple(branches)
        return Layout(self.top, new)


@dataclass(frozen=True)
class Graph:
    """Abstract AMR graph.

    ``edges`` run between variables and ``attributes`` from a variable to a
    constant, all in deinverted direction.  ``constant_sourced`` keeps
    relations whose source is a constant (an inverted edge written on a
    constant); they are invalid, never produce triples, and are carried
    along only so they can be repaired or reported.
    """

    top: str
    instances: dict[str, str]
    edges: tuple[Edge, ...] = ()
    attributes: tuple[Attribute, ...] = ()
    constant_sourced: tuple[Edge, ...] = ()
    layout: Optional[Layout] = field(default=None, compare=False, repr=False)

    @classmethod
    def from_string(cls, text: str, allow_cycles: bool = False) -> 'Graph':
        graph, _ = tree_to_graph(parse(text), allow_cycles=allow_cycles)
        return graph

    @property
    def variables(self) -> list[str]:
        return list(self.instances)

    def triples(self) -> list[Triple]:
        return to_triples(self)

    def relations(self) -> list[tuple[str, str, str]]:
        """Edges and attributes together, edges first."""
        return list(self.edges) + list(self.attributes)

    def with_(self, **changes) -> 'Graph':
        values = {
            'top': self.top, 'instances': self.instances, 'edges': self.edges,
            'attributes': self.attributes,
            'constant_sourced': self.constant_sourced, 'layout': self.layout,
        }
        values.update(changes)
        return Graph(**values)

    def __str__(self) -> str:
        return serialize(graph_to_tree(self))


class Diagnostic(NamedTuple):
    severity: str  # 'error' or 'warning'
    code: str
    message: str


# -- parsing ----------------------------------------------------------------

_TOKEN_RE = re.compile(r'''
    (?P<ws>\s+)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<slash>/)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<role>:[^\s()"/:]*)
  | (?P<symbol>[^\s()"/:]+(?::[^\s()"/:]+)*)
  | (?P<bad>.)
''', re.VERBOSE | re.DOTALL)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        if kind == 'ws':
            continue
        if kind == 'bad':
            if m.group() == '"':
                raise PenmanSyntaxError('unterminated string', text, m.start())
            raise PenmanSyntaxError(f'unexpected character {m.group()!r}', text, m.start())
        tokens.append((kind, m.group(), m.start()))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def error(self, msg: str, pos: Optional[int] = None) -> PenmanSyntaxError:
        if pos is None:
            pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        return PenmanSyntaxError(msg, self.text, pos)

    def peek(self) -> Optional[str]:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def expect(self, kind: str, what: str) -> tuple[str, str, int]:
        if self.peek() != kind:
            found = self.tokens[self.i][1] if self.i < len(self.tokens) else 'end of input'
            raise self.error(f'expected {what}, found {found!r}')
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def node(self) -> Node:
        self.expect('lparen', "'('")
        _, var, var_pos = self.expect('symbol', 'a variable')
        if self.peek() != 'slash':
            raise self.error(f'missing concept for node definition of {var!r}')
        self.i += 1
        if self.peek() not in ('symbol', 'string'):
            raise self.error('expected a concept after /')
        concept = self.tokens[self.i][1]
        self.i += 1
        branches = []
        while self.peek() == 'role':
            _, role, role_pos = self.tokens[self.i]
            if role == ':':
                raise self.error('empty role', role_pos)
            self.i += 1
            kind = self.peek()
            if kind == 'lparen':
                target: Union[Node, str] = self.node()
            elif kind in ('symbol', 'string'):
                target = self.tokens[self.i][1]
                self.i += 1
            else:
                raise self.error(f'missing target for role {role}')
            branches.append(Branch(role, target))
        self.expect('rparen', "')'")
        return Node(var, concept, tuple(branches))


def parse(text: str) -> Tree:
    """Parse one PENMAN node expression into a :class:`Tree`.

    String constants keep their surrounding quotes.

    Raises:
        PenmanSyntaxError: on malformed input, with the offending position.
    """
    p = _Parser(text)
    root = p.node()
    if p.i != len(p.tokens):
        if p.peek() == 'rparen':
            raise p.error("unbalanced ')'")
        raise p.error('trailing content after the graph')
    return Tree(root)


# -- serialization ----------------------------------------------------------

def serialize(tree: Tree, indent: Optional[int] = 3) -> str:
    """Format *tree* as PENMAN text.

    Each branch goes on its own line, indented *indent* spaces per level of
    nesting.  With ``indent=None`` the whole graph is written on one line.
    """
    parts: list[str] = []
    _write_node(tree.root, 1, indent, parts)
    return ''.join(parts)


def _write_node(node: Node, depth: int, indent: Optional[int], parts: list[str]) -> None:
    parts.append(f'({node.variable} / {node.concept}')
    for br in node.branches:
        parts.append(' ' if indent is None else '\n' + ' ' * (indent * depth))
        parts.append(br.role + ' ')
        if isinstance(br.target, Node):
            _write_node(br.target, depth + 1, indent, parts)
        else:
            parts.append(br.target)
    parts.append(')')


# -- tree <-> graph ---------------------------------------------------------

def _collect(tree: Tree):
    """Walk a tree, returning everything needed to build a graph.

    Problems are returned as diagnostics rather than raised so that
    :func:`validate` can report all of them.
    """
    defined: set[str] = set()
    problems: list[Diagnostic] = []
    for node in tree.nodes():
        if node.variable in defined:
            problems.append(Diagnostic(
                'error', 'duplicate-definition',
                f'variable {node.variable!r} is defined more than once'))
        defined.add(node.variable)

    instances: dict[str, str] = {}
    edges: list[Edge] = []
    attributes: list[Attribute] = []
    constant_sourced: list[Edge] = []
    branches: dict[str, tuple[LayoutBranch, ...]] = {}

    def visit(node: Node) -> None:
        instances.setdefault(node.variable, node.concept)
        first = node.variable not in branches
        if first:
            branches[node.variable] = ()
        layout_branches = []
        for br in node.branches:
            if isinstance(br.target, Node):
                target, defines = br.target.variable, True
            else:
                target, defines = br.target, False
            is_var = target in defined
            if is_inverted(br.role):
                role = deinvert_role(br.role)
                if is_var:
                    edges.append(Edge(target, role, node.variable))
                else:
                    constant_sourced.append(Edge(target, role, node.variable))
                    problems.append(Diagnostic(
                        'error', 'constant-source',
                        f'inverted relation {br.role} on {node.variable!r} has '
                        f'constant {target!r} as its source'))
            elif is_var:
                edges.append(Edge(node.variable, br.role, target))
            else:
                attributes.append(Attribute(node.variable, br.role, target))
            if br.role in NON_CANONICAL_ROLES:
                problems.append(Diagnostic(
                    'warning', 'non-canonical-role',
                    f'non-canonical role {br.role} on {node.variable!r}'))
            layout_branches.append(LayoutBranch(br.role, target, defines))
            if defines:
                visit(br.target)
        # a duplicate definition keeps the first node's branches
        if first:
            branches[node.variable] = tuple(layout_branches)

    visit(tree.root)
    graph = Graph(tree.root.variable, instances, tuple(edges), tuple(attributes),
                  tuple(constant_sourced))
    layout = Layout(tree.root.variable, branches)
    return graph, layout, problems


def _find_cycle(variables: Iterable[str], edges: Iterable[Edge]) -> Optional[list[str]]:
    """Return the variables of one directed cycle, or None.

    Structural ``:TOP`` edges are ignored.
    """
    succ: dict[str, list[str]] = {v: [] for v in variables}
    for s, role, t in edges:
        if role != TOP:
            succ.setdefault(s, []).append(t)
            succ.setdefault(t, [])
    color = dict.fromkeys(succ, 0)
    for start in succ:
        if color[start]:
            continue
        path = [start]
        stack = [iter(succ[start])]
        color[start] = 1
        while stack:
            for nxt in stack[-1]:
                if color[nxt] == 1:
                    return path[path.index(nxt):]
                if color[nxt] == 0:
                    color[nxt] = 1
                    path.append(nxt)
                    stack.append(iter(succ[nxt]))
                    break
            else:
                color[path.pop()] = 2
                stack.pop()
    return None


def tree_to_graph(tree: Tree, allow_cycles: bool = False) -> tuple[Graph, Layout]:
    """Convert a tree to a graph of deinverted triples and its layout.

    Inverted relations written on constants are kept in
    ``Graph.constant_sourced`` (see :func:`validate`).

    Raises:
        GraphError: on duplicate node definitions, or on a directed cycle
            unless *allow_cycles* is true.
    """
    graph, layout, problems = _collect(tree)
    for d in problems:
        if d.code == 'duplicate-definition':
            raise GraphError(d.message)
    if not allow_cycles:
        cycle = _find_cycle(graph.instances, graph.edges)
        if cycle:
            raise GraphError('directed cycle: ' + ' -> '.join(cycle + cycle[:1]))
    return graph.with_(layout=layout), layout


def _relation_key(parent: str, br: LayoutBranch, variables) -> tuple[str, str, str, str]:
    """(kind, source, role, target) of the relation a layout branch encodes."""
    if is_inverted(br.role):
        kind = 'edge' if br.target in variables else 'constant_sourced'
        return kind, br.target, deinvert_role(br.role), parent
    kind = 'edge' if br.target in variables else 'attribute'
    return kind, parent, br.role, br.target


def _check_layout(graph: Graph, layout: Layout) -> Optional[str]:
    """Return a description of the first inconsistency, or None."""
    if layout.top != graph.top:
        return f'layout top {layout.top!r} differs from graph top {graph.top!r}'
    variables = graph.instances
    for var in layout.branches:
        if var not in variables:
            return f'layout references unknown variable {var!r}'
    expected: dict[tuple, int] = {}
    for kind, rels in (('edge', graph.edges), ('attribute', graph.attributes),
                       ('constant_sourced', graph.constant_sourced)):
        for s, r, t in rels:
            key = (kind, s, r, t)
            expected[key] = expected.get(key, 0) + 1
    sites: dict[str, str] = {}
    for parent, branches in layout.branches.items():
        for br in branches:
            key = _relation_key(parent, br, variables)
            if not expected.get(key):
                return f'layout branch {br.role} {br.target} on {parent!r} matches no relation'
            expected[key] -= 1
            if br.defines:
                if br.target not in variables:
                    return f'layout defines unknown variable {br.target!r}'
                if br.target in sites:
                    return f'layout defines {br.target!r} more than once'
                sites[br.target] = parent
    missing = [k for k, n in expected.items() if n]
    if missing:
        _, s, r, t = missing[0]
        return f'relation ({s} {r} {t}) is missing from the layout'
    for var in variables:
        if var != graph.top and var not in sites:
            return f'layout has no definition site for {var!r}'
    if graph.top in sites:
        return 'layout defines the top variable below the root'
    # definitions must hang off the root, not form a detached loop
    seen, stack = {graph.top}, [graph.top]
    while stack:
        for br in layout.branches.get(stack.pop(), ()):
            if br.defines and br.target not in seen:
                seen.add(br.target)
                stack.append(br.target)
    if len(seen) != len(variables):
        return 'layout node definitions are not reachable from the top'
    return None


def default_layout(graph: Graph) -> Layout:
    """Deterministic layout for a graph with no recorded serialization.

    Depth-first from the top; on each node attributes come first, then
    outgoing edges, then incoming edges (written inverted), each in
    insertion order.  A variable is defined at its first occurrence.

    Raises:
        GraphError: if some variable is unreachable from the top.
    """
    if graph.top not in graph.instances:
        raise GraphError(f'top {graph.top!r} has no instance')
    owners: dict[str, list[tuple[str, LayoutBranch, int]]] = {v: [] for v in graph.instances}
    # each relation gets an id so it is emitted exactly once
    rel_id = 0
    for s, r, t in graph.attributes:
        _require(graph, s)
        owners[s].append((s, LayoutBranch(r, t), rel_id))
        rel_id += 1
    outgoing, incoming = [], []
    for s, r, t in graph.edges:
        _require(graph, s)
        _require(graph, t)
        outgoing.append((s, LayoutBranch(r, t), rel_id))
        incoming.append((t, LayoutBranch(invert_role(r), s), rel_id))
        rel_id += 1
    for owner, br, rid in outgoing + incoming:
        owners[owner].append((owner, br, rid))
    for s, r, t in graph.constant_sourced:
        _require(graph, t)
        owners[t].append((t, LayoutBranch(invert_role(r), s), rel_id))
        rel_id += 1

    emitted: set[int] = set()
    defined = {graph.top}
    branches: dict[str, list[LayoutBranch]] = {}

    def visit(var: str) -> None:
        out = branches.setdefault(var, [])
        for _, br, rid in owners[var]:
            if rid in emitted:
                continue
            emitted.add(rid)
            if br.target in graph.instances and br.target not in defined:
                defined.add(br.target)
                out.append(br._replace(defines=True))
                visit(br.target)
            else:
                out.append(br)

    visit(graph.top)
    if len(defined) != len(graph.instances):
        missing = [v for v in graph.instances if v not in defined]
        raise GraphError(f'graph is disconnected; unreachable: {", ".join(missing)}')
    return Layout(graph.top, {v: tuple(b) for v, b in branches.items()})


def _require(graph: Graph, var: str) -> None:
    if var not in graph.instances:
        raise GraphError(f'variable {var!r} has no instance')


def graph_to_tree(graph: Graph, layout: Optional[Layout] = None) -> Tree:
    """Build a tree for *graph*.

    An explicit *layout* must be consistent with the graph.  Without one the
    graph's own recorded layout is used when it is still consistent, and a
    default layout otherwise.

    Raises:
        GraphError: if an explicit layout does not fit the graph.
    """
    if layout is not None:
        problem = _check_layout(graph, layout)
        if problem:
            raise GraphError(f'inconsistent layout: {problem}')
    elif graph.layout is not None and _check_layout(graph, graph.layout) is None:
        layout = graph.layout
    else:
        layout = default_layout(graph)

    def build(var: str) -> Node:
        branches = []
        for br in layout.branches.get(var, ()):
            target = build(br.target) if br.defines else br.target
            branches.append(Branch(br.role, target))
        return Node(var, graph.instances[var], tuple(branches))

    return Tree(build(layout.top))


def to_triples(graph: Graph) -> list[Triple]:
    """Instances, the TOP triple, edges, then attributes.

    Constant-sourced relations are not emitted.
    """
    triples = [Triple(v, INSTANCE, c) for v, c in graph.instances.items()]
    triples.append(Triple(TOP_SOURCE, TOP, graph.top))
    triples.extend(Triple(*e) for e in graph.edges)
    triples.extend(Triple(*a) for a in graph.attributes)
    return triples


# -- validation -------------------------------------------------------------

def validate(obj: Union[Tree, Graph, str]) -> list[Diagnostic]:
    """Report structural problems without raising.

    Accepts a tree, a graph, or PENMAN text (syntax errors are reported as a
    single ``syntax`` diagnostic).
    """
    if isinstance(obj, str):
        try:
            obj = parse(obj)
        except PenmanSyntaxError as exc:
            return [Diagnostic('error', 'syntax', str(exc))]
    if isinstance(obj, Tree):
        graph, layout, diagnostics = _collect(obj)
        graph = graph.with_(layout=layout)
    else:
        graph, diagnostics = obj, []
        diagnostics.extend(_graph_level_diagnostics(graph))

    cycle = _find_cycle(graph.instances, graph.edges)
    if cycle:
        diagnostics.append(Diagnostic(
            'error', 'cycle', 'directed cycle: ' + ' -> '.join(cycle + cycle[:1])))
    if isinstance(obj, Graph):
        unreachable = _unreachable(graph)
        if unreachable:
            diagnostics.append(Diagnostic(
                'error', 'disconnected',
                'variables not connected to the top: ' + ', '.join(unreachable)))
    return diagnostics


def _graph_level_diagnostics(graph: Graph) -> Iterator[Diagnostic]:
    if graph.top not in graph.instances:
        yield Diagnostic('error', 'undefined-variable', f'top {graph.top!r} has no instance')
    for s, r, t in graph.edges:
        for v in (s, t):
            if v not in graph.instances:
                yield Diagnostic('error', 'undefined-variable',
                                 f'relation ({s} {r} {t}) uses undefined variable {v!r}')
    for s, r, t in graph.attributes:
        if s not in graph.instances:
            yield Diagnostic('error', 'undefined-variable',
                             f'attribute ({s} {r} {t}) has undefined source {s!r}')
    for s, r, t in graph.constant_sourced:
        yield Diagnostic('error', 'constant-source',
                         f'relation {r} has constant {s!r} as its source')
    if graph.layout is not None:
        for var, branches in graph.layout.branches.items():
            for br in branches:
                if br.role in NON_CANONICAL_ROLES:
                    yield Diagnostic('warning', 'non-canonical-role',
                                     f'non-canonical role {br.role} on {var!r}')
    else:
        for s, r, t in graph.relations():
            if r in NON_CANONICAL_ROLES:
                yield Diagnostic('warning', 'non-canonical-role',
                                 f'non-canonical role {r} on {s!r}')


def _unreachable(graph: Graph) -> list[str]:
    if graph.top not in graph.instances:
        return []
    adj: dict[str, set[str]] = {v: set() for v in graph.instances}
    for s, _, t in graph.edges:
        if s in adj and t in adj:
            adj[s].add(t)
            adj[t].add(s)
    seen, stack = {graph.top}, [graph.top]
    while stack:
        for nxt in adj[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return [v for v in graph.instances if v not in seen]
