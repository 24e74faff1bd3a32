"""Random AMR-like graphs for property and acceptance tests."""

from __future__ import annotations

import random

from amrnorm import Graph, default_table
from amrnorm.penman import Attribute, Edge

DISTRACTOR_CONCEPTS = ('dog', 'boy', 'girl', 'run-01', 'see-01', 'city', 'want-01',
                       'big', 'house', 'tree')
DISTRACTOR_ROLES = (':ARG0', ':ARG1', ':ARG2', ':op1', ':poss', ':beneficiary', ':wiki')
CONSTANTS = ('-', '5', '7', '"x"', '"York"', 'interrogative')


def unambiguous_dereifiable_roles(table=None) -> list[str]:
    """Roles whose reification collapses back to the same role."""
    table = table or default_table()
    roles = []
    for role in sorted(table.reifiable_roles):
        row = table.reification(role)
        if row.dereifies and table.dereification(row.concept) is row:
            roles.append(role)
    return roles


def random_graph(rng: random.Random, max_nodes: int = 10, roles=None,
                 concepts=DISTRACTOR_CONCEPTS, reentrancy: float = 0.3,
                 attributes: float = 0.5) -> Graph:
    """A connected, acyclic graph with random edge directions.

    A random tree is built first (edge direction follows a hidden
    topological order, so some tree edges come out inverted), then extra
    edges are added along the same order to create reentrancies.
    """
    roles = list(roles or DISTRACTOR_ROLES)
    n = rng.randint(1, max_nodes)
    variables = [f'v{i}' for i in range(n)]
    rank = dict(zip(variables, rng.sample(range(n), n)))
    instances = {v: rng.choice(concepts) for v in variables}
    edges: dict[tuple[str, str], str] = {}

    def add(a, b):
        s, t = (a, b) if rank[a] < rank[b] else (b, a)
        if (s, t) not in edges:
            edges[(s, t)] = rng.choice(roles)

    for i in range(1, n):
        add(variables[rng.randrange(i)], variables[i])
    for _ in range(n):
        if n > 2 and rng.random() < reentrancy:
            a, b = rng.sample(variables, 2)
            add(a, b)
    attrs = []
    for v in variables:
        if rng.random() < attributes:
            attrs.append(Attribute(v, rng.choice(roles), rng.choice(CONSTANTS)))
    return Graph(
        top=variables[0],
        instances=instances,
        edges=tuple(Edge(s, r, t) for (s, t), r in edges.items()),
        attributes=tuple(attrs),
    )
