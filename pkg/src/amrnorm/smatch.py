"""Smatch: triple-overlap F-score under a best-found variable mapping.

The search is a greedy hill climb over variable mappings with random
restarts.  :func:`brute_force_map` enumerates every injective mapping and is
used as an exact reference for small graphs.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .penman import INSTANCE, TOP, TOP_SOURCE, Graph, Triple, to_triples

__all__ = [
    'ScoreReport', 'SizeBoundError', 'InvalidGraphError', 'count_matches',
    'hill_climb', 'brute_force_map', 'score_pair', 'score_corpus', 'f_score',
]

logger = logging.getLogger(__name__)

DEFAULT_RESTARTS = 4
DEFAULT_EXACT_BOUND = 8


class SizeBoundError(ValueError):
    """Raised when exhaustive search is asked to handle graphs too large."""


class InvalidGraphError(ValueError):
    """Raised in strict mode for graphs with constant-sourced relations."""


def f_score(matched: int, test_total: int, gold_total: int) -> tuple[float, float, float]:
    p = matched / test_total if test_total else 0.0
    r = matched / gold_total if gold_total else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


@dataclass
class ScoreReport:
    matched: int
    test_total: int
    gold_total: int
    restarts_used: int = 0
    seed: int = 0
    mapping: dict[str, str] = field(default_factory=dict, repr=False)
    pairs: list['ScoreReport'] = field(default_factory=list, repr=False)
    skipped: int = 0

    @property
    def precision(self) -> float:
        return f_score(self.matched, self.test_total, self.gold_total)[0]

    @property
    def recall(self) -> float:
        return f_score(self.matched, self.test_total, self.gold_total)[1]

    @property
    def f_score(self) -> float:
        return f_score(self.matched, self.test_total, self.gold_total)[2]

    def line(self) -> str:
        return f'P: {self.precision:.4f}  R: {self.recall:.4f}  F: {self.f_score:.4f}'


# -- exact counting ---------------------------------------------------------

def _variables(triples: Iterable[Triple]) -> list[str]:
    return list(dict.fromkeys(s for s, r, _ in triples if r == INSTANCE))


def _tagged(triples, variables, rename) -> Counter:
    """Triples with variables replaced by rename(var) and constants tagged."""
    out = Counter()
    for s, r, t in triples:
        if r == TOP and s == TOP_SOURCE and s not in variables:
            src = ('top',)
        elif s in variables:
            src = rename(s)
        else:
            continue  # constant source: not a valid triple
        tgt = rename(t) if (t in variables and r != INSTANCE) else ('const', t)
        out[(src, r, tgt)] += 1
    return out


def count_matches(test: Sequence[Triple], gold: Sequence[Triple],
                  mapping: dict[str, str]) -> int:
    """Number of test triples matching gold triples under *mapping*.

    Each gold triple is matched at most once.  Unmapped test variables match
    nothing.
    """
    tvars, gvars = set(_variables(test)), set(_variables(gold))
    t = _tagged(test, tvars, lambda v: ('var', mapping[v]) if v in mapping else ('unmapped', v))
    g = _tagged(gold, gvars, lambda v: ('var', v))
    return sum((t & g).values())


def _scoring_size(triples: Sequence[Triple]) -> int:
    variables = set(_variables(triples))
    return sum(_tagged(triples, variables, lambda v: v).values())


def brute_force_map(test, gold, bound: int = DEFAULT_EXACT_BOUND) -> tuple[dict[str, str], int]:
    """Exhaustively find a mapping maximizing :func:`count_matches`.

    Raises:
        SizeBoundError: if the smaller graph has more than *bound* variables.
    """
    test, gold = _as_triples(test), _as_triples(gold)
    tvars, gvars = _variables(test), _variables(gold)
    if min(len(tvars), len(gvars)) > bound:
        raise SizeBoundError(
            f'{len(tvars)} x {len(gvars)} variables exceeds exhaustive bound {bound}')
    best_map: dict[str, str] = {}
    best = count_matches(test, gold, best_map)
    if len(tvars) <= len(gvars):
        candidates = (dict(zip(tvars, perm)) for perm in itertools.permutations(gvars, len(tvars)))
    else:
        candidates = (dict(zip(perm, gvars)) for perm in itertools.permutations(tvars, len(gvars)))
    for m in candidates:
        n = count_matches(test, gold, m)
        if n > best:
            best, best_map = n, m
    return best_map, best


# -- hill climbing ----------------------------------------------------------

class _Problem:
    """Match weights between test and gold variables.

    ``unary[i][j]`` counts triples about test variable i alone (its concept,
    attributes, TOP, self loops) that match when i maps to gold j.
    Relations between two distinct variables are weighted lazily by
    :meth:`pair_weight`.
    """

    def __init__(self, test: Sequence[Triple], gold: Sequence[Triple]):
        self.tvars = _variables(test)
        self.gvars = _variables(gold)
        t_unary, self.t_rel = self._index(test, self.tvars)
        g_unary, self.g_rel = self._index(gold, self.gvars)
        self.unary = [[sum((tu & gu).values()) for gu in g_unary] for tu in t_unary]
        self.neighbors: list[list[tuple[int, int]]] = [[] for _ in self.tvars]
        for (i1, i2) in self.t_rel:
            self.neighbors[i1].append((i1, i2))
            self.neighbors[i2].append((i1, i2))
        tc = {s: t for s, r, t in test if r == INSTANCE}
        gc = {s: t for s, r, t in gold if r == INSTANCE}
        self.concept_match = [[tc[tv] == gc[gv] for gv in self.gvars] for tv in self.tvars]
        self._memo: dict[tuple[int, int, int, int], int] = {}
        self.upper_bound = min(_scoring_size(test), _scoring_size(gold))

    @staticmethod
    def _index(triples, variables):
        pos = {v: i for i, v in enumerate(variables)}
        unary = [Counter() for _ in variables]
        rel: dict[tuple[int, int], Counter] = {}
        for s, r, t in triples:
            if r == TOP and s == TOP_SOURCE and s not in pos:
                if t in pos:
                    unary[pos[t]][('top',)] += 1
            elif s not in pos:
                continue
            elif r == INSTANCE or t not in pos:
                unary[pos[s]][(r, t)] += 1
            elif s == t:
                unary[pos[s]][('loop', r)] += 1
            else:
                rel.setdefault((pos[s], pos[t]), Counter())[r] += 1
        return unary, rel

    def pair_weight(self, i1: int, i2: int, j1: int, j2: int) -> int:
        key = (i1, i2, j1, j2)
        w = self._memo.get(key)
        if w is None:
            g = self.g_rel.get((j1, j2))
            w = sum((self.t_rel[(i1, i2)] & g).values()) if g else 0
            self._memo[key] = w
        return w

    def local(self, idx: Iterable[int], m: list[int]) -> int:
        """Matches involving any of the test variables in *idx*."""
        total = 0
        pairs = set()
        for i in idx:
            if m[i] >= 0:
                total += self.unary[i][m[i]]
            pairs.update(self.neighbors[i])
        for i1, i2 in pairs:
            j1, j2 = m[i1], m[i2]
            if j1 >= 0 and j2 >= 0:
                total += self.pair_weight(i1, i2, j1, j2)
        return total

    def total(self, m: list[int]) -> int:
        total = sum(self.unary[i][j] for i, j in enumerate(m) if j >= 0)
        for (i1, i2) in self.t_rel:
            if m[i1] >= 0 and m[i2] >= 0:
                total += self.pair_weight(i1, i2, m[i1], m[i2])
        return total

    def concept_seed(self) -> list[int]:
        m = [-1] * len(self.tvars)
        used = set()
        for i in range(len(self.tvars)):
            for j in range(len(self.gvars)):
                if j not in used and self.concept_match[i][j]:
                    m[i] = j
                    used.add(j)
                    break
        return m

    def random_seed(self, rng: random.Random) -> list[int]:
        nt, ng = len(self.tvars), len(self.gvars)
        m = [-1] * nt
        k = min(nt, ng)
        for i, j in zip(rng.sample(range(nt), k), rng.sample(range(ng), k)):
            m[i] = j
        return m

    def climb(self, m: list[int]) -> int:
        nt, ng = len(self.tvars), len(self.gvars)
        owner = [-1] * ng
        for i, j in enumerate(m):
            if j >= 0:
                owner[j] = i
        score = self.total(m)
        while True:
            best_gain, best_move = 0, None
            for i in range(nt):
                cur = m[i]
                base = self.local((i,), m)
                for j in range(ng):
                    if owner[j] != -1:
                        continue
                    m[i] = j
                    gain = self.local((i,), m) - base
                    m[i] = cur
                    if gain > best_gain:
                        best_gain, best_move = gain, ('move', i, j)
                for k in range(i + 1, nt):
                    if m[k] == cur:
                        continue
                    before = self.local((i, k), m)
                    m[i], m[k] = m[k], m[i]
                    gain = self.local((i, k), m) - before
                    m[i], m[k] = m[k], m[i]
                    if gain > best_gain:
                        best_gain, best_move = gain, ('swap', i, k)
            if best_move is None:
                return score
            kind, i, x = best_move
            if kind == 'move':
                if m[i] >= 0:
                    owner[m[i]] = -1
                m[i] = x
                owner[x] = i
            else:
                m[i], m[x] = m[x], m[i]
                for v in (i, x):
                    if m[v] >= 0:
                        owner[m[v]] = v
            score += best_gain


def hill_climb(test, gold, restarts: int = DEFAULT_RESTARTS,
               seed: int = 0) -> tuple[dict[str, str], int]:
    """Greedy search for a good mapping.

    The first climb starts from a mapping pairing variables with equal
    concepts; later climbs start from random mappings drawn from
    ``random.Random(seed)``.  Each climb applies the single move or swap with
    the largest gain until no move improves the count.
    """
    mapping, best, _ = _hill_climb(_as_triples(test), _as_triples(gold), restarts, seed)
    return mapping, best


def _hill_climb(test, gold, restarts, seed):
    if restarts < 1:
        raise ValueError('restarts must be at least 1')
    problem = _Problem(test, gold)
    rng = random.Random(seed)
    best_m, best, used = [-1] * len(problem.tvars), -1, 0
    for r in range(restarts):
        m = problem.concept_seed() if r == 0 else problem.random_seed(rng)
        n = problem.climb(m)
        used += 1
        if n > best:
            best, best_m = n, list(m)
        if best >= problem.upper_bound:
            break
    mapping = {problem.tvars[i]: problem.gvars[j] for i, j in enumerate(best_m) if j >= 0}
    return mapping, best, used


# -- scoring ----------------------------------------------------------------

def _as_triples(obj) -> list[Triple]:
    if isinstance(obj, Graph):
        return to_triples(obj)
    return [Triple(*t) for t in obj]


def _graph_triples(graph, strict: bool, label: str) -> list[Triple]:
    if isinstance(graph, Graph) and graph.constant_sourced:
        rels = ', '.join(f'({s} {r} {t})' for s, r, t in graph.constant_sourced)
        if strict:
            raise InvalidGraphError(f'{label} graph has constant-sourced relations: {rels}')
        logger.warning('dropping constant-sourced relations from %s graph: %s', label, rels)
    return _as_triples(graph)


def score_pair(test, gold, restarts: int = DEFAULT_RESTARTS, seed: int = 0,
               exact: bool = False, bound: int = DEFAULT_EXACT_BOUND,
               strict: bool = False) -> ScoreReport:
    """Smatch score of *test* against *gold*.

    With ``exact=True`` the exhaustive mapper is used when the smaller graph
    has at most *bound* variables; otherwise the hill climb is used.
    """
    t = _graph_triples(test, strict, 'test')
    g = _graph_triples(gold, strict, 'gold')
    if exact and min(len(_variables(t)), len(_variables(g))) <= bound:
        mapping, matched = brute_force_map(t, g, bound)
        used = 0
    else:
        mapping, matched, used = _hill_climb(t, g, restarts, seed)
    return ScoreReport(matched, _scoring_size(t), _scoring_size(g), used, seed, mapping)


def score_corpus(pairs: Iterable[tuple], restarts: int = DEFAULT_RESTARTS, seed: int = 0,
                 exact: bool = False, bound: int = DEFAULT_EXACT_BOUND,
                 strict: bool = False, executor=None) -> ScoreReport:
    """Micro-averaged score over (test, gold) pairs.

    Counts are summed in input order.  An optional ``concurrent.futures``
    *executor* scores the pairs in parallel; results do not depend on it.
    """
    pairs = list(pairs)
    args = (restarts, seed, exact, bound, strict)
    if executor is None:
        reports = [score_pair(t, g, *args) for t, g in pairs]
    else:
        reports = list(executor.map(_score_pair_star, [(t, g, *args) for t, g in pairs],
                                    chunksize=max(1, math.ceil(len(pairs) / 64))))
    total = ScoreReport(
        sum(r.matched for r in reports), sum(r.test_total for r in reports),
        sum(r.gold_total for r in reports),
        restarts_used=sum(r.restarts_used for r in reports), seed=seed, pairs=reports)
    return total


def _score_pair_star(args):
    return score_pair(*args)
