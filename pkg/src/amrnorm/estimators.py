"""scikit-learn style wrappers around normalization and scoring.

    >>> from amrnorm.estimators import Normalizer, SmatchScorer
    >>> gold = ['(a / apple :quant 5)']
    >>> test = ['(a / apple :mod 5)']
    >>> norm = Normalizer(reify_relations=True).fit(gold)
    >>> round(SmatchScorer(exact=True).score(norm.transform(test), norm.transform(gold)), 2)
    0.8
"""

from __future__ import annotations

import os
from typing import Iterable, Sequence, Union

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .normalize import NormalizeOptions, as_table, normalize
from .penman import Graph, Tree, tree_to_graph
from .reification import load_table
from .smatch import DEFAULT_EXACT_BOUND, DEFAULT_RESTARTS, ScoreReport, score_corpus

__all__ = ['Normalizer', 'SmatchScorer', 'check_graph', 'check_graphs', 'check_pairs']

GraphLike = Union[Graph, Tree, str]


def check_graph(obj: GraphLike) -> Graph:
    """Coerce a graph, tree, or PENMAN string to a :class:`Graph`."""
    if isinstance(obj, Graph):
        return obj
    if isinstance(obj, Tree):
        return tree_to_graph(obj)[0]
    if isinstance(obj, str):
        return Graph.from_string(obj)
    raise TypeError(f'expected a Graph, Tree, or PENMAN string, got {type(obj).__name__}')


def check_graphs(X: Union[GraphLike, Iterable[GraphLike]]) -> list[Graph]:
    """Coerce one graph-like object or a sequence of them to a list of graphs."""
    if isinstance(X, (Graph, Tree, str)):
        X = [X]
    try:
        items = list(X)
    except TypeError:
        raise TypeError(f'expected a sequence of graphs, got {type(X).__name__}') from None
    return [check_graph(x) for x in items]


def check_pairs(X, y) -> tuple[list[Graph], list[Graph]]:
    test, gold = check_graphs(X), check_graphs(y)
    if len(test) != len(gold):
        raise ValueError(f'found {len(test)} test graphs but {len(gold)} gold graphs')
    return test, gold


class Normalizer(TransformerMixin, BaseEstimator):
    """Apply the normalization passes to each graph.

    Parameters mirror :class:`~amrnorm.normalize.NormalizeOptions`.  *table*
    is a reification table, a path to one, or None for the default.
    Fitting only validates the parameters and loads the table, so the same
    fitted normalizer can be applied to gold and test graphs alike.
    """

    def __init__(self, canonicalize_roles=False, reify_relations=False,
                 dereify_relations=False, reify_attributes=False,
                 preserve_structure=False, table=None):
        self.canonicalize_roles = canonicalize_roles
        self.reify_relations = reify_relations
        self.dereify_relations = dereify_relations
        self.reify_attributes = reify_attributes
        self.preserve_structure = preserve_structure
        self.table = table

    def _options(self) -> NormalizeOptions:
        return NormalizeOptions(
            canonicalize_roles=bool(self.canonicalize_roles),
            reify_relations=bool(self.reify_relations),
            dereify_relations=bool(self.dereify_relations),
            reify_attributes=bool(self.reify_attributes),
            preserve_structure=bool(self.preserve_structure),
        )

    def fit(self, X=None, y=None):
        self.options_ = self._options()
        if self.table is None or isinstance(self.table, (str, os.PathLike)):
            self.table_ = load_table(self.table)
        else:
            self.table_ = as_table(self.table)
        if X is not None:
            check_graphs(X)
        return self

    def transform(self, X) -> list[Graph]:
        check_is_fitted(self, 'options_')
        return [normalize(g, self.options_, self.table_) for g in check_graphs(X)]


class SmatchScorer(BaseEstimator):
    """Smatch between test graphs (``X``) and gold graphs (``y``).

    ``score`` returns the corpus F-score; ``report`` returns the full
    :class:`~amrnorm.smatch.ScoreReport`.  The scorer is stateless, and
    ``fit`` exists only for API compatibility.
    """

    def __init__(self, restarts=DEFAULT_RESTARTS, seed=0, exact=False,
                 exact_bound=DEFAULT_EXACT_BOUND, strict=False):
        self.restarts = restarts
        self.seed = seed
        self.exact = exact
        self.exact_bound = exact_bound
        self.strict = strict

    def fit(self, X=None, y=None):
        if self.restarts < 1:
            raise ValueError('restarts must be at least 1')
        return self

    def report(self, X, y) -> ScoreReport:
        test, gold = check_pairs(X, y)
        return score_corpus(zip(test, gold), restarts=self.restarts, seed=self.seed,
                            exact=self.exact, bound=self.exact_bound, strict=self.strict)

    def score(self, X, y, sample_weight=None) -> float:
        if sample_weight is not None:
            raise ValueError('sample_weight is not supported')
        return self.report(X, y).f_score
