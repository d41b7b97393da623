"""Betweenness hypergraphs of finite metric spaces.

A triple ``{x, y, z}`` of points is collinear when one of them lies between
the other two, ``d(x,z) = d(x,y) + d(y,z)``. The collinear triples of a metric
form a 3-uniform hypergraph. This package builds metrics with a prescribed
collinearity hypergraph for sparse inputs and decides exactly whether a
small hypergraph arises this way at all.
"""

from metricity.hypergraph import Hypergraph, is_f_sparse, is_kl_sparse
from metricity.metric import FiniteMetric, betweenness_hypergraph, realizes, validate_metric
from metricity.oracle import MetricityVerdict, alphabet_search, decide_metric
from metricity.realizer import realize_62sparse, realize_f0, rho0_construct

__all__ = [
    "FiniteMetric",
    "Hypergraph",
    "MetricityVerdict",
    "alphabet_search",
    "betweenness_hypergraph",
    "decide_metric",
    "is_f_sparse",
    "is_kl_sparse",
    "realize_62sparse",
    "realize_f0",
    "realizes",
    "rho0_construct",
    "validate_metric",
]
__version__ = "0.1.0"
