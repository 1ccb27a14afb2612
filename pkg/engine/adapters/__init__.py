from .expectations import (
    Expectation,
    expectation_framework,
    expectations_by_forward,
    expectations_fb,
    second_order_expectation,
)
from .factor_graph import FactorGraph, FactorTable, factor_graph_to_cg, variable_marginal_features
from .hypergraph import Hyperedge, Hypergraph, hyperedge_features, hypergraph_to_cg
from .tape import (
    AdTape,
    Tag,
    ad_forward_derivatives,
    ad_forward_grad,
    ad_reverse_grad,
    derivative_hom,
    tag_product,
    tape_value,
)
from .trellis import Trellis, trellis_features, trellis_to_cg
from .zdd import Zdd, ZddNode, zdd_polynomial, zdd_to_cg, zdd_xi

__all__ = [
    "AdTape", "Expectation", "FactorGraph", "FactorTable", "Hyperedge", "Hypergraph", "Tag",
    "Trellis", "Zdd", "ZddNode",
    "ad_forward_derivatives", "ad_forward_grad", "ad_reverse_grad", "derivative_hom",
    "expectation_framework", "expectations_by_forward", "expectations_fb",
    "factor_graph_to_cg", "hyperedge_features", "hypergraph_to_cg", "second_order_expectation",
    "tag_product", "tape_value", "trellis_features", "trellis_to_cg", "variable_marginal_features",
    "zdd_polynomial", "zdd_to_cg", "zdd_xi",
]
