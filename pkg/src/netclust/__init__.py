"""Hierarchical clustering of asymmetric (directed) dissimilarity networks."""
from netclust.methods import (
    MethodSpec,
    grafting,
    nonreciprocal,
    parse_method,
    reciprocal,
    run_method,
    semi_reciprocal,
)
from netclust.network import (
    Dendrogram,
    Network,
    Partition,
    Ultrametric,
    dendrogram_from_ultrametric,
    restrict,
    ultrametric_from_dendrogram,
)
from netclust.representable import (
    Representer,
    RepresenterFamily,
    cluster_representable,
    cycle_representer,
    optimal_multiples,
    three_cycle_kernel,
)

__all__ = [
    "Dendrogram", "MethodSpec", "Network", "Partition", "Representer", "RepresenterFamily",
    "Ultrametric", "cluster_representable", "cycle_representer", "dendrogram_from_ultrametric",
    "grafting", "nonreciprocal", "optimal_multiples", "parse_method", "reciprocal", "restrict",
    "run_method", "semi_reciprocal", "three_cycle_kernel", "ultrametric_from_dendrogram",
]
