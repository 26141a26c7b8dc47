from ._hiap import (
    ClusteringResult,
    cluster,
    cluster_hierarchical,
    estimate_shape_factor,
    generate_mixture,
    rap_scan,
    shape_factor,
)

__all__ = [
    "ClusteringResult",
    "cluster",
    "cluster_hierarchical",
    "estimate_shape_factor",
    "generate_mixture",
    "rap_scan",
    "shape_factor",
]
