"""drgkit: certificates for distance-regular graphs and their regular
weak-geodetically closed subgraphs."""

__version__ = "0.1.0"

from .graph import (  # noqa: E402
    DistanceOracle,
    DistanceRow,
    Graph,
    UNREACHABLE,
    VertexSubset,
    bfs_distances,
    diameter_and_regularity,
    distance_partition,
    induced_subgraph,
    parse_edge_list,
    parse_graph6,
    write_graph6,
)
from .drg import (  # noqa: E402
    DRGCertificate,
    IntersectionArray,
    NonDRGWitness,
    certify_distance_regular,
    hypothesis_gate,
    intersection_tensor,
    local_sets,
)
from .families import gen_family  # noqa: E402

__all__ = [
    "DistanceOracle", "DistanceRow", "Graph", "UNREACHABLE", "VertexSubset",
    "bfs_distances", "diameter_and_regularity", "distance_partition", "induced_subgraph",
    "parse_edge_list", "parse_graph6", "write_graph6",
    "DRGCertificate", "IntersectionArray", "NonDRGWitness", "certify_distance_regular",
    "hypothesis_gate", "intersection_tensor", "local_sets", "gen_family",
]
