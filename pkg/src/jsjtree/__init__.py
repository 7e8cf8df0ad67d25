"""Quasi-isometry and commensurability invariants for JSJ graphs of hyperbolic groups.

The package works with the bipartite JSJ graphs of one-ended hyperbolic
groups whose vertex groups are two-ended or maximal hanging Fuchsian, and
with the 2-dimensional hyperbolic P-manifolds built from surfaces glued
along curves.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .blocks import (augmented_graph_of_blocks, block_graphs, check_m1, check_m2,
                     classify_torsion_qi, graph_of_blocks)
from .commensurability import (CommVerdict, EulerVector, Matching, MatchingVector, Verdict,
                               block_euler_vector, block_obstruction, enumerate_matchings,
                               forest_matching, genus_family, matching_obstruction,
                               matching_vector, maximal_matching, uniform_curve_degree,
                               vectors_commensurable)
from .errors import (Cancelled, InternalError, InvalidInputError, JSJError, NoMatchingError,
                     ParseError, PreconditionError, ResourceLimitError)
from .extnat import INF, ExtNat
from .graph import (CURVE, SURFACE, BipartiteMultigraph, PManifold, VertexKind, orbifold_euler,
                    scale_chi, validate_jsj_graph, validate_pmanifold)
from .refinement import (BlockPermutation, DegreePartition, DegreeRefinement, degree_partition,
                         degree_refinement, is_quasi_isometric, refinement_equivalent)
from .splitting import find_split_sites, split_vertex, truncated_block_tree, unwrap_to_tree

__all__ = [
    "BipartiteMultigraph", "BlockPermutation", "CURVE", "Cancelled", "CommVerdict",
    "DegreePartition", "DegreeRefinement", "EulerVector", "ExtNat", "INF", "InternalError",
    "InvalidInputError", "JSJError", "Matching", "MatchingVector", "NoMatchingError",
    "PManifold", "ParseError", "PreconditionError", "ResourceLimitError", "SURFACE", "Verdict",
    "VertexKind", "augmented_graph_of_blocks", "block_euler_vector", "block_graphs",
    "block_obstruction", "check_m1", "check_m2", "classify_torsion_qi", "degree_partition",
    "degree_refinement", "enumerate_matchings", "find_split_sites", "forest_matching",
    "genus_family", "graph_of_blocks", "is_quasi_isometric", "matching_obstruction",
    "matching_vector", "maximal_matching", "orbifold_euler", "refinement_equivalent",
    "scale_chi", "split_vertex", "truncated_block_tree", "uniform_curve_degree",
    "unwrap_to_tree", "validate_jsj_graph", "validate_pmanifold", "vectors_commensurable",
]
