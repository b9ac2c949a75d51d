"""Organization graph: merged entity store, exposure queries, and the
row-tree projections behind the three audit views."""

from vulnex.graph.orggraph import (
    EntityKind,
    EntityRef,
    ExposureQuadruple,
    LayeredGraph,
    OrgGraph,
    build_graph,
)
from vulnex.graph.rowtree import Ordering, RowNode, RowTree, project_tree, tree_quadruples

__all__ = [
    "EntityKind",
    "EntityRef",
    "ExposureQuadruple",
    "LayeredGraph",
    "OrgGraph",
    "Ordering",
    "RowNode",
    "RowTree",
    "build_graph",
    "project_tree",
    "tree_quadruples",
]
