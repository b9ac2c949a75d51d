"""View filtering and sorting.

Filters prune rows from a projected tree; they never recompute branch
aggregates, so a parent row keeps the metrics of its full subtree even
when children are hidden.  Sorting reorders every sibling group by one
of four keys with a deterministic total order.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from vulnex.errors import ValidationError
from vulnex.graph.orggraph import EntityKind
from vulnex.graph.rowtree import RowNode, RowTree
from vulnex.model import deciscore


@dataclass(frozen=True)
class FilterSpec:
    """Declarative row filter.

    Range bounds apply to top-level rows; rows whose metric is not
    applicable (for example a dependency bound on a bug row) pass.  A
    minimum CVSS bound excludes rows with no scored CVEs, a maximum
    bound keeps them.  The two hide flags prune at any depth:
    vulnerability-free repository and module rows, and unscored bug rows
    (absent or 0.0 score).
    """

    name_query: str | None = None
    min_cvss: float | None = None
    max_cvss: float | None = None
    min_dependencies: int | None = None
    max_dependencies: int | None = None
    min_vulnerabilities: int | None = None
    max_vulnerabilities: int | None = None
    hide_vulnerability_free: bool = False
    hide_unscored: bool = False

    def __post_init__(self) -> None:
        for label, value in (("minCvss", self.min_cvss), ("maxCvss", self.max_cvss)):
            if value is not None and not 0.0 <= value <= 10.0:
                raise ValidationError(f"{label} must be within [0.0, 10.0], got {value!r}")
        for label, value in (
            ("minDependencies", self.min_dependencies),
            ("maxDependencies", self.max_dependencies),
            ("minVulnerabilities", self.min_vulnerabilities),
            ("maxVulnerabilities", self.max_vulnerabilities),
        ):
            if value is not None and (not isinstance(value, int) or isinstance(value, bool) or value < 0):
                raise ValidationError(f"{label} must be a non-negative integer, got {value!r}")
        for label, lo, hi in (
            ("Cvss", self.min_cvss, self.max_cvss),
            ("Dependencies", self.min_dependencies, self.max_dependencies),
            ("Vulnerabilities", self.min_vulnerabilities, self.max_vulnerabilities),
        ):
            if lo is not None and hi is not None and lo > hi:
                raise ValidationError(f"min{label} {lo!r} exceeds max{label} {hi!r}")

    def is_empty(self) -> bool:
        return self == FilterSpec()


def apply_filters(tree: RowTree, spec: FilterSpec) -> RowTree:
    """Prune the tree: hide flags anywhere, range and name bounds on the
    top-level rows.  Surviving rows keep their original branch metrics
    and relative order."""
    if spec.is_empty():
        return tree
    pruned = []
    for root in tree.roots:
        kept = _prune(root, spec)
        if kept is not None and _root_passes(kept, spec):
            pruned.append(kept)
    return RowTree(ordering=tree.ordering, roots=tuple(pruned))


def _prune(node: RowNode, spec: FilterSpec) -> RowNode | None:
    if (
        spec.hide_vulnerability_free
        and node.kind in (EntityKind.REPOSITORY, EntityKind.MODULE)
        and node.vuln_count == 0
    ):
        return None
    if spec.hide_unscored and node.kind is EntityKind.BUG and node.branch_max_tenths <= 0:
        return None
    children = tuple(c for c in (_prune(child, spec) for child in node.children) if c is not None)
    if children == node.children:
        return node
    return replace(node, children=children)


def _root_passes(node: RowNode, spec: FilterSpec) -> bool:
    if spec.name_query is not None and spec.name_query.casefold() not in node.name.casefold():
        return False
    if spec.min_cvss is not None and node.branch_max_tenths < deciscore(spec.min_cvss):
        return False
    if (
        spec.max_cvss is not None
        and node.branch_max_tenths >= 0
        and node.branch_max_tenths > deciscore(spec.max_cvss)
    ):
        return False
    if node.dependency_count is not None:
        if spec.min_dependencies is not None and node.dependency_count < spec.min_dependencies:
            return False
        if spec.max_dependencies is not None and node.dependency_count > spec.max_dependencies:
            return False
    if node.vuln_count is not None:
        if spec.min_vulnerabilities is not None and node.vuln_count < spec.min_vulnerabilities:
            return False
        if spec.max_vulnerabilities is not None and node.vuln_count > spec.max_vulnerabilities:
            return False
    return True


class SortKey(str, Enum):
    MOST_SEVERE = "mostSevere"
    VULNERABILITY_COUNT = "vulnerabilityCount"
    LINK_COUNT = "linkCount"
    NAME = "name"


class SortDirection(str, Enum):
    ASC = "asc"
    DESC = "desc"


def default_direction(key: SortKey) -> SortDirection:
    return SortDirection.ASC if key is SortKey.NAME else SortDirection.DESC


@dataclass(frozen=True)
class SortSpec:
    key: SortKey
    direction: SortDirection


def sort_rows(tree: RowTree, spec: SortSpec) -> RowTree:
    """Reorder every sibling group by the sort key.

    MostSevere orders by subtree max score with critical-count and
    vulnerability-count tiebreaks; the name tiebreak stays ascending in
    both directions so the order is total and stable.
    """
    roots = tuple(_sort_level(tree.roots, spec))
    return RowTree(ordering=tree.ordering, roots=roots)


def _numeric_key(node: RowNode, key: SortKey) -> tuple[int, ...]:
    if key is SortKey.MOST_SEVERE:
        return (node.branch_max_tenths, node.branch_critical_count, node.vuln_count or 0)
    if key is SortKey.VULNERABILITY_COUNT:
        return (node.vuln_count or 0,)
    if key is SortKey.LINK_COUNT:
        return (len(node.children),)
    return ()


def _sort_level(nodes: tuple[RowNode, ...], spec: SortSpec) -> list[RowNode]:
    sign = -1 if spec.direction is SortDirection.DESC else 1
    if spec.key is SortKey.NAME:
        ordered = sorted(
            nodes,
            key=lambda n: (n.name.casefold(), n.name, n.entity_id),
            reverse=spec.direction is SortDirection.DESC,
        )
    else:
        ordered = sorted(
            nodes,
            key=lambda n: (
                tuple(sign * v for v in _numeric_key(n, spec.key)),
                n.name.casefold(),
                n.name,
                n.entity_id,
            ),
        )
    return [
        replace(n, children=tuple(_sort_level(n.children, spec))) if n.children else n
        for n in ordered
    ]
