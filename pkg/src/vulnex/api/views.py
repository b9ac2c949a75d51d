"""View response assembly and canonical JSON serialization.

Responses are deterministic byte-for-byte: keys sorted, compact
separators, UTF-8, scores at one decimal.  Two identical requests
against the same snapshot always produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterator

from vulnex.analytics.cells import default_matrix_columns, score_strip, severity_histogram
from vulnex.analytics.filters import FilterSpec, SortSpec, apply_filters, sort_rows
from vulnex.enrich.providers import meta_to_obj
from vulnex.errors import UnknownEntityError, ValidationError
from vulnex.graph.orggraph import EntityKind, EntityRef, OrgGraph
from vulnex.graph.rowtree import Ordering, RowNode
from vulnex.model import classify_severity

DEFAULT_PAGE_SIZE = 50
MAX_PAGE_SIZE = 500
MATRIX_DEFAULT_COLUMNS = 5


@dataclass(frozen=True)
class ViewRequest:
    """One view query: which tree, how to filter and sort it, which rows
    to expand (root-to-row id paths), which matrix columns to show, and
    the page of top-level rows to return.  ``page_size=None`` disables
    pagination (used by the CLI report)."""

    ordering: Ordering
    filter: FilterSpec = FilterSpec()
    sort: SortSpec | None = None
    expand: tuple[tuple[str, ...], ...] = ()
    matrix_columns: tuple[str, ...] | None = None
    page: int = 1
    page_size: int | None = DEFAULT_PAGE_SIZE
    expand_all: bool = False

    def __post_init__(self) -> None:
        if self.page < 1:
            raise ValidationError(f"page must be >= 1, got {self.page}")
        if self.page_size is not None and not 1 <= self.page_size <= MAX_PAGE_SIZE:
            raise ValidationError(f"pageSize must be within [1, {MAX_PAGE_SIZE}], got {self.page_size}")
        for path in self.expand:
            if not path or any(not part for part in path):
                raise ValidationError(f"malformed expand path {'/'.join(path)!r}")


def build_view_response(g: OrgGraph, req: ViewRequest) -> dict[str, Any]:
    """Assemble the JSON-ready payload for one view request."""
    tree = g.tree(req.ordering)
    tree = apply_filters(tree, req.filter)
    if req.sort is not None:
        tree = sort_rows(tree, req.sort)

    if req.matrix_columns is None:
        columns = default_matrix_columns(g, MATRIX_DEFAULT_COLUMNS)
    else:
        for cve_id in req.matrix_columns:
            if cve_id not in g.vulnerabilities:
                raise UnknownEntityError(f"unknown matrix column '{cve_id}'")
        columns = req.matrix_columns

    expanded: set[tuple[str, ...]] | None
    if req.expand_all:
        expanded = None
    else:
        expanded = set()
        for path in req.expand:
            for i in range(1, len(path) + 1):
                expanded.add(path[:i])

    total = len(tree.roots)
    if req.page_size is None:
        visible = tree.roots
    else:
        start = (req.page - 1) * req.page_size
        visible = tree.roots[start : start + req.page_size]

    fragments: dict[tuple[EntityKind, str], dict[str, Any]] = {}
    rows = [
        _serialize_row(g, node, (node.entity_id,), expanded, columns, fragments)
        for node in visible
    ]
    payload: dict[str, Any] = {
        "view": req.ordering.value,
        "totalRows": total,
        "rows": rows,
        "appliedFilter": _filter_obj(req.filter),
        "appliedSort": None
        if req.sort is None
        else {"key": req.sort.key.value, "direction": req.sort.direction.value},
        "matrixColumns": list(columns),
    }
    if req.page_size is not None:
        payload["page"] = req.page
        payload["pageSize"] = req.page_size
    return payload


def canonical_json(payload: Any) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode(
        "utf-8"
    )


def _filter_obj(spec: FilterSpec) -> dict[str, Any]:
    return {
        "nameQuery": spec.name_query,
        "minCvss": spec.min_cvss,
        "maxCvss": spec.max_cvss,
        "minDependencies": spec.min_dependencies,
        "maxDependencies": spec.max_dependencies,
        "minVulnerabilities": spec.min_vulnerabilities,
        "maxVulnerabilities": spec.max_vulnerabilities,
        "hideVulnerabilityFree": spec.hide_vulnerability_free,
        "hideUnscoredCves": spec.hide_unscored,
    }


def _serialize_row(
    g: OrgGraph,
    node: RowNode,
    path: tuple[str, ...],
    expanded: set[tuple[str, ...]] | None,
    columns: tuple[str, ...],
    fragments: dict[tuple[EntityKind, str], dict[str, Any]],
) -> dict[str, Any]:
    row: dict[str, Any] = {
        "kind": node.kind.value,
        "id": node.entity_id,
        "name": node.name,
        "linkCount": len(node.children),
    }
    if node.vuln_count is not None:
        row["vulnCount"] = node.vuln_count
    if node.dependency_count is not None:
        row["dependencyCount"] = node.dependency_count

    # Cell values depend only on the entity, never on where the row sits
    # in the tree, so one fragment per entity serves every occurrence.
    key = (node.kind, node.entity_id)
    fragment = fragments.get(key)
    if fragment is None:
        fragment = fragments[key] = _entity_cells(g, node, columns)
    row.update(fragment)

    if expanded is None or path in expanded:
        row["children"] = [
            _serialize_row(g, child, path + (child.entity_id,), expanded, columns, fragments)
            for child in node.children
        ]
    return row


def _entity_cells(g: OrgGraph, node: RowNode, columns: tuple[str, ...]) -> dict[str, Any]:
    cells: dict[str, Any] = {}
    if node.kind is EntityKind.BUG:
        vuln = g.vulnerabilities[node.entity_id]
        cells["severity"] = vuln.severity.value
        if vuln.cvss_score is not None:
            cells["cvssScore"] = vuln.cvss_score
            cells["maxCvss"] = vuln.cvss_score
        if vuln.cvss_vector is not None:
            cells["cvssVector"] = vuln.cvss_vector
        if vuln.description is not None:
            cells["description"] = vuln.description
        return cells

    ref = EntityRef(kind=node.kind, id=node.entity_id)
    max_tenths = g.max_tenths_of(ref)
    if max_tenths >= 0:
        cells["maxCvss"] = max_tenths / 10
    cells["severity"] = classify_severity(None if max_tenths < 0 else max_tenths / 10).value
    hist = severity_histogram(g, ref)
    cells["histogram"] = {
        "low": hist.low,
        "medium": hist.medium,
        "high": hist.high,
        "critical": hist.critical,
        "unscored": hist.unscored,
    }
    if node.kind is EntityKind.LIBRARY:
        lib = g.libraries[node.entity_id]
        cells["coordinates"] = lib.coordinates
        strip = score_strip(g, ref)
        cells["scoreStrip"] = [{"cveId": e.cve_id, "score": e.score} for e in strip.entries]
        if lib.meta is not None:
            cells["meta"] = meta_to_obj(lib.meta)
    if node.kind is EntityKind.REPOSITORY:
        cells["matrix"] = [g.contains_cve(ref, c) for c in columns]
        repo = g.repositories[node.entity_id]
        if repo.meta is not None:
            cells["meta"] = meta_to_obj(repo.meta)
    return cells


def iter_flat_rows(rows: list[dict[str, Any]], depth: int = 0) -> Iterator[tuple[int, dict[str, Any]]]:
    """Depth-first walk over serialized rows, yielding (depth, row)."""
    for row in rows:
        yield depth, row
        yield from iter_flat_rows(row.get("children", []), depth + 1)
