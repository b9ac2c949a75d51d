"""Row-tree projections of the organization graph.

Each audit view is a tree of rows: repository-centered (repository,
module hierarchy, library, bug), library-centered (library, bug,
repository, module), and bug-centered (bug, library, repository,
module).  Rows carry both display cells (vulnerability and dependency
counts) and branch aggregates (subtree max score, CVE count, critical
count) so that filtering and sorting never need the graph again.

Sibling order is deterministic: descending subtree max score, then
descending subtree CVE count, then name, then entity id.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Iterator

from vulnex.graph.orggraph import EntityKind, EntityRef, ExposureQuadruple
from vulnex.model import Severity, Vulnerability

if TYPE_CHECKING:
    from vulnex.graph.orggraph import OrgGraph


class Ordering(str, Enum):
    REPOSITORY_CENTERED = "repositories"
    LIBRARY_CENTERED = "libraries"
    BUG_CENTERED = "bugs"


@dataclass(frozen=True)
class RowNode:
    """One row of a view tree.

    ``vuln_count`` and ``dependency_count`` are entity-level cells (None
    where the metric does not apply); the ``branch_*`` fields aggregate
    over the CVEs represented by this row's subtree, which under a bug
    ancestor is just that single CVE.
    """

    kind: EntityKind
    entity_id: str
    name: str
    children: tuple["RowNode", ...]
    vuln_count: int | None
    dependency_count: int | None
    branch_max_tenths: int
    branch_cve_count: int
    branch_critical_count: int

    @property
    def ref(self) -> EntityRef:
        return EntityRef(kind=self.kind, id=self.entity_id)


@dataclass(frozen=True)
class RowTree:
    ordering: Ordering
    roots: tuple[RowNode, ...]

    def walk(self) -> Iterator[RowNode]:
        stack = list(reversed(self.roots))
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


def _order_key(node: RowNode) -> tuple[int, int, str, str]:
    return (-node.branch_max_tenths, -node.branch_cve_count, node.name, node.entity_id)


def _sorted_rows(nodes: list[RowNode]) -> tuple[RowNode, ...]:
    return tuple(sorted(nodes, key=_order_key))


def project_tree(g: "OrgGraph", ordering: Ordering) -> RowTree:
    """Build the full row tree for one view.

    All structural rows are present: every repository (vulnerable or
    not), the complete module hierarchy, and every direct library
    dependency.  Cross-entity children exist exactly where an exposure
    connects them.
    """
    if ordering is Ordering.REPOSITORY_CENTERED:
        roots = [_repo_subtree(g, r) for r in g.repositories]
    elif ordering is Ordering.LIBRARY_CENTERED:
        roots = [_library_root(g, d) for d in g.libraries]
    elif ordering is Ordering.BUG_CENTERED:
        roots = [_bug_root(g, c) for c in g.vulnerabilities]
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown ordering {ordering!r}")
    return RowTree(ordering=ordering, roots=_sorted_rows(roots))


# -- repository-centered ----------------------------------------------------


def _bug_leaf(vuln: Vulnerability) -> RowNode:
    return RowNode(
        kind=EntityKind.BUG,
        entity_id=vuln.cve_id,
        name=vuln.cve_id,
        children=(),
        vuln_count=None,
        dependency_count=None,
        branch_max_tenths=vuln.score_tenths,
        branch_cve_count=1,
        branch_critical_count=1 if vuln.severity is Severity.CRITICAL else 0,
    )


def _entity_branch_node(
    g: "OrgGraph", kind: EntityKind, entity_id: str, name: str, children: list[RowNode]
) -> RowNode:
    ref = EntityRef(kind=kind, id=entity_id)
    count = g.vuln_count_of(ref)
    dep_count = (
        g.dependency_count_of(ref) if kind in (EntityKind.REPOSITORY, EntityKind.MODULE) else None
    )
    return RowNode(
        kind=kind,
        entity_id=entity_id,
        name=name,
        children=_sorted_rows(children),
        vuln_count=count,
        dependency_count=dep_count,
        branch_max_tenths=g.max_tenths_of(ref),
        branch_cve_count=count,
        branch_critical_count=g.bucket_counts_of(ref)[Severity.CRITICAL.rank],
    )


def _library_with_bugs(g: "OrgGraph", digest: str) -> RowNode:
    bugs = [_bug_leaf(g.vulnerabilities[c]) for c in g.library_cves(digest)]
    return _entity_branch_node(
        g, EntityKind.LIBRARY, digest, g.libraries[digest].display_name, bugs
    )


def _module_subtree(g: "OrgGraph", module_id: str) -> RowNode:
    children = [_module_subtree(g, child) for child in g.module_children(module_id)]
    children += [_library_with_bugs(g, d) for d in g.module_libraries(module_id)]
    return _entity_branch_node(
        g, EntityKind.MODULE, module_id, g.modules[module_id].name, children
    )


def _repo_subtree(g: "OrgGraph", repository_id: str) -> RowNode:
    children = [_module_subtree(g, m) for m in g.top_modules(repository_id)]
    return _entity_branch_node(
        g, EntityKind.REPOSITORY, repository_id, g.repositories[repository_id].name, children
    )


# -- single-bug subtrees (library- and bug-centered) ------------------------


def _single_bug_node(
    g: "OrgGraph",
    kind: EntityKind,
    entity_id: str,
    name: str,
    vuln: Vulnerability,
    children: list[RowNode],
) -> RowNode:
    """Entity row whose subtree concerns exactly one CVE: display cells are
    entity-level, branch aggregates are the single bug's."""
    ref = EntityRef(kind=kind, id=entity_id)
    dep_count = (
        g.dependency_count_of(ref) if kind in (EntityKind.REPOSITORY, EntityKind.MODULE) else None
    )
    return RowNode(
        kind=kind,
        entity_id=entity_id,
        name=name,
        children=_sorted_rows(children),
        vuln_count=g.vuln_count_of(ref),
        dependency_count=dep_count,
        branch_max_tenths=vuln.score_tenths,
        branch_cve_count=1,
        branch_critical_count=1 if vuln.severity is Severity.CRITICAL else 0,
    )


def _repo_under_bug(g: "OrgGraph", repository_id: str, digest: str, vuln: Vulnerability) -> RowNode:
    module_ids = [
        m for m in g.library_modules(digest) if g.modules[m].repository_id == repository_id
    ]
    modules = [
        _single_bug_node(g, EntityKind.MODULE, m, g.modules[m].name, vuln, []) for m in module_ids
    ]
    return _single_bug_node(
        g, EntityKind.REPOSITORY, repository_id, g.repositories[repository_id].name, vuln, modules
    )


def _bug_with_repos(g: "OrgGraph", cve_id: str, digest: str) -> RowNode:
    vuln = g.vulnerabilities[cve_id]
    repos = [_repo_under_bug(g, r, digest, vuln) for r in g.library_repositories(digest)]
    bug = _bug_leaf(vuln)
    return RowNode(
        kind=bug.kind,
        entity_id=bug.entity_id,
        name=bug.name,
        children=_sorted_rows(repos),
        vuln_count=bug.vuln_count,
        dependency_count=None,
        branch_max_tenths=bug.branch_max_tenths,
        branch_cve_count=1,
        branch_critical_count=bug.branch_critical_count,
    )


def _library_root(g: "OrgGraph", digest: str) -> RowNode:
    bugs = [_bug_with_repos(g, c, digest) for c in g.library_cves(digest)]
    return _entity_branch_node(
        g, EntityKind.LIBRARY, digest, g.libraries[digest].display_name, bugs
    )


def _bug_root(g: "OrgGraph", cve_id: str) -> RowNode:
    vuln = g.vulnerabilities[cve_id]
    libs = []
    for digest in g.cve_libraries(cve_id):
        repos = [_repo_under_bug(g, r, digest, vuln) for r in g.library_repositories(digest)]
        libs.append(
            _single_bug_node(
                g, EntityKind.LIBRARY, digest, g.libraries[digest].display_name, vuln, repos
            )
        )
    bug = _bug_leaf(vuln)
    return RowNode(
        kind=bug.kind,
        entity_id=bug.entity_id,
        name=bug.name,
        children=_sorted_rows(libs),
        vuln_count=bug.vuln_count,
        dependency_count=None,
        branch_max_tenths=bug.branch_max_tenths,
        branch_cve_count=1,
        branch_critical_count=bug.branch_critical_count,
    )


# -- flattening -------------------------------------------------------------


def tree_quadruples(g: "OrgGraph", tree: RowTree) -> frozenset[ExposureQuadruple]:
    """Flatten a view tree back to its exposure quadruples.

    Only complete root-to-leaf paths that traverse the view's full level
    sequence count; structural rows with no vulnerable continuation
    contribute nothing.  For any unfiltered tree this equals
    ``g.exposure_quadruples()`` as a set.
    """
    quads: set[ExposureQuadruple] = set()
    if tree.ordering is Ordering.REPOSITORY_CENTERED:
        for repo in tree.roots:
            _collect_repo_view(repo, quads)
    else:
        for root in tree.roots:
            if tree.ordering is Ordering.LIBRARY_CENTERED:
                iters = ((root, bug, repo, mod)
                         for bug in root.children
                         for repo in bug.children
                         for mod in repo.children)
                for lib, bug, repo, mod in iters:
                    quads.add(_quad(g, repo, mod, lib, bug))
            else:
                for lib in root.children:
                    for repo in lib.children:
                        for mod in repo.children:
                            quads.add(_quad(g, repo, mod, lib, root))
    return frozenset(quads)


def _quad(g: "OrgGraph", repo: RowNode, mod: RowNode, lib: RowNode, bug: RowNode) -> ExposureQuadruple:
    return ExposureQuadruple(
        repository_id=repo.entity_id,
        module_path=g.module_path(mod.entity_id),
        library_digest=lib.entity_id,
        cve_id=bug.entity_id,
    )


def _collect_repo_view(repo: RowNode, quads: set[ExposureQuadruple]) -> None:
    def descend(node: RowNode, path: tuple[str, ...]) -> None:
        for child in node.children:
            if child.kind is EntityKind.MODULE:
                descend(child, path + (child.entity_id,))
            elif child.kind is EntityKind.LIBRARY:
                for bug in child.children:
                    quads.add(
                        ExposureQuadruple(
                            repository_id=repo.entity_id,
                            module_path=path,
                            library_digest=child.entity_id,
                            cve_id=bug.entity_id,
                        )
                    )

    for top in repo.children:
        descend(top, (top.entity_id,))
