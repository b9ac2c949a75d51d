"""The merged organization graph and its exposure queries.

An OrgGraph holds every repository, module, library, and vulnerability
from a set of scan documents, plus the dependency and affects edges
connecting them.  Per-entity CVE sets are materialized as bitmask rows
at construction (see vulnex._kernels), which makes the aggregate
queries used by the views cheap lookups.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Mapping, NamedTuple

import numpy as np

from vulnex import _kernels as kernels
from vulnex.errors import GraphError, UnknownEntityError
from vulnex.ingest.vsif import ScanDocument
from vulnex.model import (
    AffectsEdge,
    DependsEdge,
    Library,
    Module,
    Repository,
    Vulnerability,
)

if TYPE_CHECKING:
    from vulnex.graph.rowtree import Ordering, RowTree


class EntityKind(str, Enum):
    REPOSITORY = "repository"
    MODULE = "module"
    LIBRARY = "library"
    BUG = "bug"


@dataclass(frozen=True)
class EntityRef:
    """Reference to one graph entity: libraries go by digest, bugs by CVE id."""

    kind: EntityKind
    id: str


class ExposureQuadruple(NamedTuple):
    """One concrete exposure: a repository reaches a CVE through the module
    at ``module_path`` (root to leaf) depending on the affected library."""

    repository_id: str
    module_path: tuple[str, ...]
    library_digest: str
    cve_id: str


@dataclass(frozen=True)
class LayeredGraph:
    """Three-layer dependency picture of one repository: the repository on
    top, its modules and libraries in the middle, affecting CVEs at the
    bottom.  Edges run repository->module, module->library, library->CVE."""

    repository_id: str
    module_ids: tuple[str, ...]
    library_digests: tuple[str, ...]
    cve_ids: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]


def build_graph(documents: Iterable[ScanDocument]) -> "OrgGraph":
    """Merge scan documents into one organization graph.

    Documents are processed in repository-id order, so the result does
    not depend on input ordering.  Libraries and vulnerabilities seen in
    several documents merge into single nodes; when optional fields
    conflict, the first document (in that canonical order) wins.  A
    library digest claimed with different coordinates, a repeated
    repository id, or a module id reused across repositories is a
    structural conflict and raises GraphError.
    """
    docs = sorted(documents, key=lambda d: d.repository.id)

    repositories: dict[str, Repository] = {}
    modules: dict[str, Module] = {}
    libraries: dict[str, Library] = {}
    vulnerabilities: dict[str, Vulnerability] = {}
    depends: set[DependsEdge] = set()
    affects: dict[tuple[str, str], AffectsEdge] = {}

    for doc in docs:
        repo = doc.repository
        if repo.id in repositories:
            raise GraphError(f"duplicate repository id '{repo.id}' across documents")
        repositories[repo.id] = repo

        for module in doc.modules:
            existing = modules.get(module.id)
            if existing is not None:
                raise GraphError(
                    f"module id '{module.id}' appears in repositories "
                    f"'{existing.repository_id}' and '{module.repository_id}'"
                )
            modules[module.id] = module

        for lib in doc.libraries:
            existing_lib = libraries.get(lib.digest)
            if existing_lib is None:
                libraries[lib.digest] = lib
            else:
                if (existing_lib.group, existing_lib.artifact, existing_lib.version) != (
                    lib.group,
                    lib.artifact,
                    lib.version,
                ):
                    raise GraphError(
                        f"library digest '{lib.digest}' claimed with conflicting coordinates "
                        f"{existing_lib.coordinates} and {lib.coordinates}"
                    )
                if existing_lib.meta is None and lib.meta is not None:
                    libraries[lib.digest] = Library(
                        group=lib.group,
                        artifact=lib.artifact,
                        version=lib.version,
                        digest=lib.digest,
                        meta=lib.meta,
                    )
                elif existing_lib.meta is not None and lib.meta is not None:
                    merged = existing_lib.meta.merged_under(lib.meta)
                    if merged != existing_lib.meta:
                        libraries[lib.digest] = Library(
                            group=lib.group,
                            artifact=lib.artifact,
                            version=lib.version,
                            digest=lib.digest,
                            meta=merged,
                        )

        for vuln in doc.vulnerabilities:
            existing_vuln = vulnerabilities.get(vuln.cve_id)
            if existing_vuln is None:
                vulnerabilities[vuln.cve_id] = vuln
            else:
                # first document wins field-wise; later ones only fill gaps
                vulnerabilities[vuln.cve_id] = Vulnerability(
                    cve_id=vuln.cve_id,
                    cvss_score=existing_vuln.cvss_score
                    if existing_vuln.cvss_score is not None
                    else vuln.cvss_score,
                    cvss_vector=existing_vuln.cvss_vector
                    if existing_vuln.cvss_vector is not None
                    else vuln.cvss_vector,
                    description=existing_vuln.description
                    if existing_vuln.description is not None
                    else vuln.description,
                )

        depends.update(doc.dependencies)
        for edge in doc.affects:
            key = (edge.library_digest, edge.cve_id)
            existing_edge = affects.get(key)
            if existing_edge is None or (existing_edge.reachable is None and edge.reachable is not None):
                affects[key] = edge

    return OrgGraph(
        repositories=repositories,
        modules=modules,
        libraries=libraries,
        vulnerabilities=vulnerabilities,
        depends_edges=depends,
        affects_edges=affects.values(),
    )


class OrgGraph:
    """Immutable merged graph with precomputed exposure aggregates.

    Construction validates referential integrity (every edge endpoint and
    module parent resolves) and builds the bitmask index used by
    vulns_of, vuln_count_of, bucket_counts_of, and max_tenths_of.
    """

    def __init__(
        self,
        repositories: Mapping[str, Repository],
        modules: Mapping[str, Module],
        libraries: Mapping[str, Library],
        vulnerabilities: Mapping[str, Vulnerability],
        depends_edges: Iterable[DependsEdge],
        affects_edges: Iterable[AffectsEdge],
    ) -> None:
        self._repositories = {k: repositories[k] for k in sorted(repositories)}
        self._modules = {k: modules[k] for k in sorted(modules)}
        self._libraries = {k: libraries[k] for k in sorted(libraries)}
        self._vulnerabilities = {k: vulnerabilities[k] for k in sorted(vulnerabilities)}
        self._depends = tuple(sorted(set(depends_edges), key=lambda e: (e.module_id, e.library_digest)))
        self._affects = tuple(
            sorted(set(affects_edges), key=lambda e: (e.library_digest, e.cve_id))
        )
        self._validate()
        self._build_indexes()
        self._build_aggregates()
        self._quadruples: tuple[ExposureQuadruple, ...] | None = None
        self._trees: dict[object, RowTree] = {}

    # -- validation and index construction ---------------------------------

    def _validate(self) -> None:
        for module in self._modules.values():
            if module.repository_id not in self._repositories:
                raise GraphError(
                    f"module '{module.id}' names unknown repository '{module.repository_id}'"
                )
            if module.parent_module_id is not None:
                parent = self._modules.get(module.parent_module_id)
                if parent is None:
                    raise GraphError(
                        f"module '{module.id}' names unknown parent '{module.parent_module_id}'"
                    )
                if parent.repository_id != module.repository_id:
                    raise GraphError(
                        f"module '{module.id}' has parent in a different repository"
                    )
        for edge in self._depends:
            if edge.module_id not in self._modules:
                raise GraphError(f"dependency edge names unknown module '{edge.module_id}'")
            if edge.library_digest not in self._libraries:
                raise GraphError(f"dependency edge names unknown library '{edge.library_digest}'")
        for aff in self._affects:
            if aff.library_digest not in self._libraries:
                raise GraphError(f"affects edge names unknown library '{aff.library_digest}'")
            if aff.cve_id not in self._vulnerabilities:
                raise GraphError(f"affects edge names unknown CVE '{aff.cve_id}'")
        # parent chains must terminate
        for module in self._modules.values():
            seen = {module.id}
            current = module
            while current.parent_module_id is not None:
                if current.parent_module_id in seen:
                    raise GraphError(f"module parent cycle at '{current.parent_module_id}'")
                seen.add(current.parent_module_id)
                current = self._modules[current.parent_module_id]

    def _build_indexes(self) -> None:
        self._repo_modules: dict[str, list[str]] = {r: [] for r in self._repositories}
        children: dict[str, list[str]] = {m: [] for m in self._modules}
        tops: dict[str, list[str]] = {r: [] for r in self._repositories}
        for module in self._modules.values():
            self._repo_modules[module.repository_id].append(module.id)
            if module.parent_module_id is None:
                tops[module.repository_id].append(module.id)
            else:
                children[module.parent_module_id].append(module.id)
        self._module_children = {m: tuple(sorted(v)) for m, v in children.items()}
        self._top_modules = {r: tuple(sorted(v)) for r, v in tops.items()}

        self._module_paths: dict[str, tuple[str, ...]] = {}
        for module_id in self._modules:
            self._module_paths[module_id] = self._compute_path(module_id)

        mod_libs: dict[str, list[str]] = {m: [] for m in self._modules}
        lib_mods: dict[str, list[str]] = {d: [] for d in self._libraries}
        for edge in self._depends:
            mod_libs[edge.module_id].append(edge.library_digest)
            lib_mods[edge.library_digest].append(edge.module_id)
        self._module_libs = {m: tuple(sorted(v)) for m, v in mod_libs.items()}
        self._lib_modules = {d: tuple(sorted(v)) for d, v in lib_mods.items()}

        lib_cves: dict[str, list[str]] = {d: [] for d in self._libraries}
        cve_libs: dict[str, list[str]] = {c: [] for c in self._vulnerabilities}
        for aff in self._affects:
            lib_cves[aff.library_digest].append(aff.cve_id)
            cve_libs[aff.cve_id].append(aff.library_digest)
        self._lib_cves = {d: tuple(sorted(v)) for d, v in lib_cves.items()}
        self._cve_libs = {c: tuple(sorted(v)) for c, v in cve_libs.items()}

        self._lib_repos = {
            d: tuple(sorted({self._modules[m].repository_id for m in mods}))
            for d, mods in self._lib_modules.items()
        }
        self._cve_repos = {
            c: tuple(sorted({r for d in libs for r in self._lib_repos[d]}))
            for c, libs in self._cve_libs.items()
        }

        # distinct library sets per module subtree and per repository,
        # used for dependency-count metrics
        self._module_subtree_libs: dict[str, frozenset[str]] = {}
        for module_id in sorted(self._modules, key=lambda m: len(self._module_paths[m]), reverse=True):
            acc = set(self._module_libs[module_id])
            for child in self._module_children[module_id]:
                acc |= self._module_subtree_libs[child]
            self._module_subtree_libs[module_id] = frozenset(acc)
        self._repo_libs = {
            r: frozenset().union(*(self._module_subtree_libs[m] for m in tops_))
            for r, tops_ in self._top_modules.items()
        }

    def _compute_path(self, module_id: str) -> tuple[str, ...]:
        cached = self._module_paths.get(module_id)
        if cached is not None:
            return cached
        module = self._modules[module_id]
        if module.parent_module_id is None:
            path: tuple[str, ...] = (module_id,)
        else:
            path = self._compute_path(module.parent_module_id) + (module_id,)
        self._module_paths[module_id] = path
        return path

    def _build_aggregates(self) -> None:
        cve_ids = tuple(self._vulnerabilities)
        self._cve_order = cve_ids
        self._cve_index = {c: i for i, c in enumerate(cve_ids)}
        n = len(cve_ids)
        n_words = kernels.mask_words(n)

        self._score_tenths = np.array(
            [self._vulnerabilities[c].score_tenths for c in cve_ids], dtype=np.int16
        )
        self._bucket_codes = np.array(
            [self._vulnerabilities[c].severity.rank for c in cve_ids], dtype=np.int8
        )

        lib_order = tuple(self._libraries)
        self._lib_index = {d: i for i, d in enumerate(lib_order)}
        indptr = [0]
        bits: list[int] = []
        for d in lib_order:
            bits.extend(self._cve_index[c] for c in self._lib_cves[d])
            indptr.append(len(bits))
        self._lib_masks = kernels.build_masks(
            np.array(indptr, dtype=np.int64), np.array(bits, dtype=np.int64), n_words
        )

        module_order = tuple(self._modules)
        self._module_index = {m: i for i, m in enumerate(module_order)}
        indptr = [0]
        rows: list[int] = []
        for m in module_order:
            rows.extend(self._lib_index[d] for d in self._module_libs[m])
            indptr.append(len(rows))
        self._module_masks = kernels.or_reduce(
            np.array(indptr, dtype=np.int64), np.array(rows, dtype=np.int64), self._lib_masks
        )
        # fold children into parents, deepest first
        for module_id in sorted(module_order, key=lambda m: len(self._module_paths[m]), reverse=True):
            parent = self._modules[module_id].parent_module_id
            if parent is not None:
                self._module_masks[self._module_index[parent]] |= self._module_masks[
                    self._module_index[module_id]
                ]

        repo_order = tuple(self._repositories)
        self._repo_index = {r: i for i, r in enumerate(repo_order)}
        indptr = [0]
        rows = []
        for r in repo_order:
            rows.extend(self._module_index[m] for m in self._top_modules[r])
            indptr.append(len(rows))
        self._repo_masks = kernels.or_reduce(
            np.array(indptr, dtype=np.int64), np.array(rows, dtype=np.int64), self._module_masks
        )

        self._counts = {
            EntityKind.REPOSITORY: kernels.popcounts(self._repo_masks),
            EntityKind.MODULE: kernels.popcounts(self._module_masks),
            EntityKind.LIBRARY: kernels.popcounts(self._lib_masks),
        }
        self._buckets = {
            EntityKind.REPOSITORY: kernels.bucket_counts(self._repo_masks, self._bucket_codes),
            EntityKind.MODULE: kernels.bucket_counts(self._module_masks, self._bucket_codes),
            EntityKind.LIBRARY: kernels.bucket_counts(self._lib_masks, self._bucket_codes),
        }
        self._max_tenths = {
            EntityKind.REPOSITORY: kernels.max_scores(self._repo_masks, self._score_tenths),
            EntityKind.MODULE: kernels.max_scores(self._module_masks, self._score_tenths),
            EntityKind.LIBRARY: kernels.max_scores(self._lib_masks, self._score_tenths),
        }
        self._word_idx = np.arange(n, dtype=np.int64) >> 6
        self._bit_shift = (np.arange(n, dtype=np.int64) & 63).astype(np.uint64)

    # -- entity access ------------------------------------------------------

    @property
    def repositories(self) -> Mapping[str, Repository]:
        return self._repositories

    @property
    def modules(self) -> Mapping[str, Module]:
        return self._modules

    @property
    def libraries(self) -> Mapping[str, Library]:
        return self._libraries

    @property
    def vulnerabilities(self) -> Mapping[str, Vulnerability]:
        return self._vulnerabilities

    @property
    def depends_edges(self) -> tuple[DependsEdge, ...]:
        return self._depends

    @property
    def affects_edges(self) -> tuple[AffectsEdge, ...]:
        return self._affects

    def module_children(self, module_id: str) -> tuple[str, ...]:
        return self._module_children[module_id]

    def top_modules(self, repository_id: str) -> tuple[str, ...]:
        return self._top_modules[repository_id]

    def module_path(self, module_id: str) -> tuple[str, ...]:
        return self._module_paths[module_id]

    def module_libraries(self, module_id: str) -> tuple[str, ...]:
        return self._module_libs[module_id]

    def library_cves(self, digest: str) -> tuple[str, ...]:
        return self._lib_cves[digest]

    def library_modules(self, digest: str) -> tuple[str, ...]:
        return self._lib_modules[digest]

    def library_repositories(self, digest: str) -> tuple[str, ...]:
        return self._lib_repos[digest]

    def cve_libraries(self, cve_id: str) -> tuple[str, ...]:
        return self._cve_libs[cve_id]

    # -- aggregate queries ---------------------------------------------------

    def _row_for(self, ref: EntityRef) -> tuple[object, int]:
        if ref.kind is EntityKind.REPOSITORY:
            idx = self._repo_index.get(ref.id)
            matrix = self._repo_masks
        elif ref.kind is EntityKind.MODULE:
            idx = self._module_index.get(ref.id)
            matrix = self._module_masks
        elif ref.kind is EntityKind.LIBRARY:
            idx = self._lib_index.get(ref.id)
            matrix = self._lib_masks
        else:
            raise UnknownEntityError(f"no mask row for entity kind '{ref.kind.value}'")
        if idx is None:
            raise UnknownEntityError(f"unknown {ref.kind.value} '{ref.id}'")
        return matrix, idx

    def vulns_of(self, ref: EntityRef) -> frozenset[str]:
        """Distinct CVE ids reachable from the entity.

        Repositories and modules aggregate over their whole subtree;
        libraries list their own affecting CVEs; a bug is just itself.
        """
        if ref.kind is EntityKind.BUG:
            if ref.id not in self._vulnerabilities:
                raise UnknownEntityError(f"unknown bug '{ref.id}'")
            return frozenset((ref.id,))
        matrix, idx = self._row_for(ref)
        row = matrix[idx]
        if len(self._cve_order) == 0:
            return frozenset()
        present = ((row[self._word_idx] >> self._bit_shift) & np.uint64(1)).astype(bool)
        return frozenset(self._cve_order[i] for i in np.flatnonzero(present))

    def vuln_count_of(self, ref: EntityRef) -> int:
        if ref.kind is EntityKind.BUG:
            if ref.id not in self._vulnerabilities:
                raise UnknownEntityError(f"unknown bug '{ref.id}'")
            return 1
        _, idx = self._row_for(ref)
        return int(self._counts[ref.kind][idx])

    def bucket_counts_of(self, ref: EntityRef) -> tuple[int, int, int, int, int]:
        """Per-bucket CVE counts (unscored, low, medium, high, critical)."""
        _, idx = self._row_for(ref)
        return tuple(int(x) for x in self._buckets[ref.kind][idx])  # type: ignore[return-value]

    def max_tenths_of(self, ref: EntityRef) -> int:
        """Max CVSS over the entity's CVEs, in tenths; -1 when none scored."""
        if ref.kind is EntityKind.BUG:
            if ref.id not in self._vulnerabilities:
                raise UnknownEntityError(f"unknown bug '{ref.id}'")
            return self._vulnerabilities[ref.id].score_tenths
        _, idx = self._row_for(ref)
        return int(self._max_tenths[ref.kind][idx])

    def contains_cve(self, ref: EntityRef, cve_id: str) -> bool:
        """Bit test: is the CVE in the entity's reachable set?"""
        if cve_id not in self._cve_index:
            raise UnknownEntityError(f"unknown CVE '{cve_id}'")
        if ref.kind is EntityKind.BUG:
            return ref.id == cve_id
        matrix, idx = self._row_for(ref)
        bit = self._cve_index[cve_id]
        return bool((int(matrix[idx][bit >> 6]) >> (bit & 63)) & 1)

    def dependency_count_of(self, ref: EntityRef) -> int:
        """Distinct libraries reachable from a repository or module."""
        if ref.kind is EntityKind.REPOSITORY:
            try:
                return len(self._repo_libs[ref.id])
            except KeyError:
                raise UnknownEntityError(f"unknown repository '{ref.id}'") from None
        if ref.kind is EntityKind.MODULE:
            try:
                return len(self._module_subtree_libs[ref.id])
            except KeyError:
                raise UnknownEntityError(f"unknown module '{ref.id}'") from None
        raise UnknownEntityError(f"dependency count undefined for kind '{ref.kind.value}'")

    def repos_affected_by(self, cve_id: str) -> frozenset[str]:
        """Ids of repositories with at least one module depending on a
        library affected by the CVE."""
        try:
            return frozenset(self._cve_repos[cve_id])
        except KeyError:
            raise UnknownEntityError(f"unknown CVE '{cve_id}'") from None

    def exposure_quadruples(self) -> tuple[ExposureQuadruple, ...]:
        """Every (repository, module path, library, CVE) exposure, sorted."""
        if self._quadruples is None:
            quads = [
                ExposureQuadruple(
                    repository_id=self._modules[edge.module_id].repository_id,
                    module_path=self._module_paths[edge.module_id],
                    library_digest=edge.library_digest,
                    cve_id=cve,
                )
                for edge in self._depends
                for cve in self._lib_cves[edge.library_digest]
            ]
            self._quadruples = tuple(sorted(quads))
        return self._quadruples

    def dependency_graph_view(self, repository_id: str) -> LayeredGraph:
        """Layered dependency picture for one repository.

        All of the repository's modules and direct libraries appear even
        when vulnerability-free; the bottom layer holds exactly the CVEs
        of the included libraries, so composing the module->library and
        library->CVE edges reproduces the repository's quadruples.
        """
        if repository_id not in self._repositories:
            raise UnknownEntityError(f"unknown repository '{repository_id}'")
        module_ids = tuple(sorted(self._repo_modules[repository_id]))
        digests = tuple(sorted({d for m in module_ids for d in self._module_libs[m]}))
        cves = tuple(sorted({c for d in digests for c in self._lib_cves[d]}))
        edges: list[tuple[str, str]] = [(repository_id, m) for m in module_ids]
        for m in module_ids:
            edges.extend((m, d) for d in self._module_libs[m])
        for d in digests:
            edges.extend((d, c) for c in self._lib_cves[d])
        return LayeredGraph(
            repository_id=repository_id,
            module_ids=module_ids,
            library_digests=digests,
            cve_ids=cves,
            edges=tuple(edges),
        )

    def tree(self, ordering: "Ordering") -> "RowTree":
        """Row tree for one of the three views, cached per ordering."""
        cached = self._trees.get(ordering)
        if cached is None:
            from vulnex.graph.rowtree import project_tree

            cached = project_tree(self, ordering)
            self._trees[ordering] = cached
        return cached

    def warm(self) -> None:
        """Precompute all three view trees (snapshot load time, not request time)."""
        from vulnex.graph.rowtree import Ordering

        for ordering in Ordering:
            self.tree(ordering)
