"""Graph enrichment: fill missing quality metadata from providers."""

from __future__ import annotations

from typing import Sequence

from vulnex.enrich.providers import MetaProvider
from vulnex.graph.orggraph import OrgGraph
from vulnex.model import Library, QualityMeta, Repository


def _resolve(existing: QualityMeta | None, found: list[QualityMeta]) -> QualityMeta | None:
    """Merge metadata field-wise: scan data wins, then providers in order."""
    merged = existing
    for meta in found:
        merged = meta if merged is None else merged.merged_under(meta)
    if merged is not None and merged.is_empty():
        return None
    return merged


def enrich_graph(g: OrgGraph, providers: Sequence[MetaProvider]) -> OrgGraph:
    """Return a graph identical to ``g`` except for quality metadata.

    For every repository with a source URL and every library, each
    provider is asked in order; a provider fills only the fields still
    absent after the scan data and earlier providers.  Topology, names,
    vulnerabilities, and edges are untouched.
    """
    repositories: dict[str, Repository] = {}
    for repo in g.repositories.values():
        found = []
        if repo.source_url is not None:
            found = [m for p in providers if (m := p.repository_meta(repo.source_url)) is not None]
        meta = _resolve(repo.meta, found)
        if meta == repo.meta:
            repositories[repo.id] = repo
        else:
            repositories[repo.id] = Repository(
                id=repo.id, name=repo.name, source_url=repo.source_url, meta=meta
            )

    libraries: dict[str, Library] = {}
    for lib in g.libraries.values():
        found = [m for p in providers if (m := p.library_meta(lib.coordinates)) is not None]
        meta = _resolve(lib.meta, found)
        if meta == lib.meta:
            libraries[lib.digest] = lib
        else:
            libraries[lib.digest] = Library(
                group=lib.group,
                artifact=lib.artifact,
                version=lib.version,
                digest=lib.digest,
                meta=meta,
            )

    return OrgGraph(
        repositories=repositories,
        modules=g.modules,
        libraries=libraries,
        vulnerabilities=g.vulnerabilities,
        depends_edges=g.depends_edges,
        affects_edges=g.affects_edges,
    )
