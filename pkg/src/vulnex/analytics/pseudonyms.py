"""Deterministic adjective-animal pseudonyms for repository and module names.

Renaming is keyed by display name: equal original names always receive
the same pseudonym and distinct names distinct ones, for a given seed.
Identifiers are rewritten from the pseudonyms (with a numeric suffix on
collisions) and repository source URLs are dropped, so no original
naming survives in the output.
"""

from __future__ import annotations

import random
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from vulnex.errors import CapacityError
from vulnex.graph.orggraph import OrgGraph
from vulnex.ingest.vsif import ScanDocument
from vulnex.model import DependsEdge, Module, Repository


def _load_words(name: str) -> tuple[str, ...]:
    text = resources.files("vulnex.analytics").joinpath(f"data/{name}").read_text("utf-8")
    return tuple(w for w in text.split() if w)


def _make_name_map(names: Iterable[str], seed: int) -> dict[str, str]:
    adjectives = _load_words("adjectives.txt")
    animals = _load_words("animals.txt")
    domain = sorted(set(names))
    capacity = len(adjectives) * len(animals)
    if len(domain) > capacity:
        raise CapacityError(
            f"cannot pseudonymize {len(domain)} distinct names with only {capacity} combinations"
        )
    rng = random.Random(seed)
    picks = rng.sample(range(capacity), len(domain))
    return {
        name: f"{adjectives[pick // len(animals)]}-{animals[pick % len(animals)]}"
        for name, pick in zip(domain, picks)
    }


def _unique(base: str, taken: set[str]) -> str:
    candidate = base
    i = 2
    while candidate in taken:
        candidate = f"{base}-{i}"
        i += 1
    taken.add(candidate)
    return candidate


def _make_id_maps(
    repositories: Mapping[str, Repository],
    modules: Mapping[str, Module],
    name_map: Mapping[str, str],
) -> tuple[dict[str, str], dict[str, str]]:
    repo_ids: dict[str, str] = {}
    taken_repo: set[str] = set()
    for repo_id in sorted(repositories):
        repo_ids[repo_id] = _unique(name_map[repositories[repo_id].name], taken_repo)
    module_ids: dict[str, str] = {}
    taken_mod: set[str] = set()
    for module_id in sorted(modules):
        module = modules[module_id]
        # ":" keeps pseudonymized module ids free of "/", which the API
        # reserves for expansion path separators
        base = f"{repo_ids[module.repository_id]}:{name_map[module.name]}"
        module_ids[module_id] = _unique(base, taken_mod)
    return repo_ids, module_ids


def pseudonymize(g: OrgGraph, seed: int) -> tuple[OrgGraph, dict[str, str]]:
    """Rename every repository and module with a seeded pseudonym.

    Returns the renamed graph and the name mapping (original display
    name to pseudonym).  Libraries and vulnerabilities are public
    knowledge and stay untouched; everything except names, ids, and
    source URLs is preserved.
    """
    names = [r.name for r in g.repositories.values()] + [m.name for m in g.modules.values()]
    name_map = _make_name_map(names, seed)
    repo_ids, module_ids = _make_id_maps(g.repositories, g.modules, name_map)

    repositories = {
        repo_ids[r.id]: Repository(
            id=repo_ids[r.id], name=name_map[r.name], source_url=None, meta=r.meta
        )
        for r in g.repositories.values()
    }
    modules = {
        module_ids[m.id]: Module(
            id=module_ids[m.id],
            name=name_map[m.name],
            repository_id=repo_ids[m.repository_id],
            parent_module_id=None if m.parent_module_id is None else module_ids[m.parent_module_id],
        )
        for m in g.modules.values()
    }
    depends = [
        DependsEdge(module_id=module_ids[e.module_id], library_digest=e.library_digest)
        for e in g.depends_edges
    ]
    renamed = OrgGraph(
        repositories=repositories,
        modules=modules,
        libraries=g.libraries,
        vulnerabilities=g.vulnerabilities,
        depends_edges=depends,
        affects_edges=g.affects_edges,
    )
    return renamed, name_map


def pseudonymize_documents(
    docs: Iterable[ScanDocument], seed: int
) -> tuple[list[ScanDocument], dict[str, str]]:
    """Document-level counterpart of :func:`pseudonymize`.

    Building a graph from the renamed documents yields exactly the graph
    ``pseudonymize`` would return for the original one.
    """
    doc_list = sorted(docs, key=lambda d: d.repository.id)
    repositories = {d.repository.id: d.repository for d in doc_list}
    modules = {m.id: m for d in doc_list for m in d.modules}
    names = [r.name for r in repositories.values()] + [m.name for m in modules.values()]
    name_map = _make_name_map(names, seed)
    repo_ids, module_ids = _make_id_maps(repositories, modules, name_map)

    renamed_docs = []
    for doc in doc_list:
        repo = doc.repository
        renamed_docs.append(
            ScanDocument(
                repository=Repository(
                    id=repo_ids[repo.id], name=name_map[repo.name], source_url=None, meta=repo.meta
                ),
                modules=tuple(
                    Module(
                        id=module_ids[m.id],
                        name=name_map[m.name],
                        repository_id=repo_ids[m.repository_id],
                        parent_module_id=None
                        if m.parent_module_id is None
                        else module_ids[m.parent_module_id],
                    )
                    for m in doc.modules
                ),
                libraries=doc.libraries,
                vulnerabilities=doc.vulnerabilities,
                dependencies=tuple(
                    DependsEdge(module_id=module_ids[e.module_id], library_digest=e.library_digest)
                    for e in doc.dependencies
                ),
                affects=doc.affects,
                scan_timestamp=doc.scan_timestamp,
                format_version=doc.format_version,
            )
        )
    return renamed_docs, name_map


def write_mapping(mapping: Mapping[str, str], path: str | Path) -> None:
    """Write the name mapping as two-column tab-separated UTF-8 text,
    sorted by original name."""
    lines = [f"{original}\t{pseudonym}\n" for original, pseudonym in sorted(mapping.items())]
    Path(path).write_text("".join(lines), encoding="utf-8", newline="\n")


def read_mapping(path: str | Path) -> dict[str, str]:
    mapping: dict[str, str] = {}
    for line in Path(path).read_text("utf-8").splitlines():
        if not line.strip():
            continue
        original, _, pseudonym = line.partition("\t")
        mapping[original] = pseudonym
    return mapping
