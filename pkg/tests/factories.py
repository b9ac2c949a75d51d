"""Test helpers: compact document builders, a random organization
generator, and brute-force oracles computed straight from documents
(never through the graph code under test)."""

from __future__ import annotations

import hashlib
import random
from typing import Iterable, Sequence

from vulnex.ingest.vsif import ScanDocument
from vulnex.model import (
    AffectsEdge,
    DependsEdge,
    Library,
    Module,
    Repository,
    Vulnerability,
)


def digest_for(coordinates: str) -> str:
    return hashlib.sha1(coordinates.encode("utf-8")).hexdigest()


def make_library(artifact: str, version: str = "1.0", group: str = "org.example") -> Library:
    coords = f"{group}:{artifact}:{version}"
    return Library(group=group, artifact=artifact, version=version, digest=digest_for(coords))


def make_doc(
    repo_id: str,
    modules: Sequence[tuple[str, str | None]] = (),
    libraries: Sequence[Library] = (),
    vulnerabilities: Sequence[Vulnerability] = (),
    dependencies: Sequence[tuple[str, str]] = (),
    affects: Sequence[tuple[str, str]] = (),
    name: str | None = None,
    source_url: str | None = None,
    timestamp: str = "2020-05-01T00:00:00Z",
) -> ScanDocument:
    """Build a validated document from terse tuples.

    ``modules`` entries are (module_id, parent_id or None); dependency
    and affects entries are (module_id, digest) and (digest, cve_id).
    """
    return ScanDocument(
        repository=Repository(id=repo_id, name=name or repo_id, source_url=source_url),
        modules=tuple(
            Module(id=m, name=m, repository_id=repo_id, parent_module_id=p) for m, p in modules
        ),
        libraries=tuple(libraries),
        vulnerabilities=tuple(vulnerabilities),
        dependencies=tuple(DependsEdge(module_id=m, library_digest=d) for m, d in dependencies),
        affects=tuple(
            a if isinstance(a, AffectsEdge) else AffectsEdge(library_digest=a[0], cve_id=a[1])
            for a in affects
        ),
        scan_timestamp=timestamp,
    )


def random_org(
    rng: random.Random,
    max_repos: int = 20,
    max_libs: int = 15,
    max_cves: int = 30,
) -> list[ScanDocument]:
    """A random organization: shared library pool, random module trees,
    random dependency and affects edges.  Some CVEs are unscored (absent
    or 0.0) and some libraries and repositories stay vulnerability-free."""
    n_cves = rng.randint(0, max_cves)
    cves = []
    for i in range(n_cves):
        roll = rng.random()
        if roll < 0.15:
            score = None
        elif roll < 0.25:
            score = 0.0
        else:
            score = rng.randint(1, 100) / 10
        cves.append(Vulnerability(cve_id=f"CVE-2020-{1000 + i}", cvss_score=score))

    n_libs = rng.randint(1, max_libs)
    libs = [make_library(f"lib{i}", version=f"{rng.randint(1, 3)}.0") for i in range(n_libs)]
    affects_pool: dict[str, list[str]] = {lib.digest: [] for lib in libs}
    for vuln in cves:
        for lib in libs:
            if rng.random() < 0.12:
                affects_pool[lib.digest].append(vuln.cve_id)

    docs = []
    n_repos = rng.randint(1, max_repos)
    for r in range(n_repos):
        repo_id = f"repo{r}"
        n_modules = rng.randint(1, 4)
        modules: list[tuple[str, str | None]] = []
        for m in range(n_modules):
            parent = None
            if m > 0 and rng.random() < 0.5:
                parent = f"{repo_id}.m{rng.randrange(m)}"
            modules.append((f"{repo_id}.m{m}", parent))
        local_libs = rng.sample(libs, rng.randint(0, min(len(libs), 6)))
        deps = []
        for lib in local_libs:
            for module_id, _ in modules:
                if rng.random() < 0.5:
                    deps.append((module_id, lib.digest))
        # keep each sampled library attached somewhere
        for lib in local_libs:
            if not any(d == lib.digest for _, d in deps):
                deps.append((modules[rng.randrange(n_modules)][0], lib.digest))
        local_affects = []
        local_cve_ids = set()
        for lib in local_libs:
            for cve_id in affects_pool[lib.digest]:
                local_affects.append((lib.digest, cve_id))
                local_cve_ids.add(cve_id)
        docs.append(
            make_doc(
                repo_id,
                modules,
                local_libs,
                [v for v in cves if v.cve_id in local_cve_ids],
                deps,
                local_affects,
            )
        )
    return docs


# -- brute-force oracles ------------------------------------------------------


def brute_quadruples(
    docs: Iterable[ScanDocument],
) -> set[tuple[str, tuple[str, ...], str, str]]:
    """Exposure quadruples joined directly from the raw document edges."""
    doc_list = list(docs)
    global_affects: set[tuple[str, str]] = set()
    for doc in doc_list:
        for aff in doc.affects:
            global_affects.add((aff.library_digest, aff.cve_id))

    quads: set[tuple[str, tuple[str, ...], str, str]] = set()
    for doc in doc_list:
        parents = {m.id: m.parent_module_id for m in doc.modules}
        for dep in doc.dependencies:
            path = [dep.module_id]
            while parents[path[0]] is not None:
                path.insert(0, parents[path[0]])
            for digest, cve_id in global_affects:
                if digest == dep.library_digest:
                    quads.add((doc.repository.id, tuple(path), dep.library_digest, cve_id))
    return quads


def brute_repo_vulns(docs: Iterable[ScanDocument], repo_id: str) -> set[str]:
    return {cve for r, _path, _d, cve in brute_quadruples(docs) if r == repo_id}


def brute_module_vulns(docs: Iterable[ScanDocument], module_id: str) -> set[str]:
    """CVEs reachable from the module or any descendant."""
    return {
        cve
        for _r, path, _d, cve in brute_quadruples(docs)
        if module_id in path
    }


def brute_library_vulns(docs: Iterable[ScanDocument], digest: str) -> set[str]:
    return {
        aff.cve_id for doc in docs for aff in doc.affects if aff.library_digest == digest
    }


def brute_repos_affected(docs: Iterable[ScanDocument], cve_id: str) -> set[str]:
    return {r for r, _path, _d, cve in brute_quadruples(docs) if cve == cve_id}
