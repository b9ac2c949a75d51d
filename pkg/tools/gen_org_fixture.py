#!/usr/bin/env python3
"""Generate the checked-in organization fixture corpus.

Writes one canonical scan file per repository under tests/data/org/.
The corpus is hand-shaped: a messaging library with a wide severity
spread used by 20 repositories, eight critical CVEs org-wide, an XML
parser reaching 27 repositories, a couple of vulnerability-free
repositories, unscored findings, nested modules, and quality metadata
on a few entities.  Deterministic by construction; rerunning must not
change a byte.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from vulnex.ingest.vsif import ScanDocument, canonicalize  # noqa: E402
from vulnex.model import (  # noqa: E402
    AffectsEdge,
    DependsEdge,
    Library,
    Module,
    QualityMeta,
    Repository,
    Vulnerability,
)

OUT_DIR = Path(__file__).resolve().parent.parent / "tests" / "data" / "org"

ADJECTIVES = [
    "brave", "calm", "daring", "eager", "fond", "gentle", "happy", "icy",
    "jolly", "keen", "lively", "mellow", "noble", "open", "proud", "quick",
    "rustic", "sunny", "tidy", "upbeat", "low", "vivid", "warm", "young",
    "zealous", "bold", "crisp", "dapper", "earnest", "frank", "golden", "humble",
    "modest",
]
ANIMALS = [
    "otter", "falcon", "badger", "heron", "lynx", "puffin", "stoat", "wren",
    "ibex", "jackal", "kestrel", "lemur", "magpie", "newt", "osprey", "plover",
    "quokka", "raven", "seal", "tapir", "marmoset", "urchin", "vole", "walrus",
    "yak", "zebra", "gannet", "hoopoe", "egret", "finch", "grebe", "bittern",
    "curlew",
]

N_REPOS = 33
LOW_MARMOSET = 20  # index whose name must be low-marmoset

# (group, artifact, version) -> list of (cve id, score or None)
ACTIVEMQ_CVES = (
    [("CVE-2019-70001", 3.3)]
    + [
        (f"CVE-2019-{71001 + i}", score)
        for i, score in enumerate(
            [4.0, 4.3, 4.5, 4.9, 5.0, 5.0, 5.3, 5.5, 5.9, 6.1, 6.4, 6.5, 6.8, 6.9]
        )
    ]
    + [("CVE-2019-72001", 7.5), ("CVE-2019-72002", 8.1), ("CVE-2019-72003", 8.8)]
    + [("CVE-2018-1270", 9.8), ("CVE-2018-1275", 9.8)]
)

LIBRARIES = {
    "activemq-all": {
        "group": "org.apache.activemq",
        "version": "5.9.0",
        "cves": ACTIVEMQ_CVES,
        "repos": list(range(0, 20)),
    },
    "xerces": {
        "group": "xerces",
        "version": "2.9.1",
        "cves": [("CVE-2009-2625", 5.0)],
        "repos": list(range(0, 27)),
    },
    "lucene-queryparser": {
        "group": "org.apache.lucene",
        "version": "6.1.0",
        "cves": [("CVE-2017-12629", 9.8)],
        "repos": list(range(3, 17)),
    },
    "spring-data-commons": {
        "group": "org.springframework.data",
        "version": "1.13.0",
        "cves": [("CVE-2018-1273", 9.8)],
        "repos": list(range(5, 12)),
    },
    "jgroups": {
        "group": "org.jgroups",
        "version": "3.6.6",
        "cves": [("CVE-2016-2141", 9.8)],
        "repos": list(range(8, 13)),
    },
    "groovy-all": {
        "group": "org.codehaus.groovy",
        "version": "2.4.3",
        "cves": [("CVE-2015-3253", 9.8), ("CVE-2016-6814", 9.6)],
        "repos": list(range(10, 17)),
    },
    "tomcat-embed-core": {
        "group": "org.apache.tomcat.embed",
        "version": "8.5.23",
        "cves": [("CVE-2018-8014", 9.8), ("CVE-2019-73001", 5.9)],
        "repos": list(range(13, 21)),
    },
    "openjpa-asm-shaded": {
        "group": "org.apache.openjpa",
        "version": "2.4.1",
        "cves": [("CVE-2013-1768", 7.5)],
        "repos": [21, 22, 23],
    },
    "commons-beanutils": {
        "group": "commons-beanutils",
        "version": "1.9.2",
        "cves": [("CVE-2019-74001", None)],
        "repos": list(range(24, 30)),
    },
    "legacy-io": {
        "group": "org.example.legacy",
        "version": "0.9",
        "cves": [("CVE-2019-74002", 0.0)],
        "repos": [27, 28, 29, 30],
    },
    "slf4j-api": {
        "group": "org.slf4j",
        "version": "1.7.21",
        "cves": [],
        "repos": list(range(0, 15)),
    },
    "guava": {
        "group": "com.google.guava",
        "version": "19.0",
        "cves": [],
        "repos": list(range(15, 27)),
    },
    "commons-text": {
        "group": "org.apache.commons",
        "version": "1.6",
        "cves": [],
        "repos": [31, 32],
    },
}


def fake_digest(coordinates: str) -> str:
    import hashlib

    return hashlib.sha1(coordinates.encode("utf-8")).hexdigest()


def repo_name(i: int) -> str:
    if i == LOW_MARMOSET:
        return "low-marmoset"
    name = f"{ADJECTIVES[i % len(ADJECTIVES)]}-{ANIMALS[(i * 7) % len(ANIMALS)]}"
    assert name != "low-marmoset"
    return name


def module_plan(i: int, repo_id: str) -> list[Module]:
    """1 to 3 modules; every third repo nests the last one."""
    if i == LOW_MARMOSET:
        names = ["app", "satisfactory-haddock"]
    else:
        names = ["app", "core", "service"][: 1 + i % 3]
    modules = []
    for j, name in enumerate(names):
        parent = None
        if i % 3 == 2 and j == 2:
            parent = f"{repo_id}.{names[1]}"
        modules.append(
            Module(id=f"{repo_id}.{name}", name=name, repository_id=repo_id, parent_module_id=parent)
        )
    return modules


def build_corpus() -> list[ScanDocument]:
    lib_objs: dict[str, Library] = {}
    for artifact, info in LIBRARIES.items():
        coords = f"{info['group']}:{artifact}:{info['version']}"
        lib_objs[artifact] = Library(
            group=info["group"],
            artifact=artifact,
            version=info["version"],
            digest=fake_digest(coords),
            meta=QualityMeta(lgtm_grade="B", github_stars=420)
            if artifact == "activemq-all"
            else None,
        )

    docs = []
    for i in range(N_REPOS):
        name = repo_name(i)
        repo_id = f"org.acme:{name}"
        modules = module_plan(i, repo_id)
        repo = Repository(
            id=repo_id,
            name=name,
            source_url=f"https://github.com/acme/{name}" if i % 4 != 3 else None,
            meta=QualityMeta(lgtm_grade="A", lgtm_score=8.5) if i == 0 else None,
        )

        local_libs = [a for a, info in LIBRARIES.items() if i in info["repos"]]
        libraries = [lib_objs[a] for a in sorted(local_libs)]
        dependencies = []
        for k, artifact in enumerate(sorted(local_libs)):
            if i == LOW_MARMOSET and artifact == "tomcat-embed-core":
                module = modules[1]  # the satisfactory-haddock module
            else:
                module = modules[k % len(modules)]
            dependencies.append(
                DependsEdge(module_id=module.id, library_digest=lib_objs[artifact].digest)
            )
        vulns = {}
        affects = []
        for artifact in sorted(local_libs):
            for cve_id, score in LIBRARIES[artifact]["cves"]:
                vulns[cve_id] = Vulnerability(cve_id=cve_id, cvss_score=score)
                affects.append(
                    AffectsEdge(library_digest=lib_objs[artifact].digest, cve_id=cve_id)
                )

        docs.append(
            ScanDocument(
                repository=repo,
                modules=tuple(modules),
                libraries=tuple(libraries),
                vulnerabilities=tuple(vulns.values()),
                dependencies=tuple(dependencies),
                affects=tuple(affects),
                scan_timestamp=f"2020-04-{(i % 28) + 1:02d}T10:00:00Z",
            )
        )
    return docs


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    docs = build_corpus()
    for doc in docs:
        path = OUT_DIR / f"{doc.repository.name}.vulnex.json"
        path.write_text(canonicalize(doc), encoding="utf-8", newline="\n")
    print(f"wrote {len(docs)} scan files to {OUT_DIR}")


if __name__ == "__main__":
    main()
