#!/usr/bin/env python3
"""Regenerate the golden byte-for-byte fixtures under tests/data/golden/.

Three artifacts:
  minimal.vulnex.json          canonical scan document with every optional
                               field exercised at least once
  view_libraries_activemq.json canonical HTTP payload for the library view
                               filtered to the messaging library, expanded
                               one level
  report_repo_low_marmoset.csv CSV report for one repository, full depth

Any diff after regeneration is a contract change and needs review.
"""

from __future__ import annotations

import hashlib
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from click.testing import CliRunner  # noqa: E402

from vulnex.analytics import FilterSpec  # noqa: E402
from vulnex.api.cli import main as cli_main  # noqa: E402
from vulnex.api.snapshot import write_snapshot  # noqa: E402
from vulnex.api.views import ViewRequest, build_view_response, canonical_json  # noqa: E402
from vulnex.graph import Ordering, build_graph  # noqa: E402
from vulnex.ingest import canonicalize, ingest_directory, parse_scan_file  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent
ORG_DIR = ROOT / "tests" / "data" / "org"
GOLDEN_DIR = ROOT / "tests" / "data" / "golden"

MINIMAL_OBJ = {
    "formatVersion": "1",
    "scanTimestamp": "2020-05-01T12:00:00Z",
    "repository": {
        "id": "org.demo:anchor",
        "name": "anchor",
        "sourceUrl": "https://github.com/demo/anchor",
        "meta": {
            "lgtmGrade": "A",
            "lgtmScore": 9.5,
            "githubIssues": 3,
            "githubStars": 120,
            "githubWatchers": 14,
        },
    },
    "modules": [
        {"id": "org.demo:anchor.app", "name": "app"},
        {"id": "org.demo:anchor.app.web", "name": "web", "parentModuleId": "org.demo:anchor.app"},
    ],
    "libraries": [
        {
            "group": "org.demo",
            "artifact": "alpha",
            "version": "1.0",
            "digest": "aaa111",
            "meta": {"lgtmGrade": "B"},
        },
        {"group": "org.demo", "artifact": "beta", "version": "2.0", "digest": "bbb222"},
    ],
    "vulnerabilities": [
        {
            "cveId": "CVE-2020-0001",
            "cvssScore": 9.8,
            "cvssVector": "CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H",
            "description": "remote code execution in the demo parser",
        },
        {"cveId": "CVE-2020-0002"},
    ],
    "dependencies": [
        {"moduleId": "org.demo:anchor.app", "libraryDigest": "aaa111"},
        {"moduleId": "org.demo:anchor.app.web", "libraryDigest": "bbb222"},
    ],
    "affects": [
        {"libraryDigest": "aaa111", "cveId": "CVE-2020-0001", "reachable": True},
        {"libraryDigest": "bbb222", "cveId": "CVE-2020-0002"},
    ],
}


def write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)
    print(f"wrote {path.relative_to(ROOT)} ({len(data)} bytes)")


def main() -> None:
    import json

    doc = parse_scan_file(json.dumps(MINIMAL_OBJ), source="gen_golden")
    write(GOLDEN_DIR / "minimal.vulnex.json", canonicalize(doc).encode("utf-8"))

    docs, report = ingest_directory(ORG_DIR)
    assert report.ok, report.rejected
    g = build_graph(docs)

    amq_digest = hashlib.sha1(b"org.apache.activemq:activemq-all:5.9.0").hexdigest()
    payload = build_view_response(
        g,
        ViewRequest(
            ordering=Ordering.LIBRARY_CENTERED,
            filter=FilterSpec(name_query="activemq"),
            expand=((amq_digest,),),
        ),
    )
    write(GOLDEN_DIR / "view_libraries_activemq.json", canonical_json(payload) + b"\n")

    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        snap = Path(tmp) / "snap.json"
        write_snapshot(docs, snap)
        result = CliRunner().invoke(
            cli_main,
            [
                "report",
                "--view",
                "repo",
                "--format",
                "csv",
                "--snapshot",
                str(snap),
                "--name-query",
                "low-marmoset",
                "--full",
            ],
        )
        assert result.exit_code == 0, result.output
        write(GOLDEN_DIR / "report_repo_low_marmoset.csv", result.output.encode("utf-8"))


if __name__ == "__main__":
    main()
