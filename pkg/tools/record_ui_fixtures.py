"""Record HTTP API responses for the frontend contract tests.

Loads the checked-in organization corpus, runs the API in-process, and
writes selected responses as JSON files under frontend/test/fixtures/.
The frontend test suite asserts against these bytes, so regenerating
them after an API change is a contract change and needs review.

Usage: python3 tools/record_ui_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from vulnex.api.app import create_app
from vulnex.graph import build_graph
from vulnex.ingest import ingest_directory

ROOT = Path(__file__).resolve().parent.parent
ORG_DIR = ROOT / "tests" / "data" / "org"
OUT_DIR = ROOT / "frontend" / "test" / "fixtures"

LM = "org.acme:low-marmoset"
LM_MODULE = "org.acme:low-marmoset.satisfactory-haddock"
TOMCAT_DIGEST = "51ab4346a7beb498e1db6d0845b1b7ec23308316"

RECORDINGS = {
    "view_repositories.json": "/api/views/repositories",
    "view_libraries.json": "/api/views/libraries",
    "view_bugs.json": "/api/views/bugs",
    "view_repositories_expanded.json": (
        f"/api/views/repositories?expand={LM}/{LM_MODULE}/{TOMCAT_DIGEST}"
    ),
    "view_repositories_hidefree.json": (
        "/api/views/repositories?hideVulnerabilityFree=true"
    ),
    "view_repositories_marm.json": "/api/views/repositories?nameQuery=marm",
    "matrix_defaults.json": "/api/matrix/defaults",
    f"graph_{LM}.json": f"/api/graph/{LM}",
    "graph_org.acme:humble-tapir.json": "/api/graph/org.acme:humble-tapir",
}


def main() -> None:
    docs, report = ingest_directory(ORG_DIR)
    assert report.ok, report.rejected
    client = TestClient(create_app(build_graph(docs)))

    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for name, url in RECORDINGS.items():
        response = client.get(url)
        assert response.status_code == 200, (url, response.status_code)
        path = OUT_DIR / name
        path.write_text(
            json.dumps(response.json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        print(f"wrote {path.relative_to(ROOT)}")


if __name__ == "__main__":
    main()
