"""FastAPI application exposing the audit views.

All endpoints are synchronous and serve canonical JSON bytes.  The app
holds one immutable graph snapshot at a time; POST /api/reingest swaps
it atomically after a successful rebuild.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.staticfiles import StaticFiles

from vulnex.analytics.cells import default_matrix_columns
from vulnex.analytics.filters import (
    FilterSpec,
    SortDirection,
    SortKey,
    SortSpec,
    default_direction,
)
from vulnex.api.views import (
    DEFAULT_PAGE_SIZE,
    MATRIX_DEFAULT_COLUMNS,
    ViewRequest,
    build_view_response,
    canonical_json,
)
from vulnex.enrich.enricher import enrich_graph
from vulnex.enrich.providers import MetaProvider
from vulnex.errors import (
    GraphError,
    UnknownEntityError,
    ValidationError,
    VulnexError,
)
from vulnex.graph.orggraph import OrgGraph, build_graph
from vulnex.graph.rowtree import Ordering
from vulnex.ingest.directory import ingest_directory

_STATIC_DIR = Path(__file__).parent / "static"


@dataclass
class AppState:
    graph: OrgGraph | None = None
    scan_dir: Path | None = None
    providers: Sequence[MetaProvider] = field(default_factory=tuple)


def _json_response(payload: Any, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(payload), status_code=status_code, media_type="application/json"
    )


def _require_graph(state: AppState) -> OrgGraph:
    if state.graph is None:
        raise HTTPException(status_code=409, detail="no scan data loaded")
    return state.graph


def _bad_request(message: str) -> HTTPException:
    return HTTPException(status_code=400, detail=message)


def _parse_int(params, name: str) -> int | None:
    raw = params.get(name)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise _bad_request(f"query parameter '{name}' must be an integer, got {raw!r}") from None


def _parse_float(params, name: str) -> float | None:
    raw = params.get(name)
    if raw is None:
        return None
    try:
        return float(raw)
    except ValueError:
        raise _bad_request(f"query parameter '{name}' must be a number, got {raw!r}") from None


def _parse_bool(params, name: str) -> bool:
    raw = params.get(name)
    if raw is None:
        return False
    lowered = raw.lower()
    if lowered in ("true", "1"):
        return True
    if lowered in ("false", "0"):
        return False
    raise _bad_request(f"query parameter '{name}' must be a boolean, got {raw!r}")


def _parse_view_request(view: str, request: Request) -> ViewRequest:
    try:
        ordering = Ordering(view)
    except ValueError:
        raise HTTPException(status_code=404, detail=f"unknown view '{view}'") from None
    params = request.query_params

    known = {
        "nameQuery",
        "minCvss",
        "maxCvss",
        "minDependencies",
        "maxDependencies",
        "minVulnerabilities",
        "maxVulnerabilities",
        "hideVulnerabilityFree",
        "hideUnscoredCves",
        "sortKey",
        "sortDirection",
        "expand",
        "matrixColumns",
        "page",
        "pageSize",
    }
    unknown = set(params.keys()) - known
    if unknown:
        raise _bad_request(f"unknown query parameters: {sorted(unknown)}")

    try:
        spec = FilterSpec(
            name_query=params.get("nameQuery"),
            min_cvss=_parse_float(params, "minCvss"),
            max_cvss=_parse_float(params, "maxCvss"),
            min_dependencies=_parse_int(params, "minDependencies"),
            max_dependencies=_parse_int(params, "maxDependencies"),
            min_vulnerabilities=_parse_int(params, "minVulnerabilities"),
            max_vulnerabilities=_parse_int(params, "maxVulnerabilities"),
            hide_vulnerability_free=_parse_bool(params, "hideVulnerabilityFree"),
            hide_unscored=_parse_bool(params, "hideUnscoredCves"),
        )
    except ValidationError as exc:
        raise _bad_request(str(exc)) from exc

    sort: SortSpec | None = None
    raw_key = params.get("sortKey")
    raw_direction = params.get("sortDirection")
    if raw_key is not None:
        try:
            key = SortKey(raw_key)
        except ValueError:
            raise _bad_request(f"unknown sortKey {raw_key!r}") from None
        if raw_direction is None:
            direction = default_direction(key)
        else:
            try:
                direction = SortDirection(raw_direction)
            except ValueError:
                raise _bad_request(f"unknown sortDirection {raw_direction!r}") from None
        sort = SortSpec(key=key, direction=direction)
    elif raw_direction is not None:
        raise _bad_request("sortDirection given without sortKey")

    expand = tuple(tuple(raw.split("/")) for raw in params.getlist("expand"))
    matrix_columns = params.getlist("matrixColumns")
    # "or" would silently turn an explicit 0 into the default
    page = _parse_int(params, "page")
    page_size = _parse_int(params, "pageSize")

    try:
        return ViewRequest(
            ordering=ordering,
            filter=spec,
            sort=sort,
            expand=expand,
            matrix_columns=tuple(matrix_columns) if matrix_columns else None,
            page=1 if page is None else page,
            page_size=DEFAULT_PAGE_SIZE if page_size is None else page_size,
        )
    except ValidationError as exc:
        raise _bad_request(str(exc)) from exc


def create_app(
    graph: OrgGraph | None = None,
    scan_dir: str | Path | None = None,
    providers: Sequence[MetaProvider] = (),
    ui_dir: str | Path | None = None,
) -> FastAPI:
    """Build the application around an optional initial snapshot.

    The three view trees are projected up front so request handling is
    lookup plus serialization.
    """
    state = AppState(
        graph=graph,
        scan_dir=Path(scan_dir) if scan_dir is not None else None,
        providers=tuple(providers),
    )
    if state.graph is not None:
        state.graph.warm()

    app = FastAPI(title="vulnex", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.vulnex = state

    @app.get("/api/views/{view}")
    def get_view(view: str, request: Request) -> Response:
        g = _require_graph(state)
        req = _parse_view_request(view, request)
        try:
            payload = build_view_response(g, req)
        except UnknownEntityError as exc:
            raise _bad_request(str(exc)) from exc
        return _json_response(payload)

    @app.get("/api/graph/{repository_id}")
    def get_graph(repository_id: str) -> Response:
        g = _require_graph(state)
        try:
            layered = g.dependency_graph_view(repository_id)
        except UnknownEntityError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        repo = g.repositories[repository_id]
        payload = {
            "repository": {"id": repo.id, "name": repo.name},
            "modules": [
                {"id": m, "name": g.modules[m].name, "parentModuleId": g.modules[m].parent_module_id}
                for m in layered.module_ids
            ],
            "libraries": [
                {
                    "digest": d,
                    "name": g.libraries[d].display_name,
                    "coordinates": g.libraries[d].coordinates,
                }
                for d in layered.library_digests
            ],
            "bugs": [_bug_obj(g, c) for c in layered.cve_ids],
            "edges": [{"from": a, "to": b} for a, b in layered.edges],
        }
        return _json_response(payload)

    @app.get("/api/matrix/defaults")
    def get_matrix_defaults() -> Response:
        g = _require_graph(state)
        return _json_response({"columns": list(default_matrix_columns(g, MATRIX_DEFAULT_COLUMNS))})

    @app.post("/api/reingest")
    async def reingest(request: Request) -> Response:
        body = await request.body()
        directory: Path | None = state.scan_dir
        if body:
            try:
                obj = json.loads(body)
            except ValueError:
                raise _bad_request("request body must be JSON") from None
            if not isinstance(obj, dict):
                raise _bad_request("request body must be a JSON object")
            if obj.get("directory") is not None:
                directory = Path(obj["directory"])
        if directory is None:
            raise _bad_request("no scan directory configured and none given")
        try:
            docs, report = ingest_directory(directory)
        except NotADirectoryError as exc:
            raise _bad_request(str(exc)) from exc
        try:
            rebuilt = build_graph(docs)
        except (GraphError, VulnexError) as exc:
            raise _bad_request(f"graph rebuild failed: {exc}") from exc
        if state.providers:
            rebuilt = enrich_graph(rebuilt, state.providers)
        rebuilt.warm()
        state.graph = rebuilt
        return _json_response(
            {
                "filesRead": report.files_read,
                "repositoriesLoaded": report.repositories_loaded,
                "rejected": [{"file": name, "reason": reason} for name, reason in report.rejected],
                "warnings": [
                    {"file": name, "message": message} for name, message in report.warnings
                ],
            }
        )

    ui_path = Path(ui_dir) if ui_dir is not None else _STATIC_DIR
    if ui_path.is_dir():
        app.mount("/", StaticFiles(directory=ui_path, html=True), name="ui")

    return app


def _bug_obj(g: OrgGraph, cve_id: str) -> dict[str, Any]:
    vuln = g.vulnerabilities[cve_id]
    obj: dict[str, Any] = {"cveId": cve_id, "severity": vuln.severity.value}
    if vuln.cvss_score is not None:
        obj["cvssScore"] = vuln.cvss_score
    return obj
