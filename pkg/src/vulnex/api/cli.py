"""Command line: ingest scans into a snapshot, print reports, serve the API.

Environment variables with the VULNEX_ prefix override option defaults;
each option's envvar is noted in its help text.
"""

from __future__ import annotations

import csv
import io
import json
import socket
import sys
from pathlib import Path

import click

from vulnex.analytics.filters import (
    FilterSpec,
    SortDirection,
    SortKey,
    SortSpec,
    default_direction,
)
from vulnex.analytics.pseudonyms import pseudonymize_documents, write_mapping
from vulnex.api.app import create_app
from vulnex.api.snapshot import read_snapshot, write_snapshot
from vulnex.api.views import ViewRequest, build_view_response, iter_flat_rows
from vulnex.enrich.providers import FixtureMetaProvider
from vulnex.errors import VulnexError
from vulnex.graph.orggraph import build_graph
from vulnex.graph.rowtree import Ordering
from vulnex.ingest.directory import ingest_directory

DEFAULT_SNAPSHOT = "vulnex-snapshot.json"
DEFAULT_PORT = 8480

_VIEW_NAMES = {
    "repo": Ordering.REPOSITORY_CENTERED,
    "lib": Ordering.LIBRARY_CENTERED,
    "bug": Ordering.BUG_CENTERED,
}

CSV_COLUMNS = [
    "view",
    "depth",
    "kind",
    "id",
    "name",
    "linkCount",
    "vulnCount",
    "dependencyCount",
    "maxCvss",
    "severity",
    "low",
    "medium",
    "high",
    "critical",
    "unscored",
]


@click.group()
@click.version_option(package_name="vulnex")
def main() -> None:
    """Organization-wide open-source vulnerability audit."""


@main.command()
@click.argument("directory", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--pseudonymize", "pseudonymize_names", is_flag=True, help="Replace repository and module names with seeded pseudonyms.")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for pseudonym assignment.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=DEFAULT_SNAPSHOT, show_default=True, envvar="VULNEX_SNAPSHOT", help="Snapshot file to write [env: VULNEX_SNAPSHOT].")
@click.option("--mapping-out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Name-mapping file (defaults to <out>.names.txt).")
def ingest(directory: Path, pseudonymize_names: bool, seed: int, out: Path, mapping_out: Path | None) -> None:
    """Load every scan file in DIRECTORY and write a snapshot.

    Exit status: 0 on a clean run, 1 when files were rejected or the
    merge failed, 2 on unusable arguments.
    """
    docs, report = ingest_directory(directory)
    for line in report.summary_lines():
        click.echo(line)
    if report.files_read == 0:
        click.echo("error: no scan files found", err=True)
        sys.exit(1)
    try:
        build_graph(docs)  # validate the merge before persisting anything
    except VulnexError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    if pseudonymize_names:
        try:
            docs, mapping = pseudonymize_documents(docs, seed)
        except VulnexError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        mapping_path = mapping_out if mapping_out is not None else Path(f"{out}.names.txt")
        write_mapping(mapping, mapping_path)
        click.echo(f"name mapping written to {mapping_path}")
    write_snapshot(docs, out)
    click.echo(f"snapshot written to {out}")
    if report.rejected:
        sys.exit(1)


@main.command()
@click.option("--view", "view_name", type=click.Choice(sorted(_VIEW_NAMES)), required=True, help="Which audit view to report.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--snapshot", type=click.Path(path_type=Path), default=DEFAULT_SNAPSHOT, show_default=True, envvar="VULNEX_SNAPSHOT", help="Snapshot file to read [env: VULNEX_SNAPSHOT].")
@click.option("--name-query", default=None)
@click.option("--min-cvss", type=float, default=None)
@click.option("--max-cvss", type=float, default=None)
@click.option("--min-dependencies", type=int, default=None)
@click.option("--max-dependencies", type=int, default=None)
@click.option("--min-vulnerabilities", type=int, default=None)
@click.option("--max-vulnerabilities", type=int, default=None)
@click.option("--hide-vulnerability-free", is_flag=True)
@click.option("--hide-unscored-cves", is_flag=True)
@click.option("--sort-key", type=click.Choice([k.value for k in SortKey]), default=None)
@click.option("--sort-direction", type=click.Choice([d.value for d in SortDirection]), default=None)
@click.option("--full", "full_depth", is_flag=True, help="Emit the whole tree instead of top-level rows.")
def report(
    view_name: str,
    fmt: str,
    snapshot: Path,
    name_query: str | None,
    min_cvss: float | None,
    max_cvss: float | None,
    min_dependencies: int | None,
    max_dependencies: int | None,
    min_vulnerabilities: int | None,
    max_vulnerabilities: int | None,
    hide_vulnerability_free: bool,
    hide_unscored_cves: bool,
    sort_key: str | None,
    sort_direction: str | None,
    full_depth: bool,
) -> None:
    """Print one audit view from a snapshot.

    Exit status: 0 on success, 1 for invalid filter or sort values,
    2 when the snapshot is missing or unreadable.
    """
    if not snapshot.is_file():
        click.echo(f"error: snapshot not found: {snapshot}", err=True)
        sys.exit(2)
    try:
        docs = read_snapshot(snapshot)
        g = build_graph(docs)
    except VulnexError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)

    if sort_direction is not None and sort_key is None:
        click.echo("error: --sort-direction requires --sort-key", err=True)
        sys.exit(1)
    sort = None
    if sort_key is not None:
        key = SortKey(sort_key)
        direction = SortDirection(sort_direction) if sort_direction else default_direction(key)
        sort = SortSpec(key=key, direction=direction)
    try:
        spec = FilterSpec(
            name_query=name_query,
            min_cvss=min_cvss,
            max_cvss=max_cvss,
            min_dependencies=min_dependencies,
            max_dependencies=max_dependencies,
            min_vulnerabilities=min_vulnerabilities,
            max_vulnerabilities=max_vulnerabilities,
            hide_vulnerability_free=hide_vulnerability_free,
            hide_unscored=hide_unscored_cves,
        )
        payload = build_view_response(
            g,
            ViewRequest(
                ordering=_VIEW_NAMES[view_name],
                filter=spec,
                sort=sort,
                page_size=None,
                expand_all=full_depth,
            ),
        )
    except VulnexError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    if fmt == "json":
        click.echo(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        click.echo(_to_csv(payload), nl=False)


def _to_csv(payload: dict) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for depth, row in iter_flat_rows(payload["rows"]):
        hist = row.get("histogram", {})
        writer.writerow(
            {
                "view": payload["view"],
                "depth": depth,
                "kind": row["kind"],
                "id": row["id"],
                "name": row["name"],
                "linkCount": row["linkCount"],
                "vulnCount": row.get("vulnCount", ""),
                "dependencyCount": row.get("dependencyCount", ""),
                "maxCvss": row.get("maxCvss", ""),
                "severity": row["severity"],
                "low": hist.get("low", ""),
                "medium": hist.get("medium", ""),
                "high": hist.get("high", ""),
                "critical": hist.get("critical", ""),
                "unscored": hist.get("unscored", ""),
            }
        )
    return buffer.getvalue()


@main.command()
@click.option("--port", type=int, default=DEFAULT_PORT, show_default=True, envvar="VULNEX_PORT", help="Listen port [env: VULNEX_PORT].")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--graph", "graph_path", type=click.Path(path_type=Path), default=DEFAULT_SNAPSHOT, show_default=True, envvar="VULNEX_SNAPSHOT", help="Snapshot bundle to serve [env: VULNEX_SNAPSHOT].")
@click.option("--scan-dir", type=click.Path(file_okay=False, path_type=Path), default=None, envvar="VULNEX_SCAN_DIR", help="Directory for POST /api/reingest [env: VULNEX_SCAN_DIR].")
@click.option("--meta-fixtures", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None, help="Recorded metadata fixture file to enrich from.")
@click.option("--ui-dir", type=click.Path(file_okay=False, path_type=Path), default=None, help="Directory of built UI assets to serve at /.")
def serve(
    port: int,
    host: str,
    graph_path: Path,
    scan_dir: Path | None,
    meta_fixtures: Path | None,
    ui_dir: Path | None,
) -> None:
    """Serve the HTTP API (and static UI) on the given port.

    Exit status: 2 when the port is already in use or the snapshot is
    unreadable.
    """
    import uvicorn

    providers = ()
    if meta_fixtures is not None:
        providers = (FixtureMetaProvider(meta_fixtures),)

    graph = None
    if graph_path.is_file():
        try:
            docs = read_snapshot(graph_path)
            graph = build_graph(docs)
        except VulnexError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        if providers:
            from vulnex.enrich.enricher import enrich_graph

            graph = enrich_graph(graph, providers)
    elif scan_dir is None:
        click.echo(f"note: snapshot {graph_path} not found; starting empty", err=True)

    if graph is None and scan_dir is not None:
        try:
            docs, _report = ingest_directory(scan_dir)
            graph = build_graph(docs)
        except (VulnexError, NotADirectoryError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError:
        click.echo(f"error: port {port} on {host} is already in use", err=True)
        sys.exit(2)
    finally:
        probe.close()

    app = create_app(graph=graph, scan_dir=scan_dir, providers=providers, ui_dir=ui_dir)
    click.echo(f"serving on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
