"""Bulk ingestion of a directory of VSIF scan files."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from vulnex.errors import VulnexError
from vulnex.ingest.vsif import VSIF_EXTENSION, ScanDocument, parse_scan_file


@dataclass(frozen=True)
class IngestReport:
    """Outcome summary for one directory ingestion run."""

    files_read: int
    repositories_loaded: int
    rejected: tuple[tuple[str, str], ...] = ()  # (file name, reason)
    warnings: tuple[tuple[str, str], ...] = field(default=(), compare=False)

    @property
    def ok(self) -> bool:
        return not self.rejected

    def summary_lines(self) -> list[str]:
        lines = [
            f"files read: {self.files_read}",
            f"repositories loaded: {self.repositories_loaded}",
            f"rejected: {len(self.rejected)}",
        ]
        lines += [f"  {name}: {reason}" for name, reason in self.rejected]
        lines += [f"warning: {name}: {message}" for name, message in self.warnings]
        return lines


def ingest_directory(path: str | Path) -> tuple[list[ScanDocument], IngestReport]:
    """Load every ``*.vulnex.json`` file under ``path`` (non-recursive).

    Files are visited in sorted name order.  A file that fails to parse
    or validate is recorded in the report and skipped; it never aborts
    the run.  A second file claiming an already-loaded repository id is
    rejected the same way, so the result never contains two documents
    for one repository.
    """
    root = Path(path)
    if not root.is_dir():
        raise NotADirectoryError(f"not a readable directory: {root}")

    docs: list[ScanDocument] = []
    rejected: list[tuple[str, str]] = []
    warnings: list[tuple[str, str]] = []
    seen_repos: dict[str, str] = {}

    names = sorted(p.name for p in root.iterdir() if p.name.endswith(VSIF_EXTENSION) and p.is_file())
    for name in names:
        try:
            doc = parse_scan_file((root / name).read_bytes(), source=name)
        except VulnexError as exc:
            rejected.append((name, str(exc)))
            continue
        repo_id = doc.repository.id
        if repo_id in seen_repos:
            rejected.append(
                (name, f"duplicate repository id '{repo_id}' (already loaded from {seen_repos[repo_id]})")
            )
            continue
        seen_repos[repo_id] = name
        warnings.extend((name, w) for w in doc.warnings)
        docs.append(doc)

    report = IngestReport(
        files_read=len(names),
        repositories_loaded=len(docs),
        rejected=tuple(rejected),
        warnings=tuple(warnings),
    )
    return docs, report
