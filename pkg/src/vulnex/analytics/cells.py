"""Per-row display cells: severity histograms, score strips, and the
CVE presence matrix."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from vulnex.graph.orggraph import EntityRef, OrgGraph
from vulnex.graph.rowtree import RowNode
from vulnex.model import Severity


@dataclass(frozen=True)
class SeverityHistogram:
    """Distinct-CVE count per severity bucket for one entity."""

    low: int
    medium: int
    high: int
    critical: int
    unscored: int

    @property
    def scored_total(self) -> int:
        return self.low + self.medium + self.high + self.critical

    @property
    def total(self) -> int:
        return self.scored_total + self.unscored


@dataclass(frozen=True)
class StripEntry:
    cve_id: str
    score: float


@dataclass(frozen=True)
class ScoreStrip:
    """Individual scores of an entity's scored CVEs, ascending by score
    then CVE id.  Unscored CVEs (absent or 0.0) do not appear."""

    entries: tuple[StripEntry, ...]

    @property
    def min_score(self) -> float | None:
        return self.entries[0].score if self.entries else None

    @property
    def max_score(self) -> float | None:
        return self.entries[-1].score if self.entries else None


@dataclass(frozen=True)
class CveMatrix:
    """Boolean presence matrix: ``cells[i][j]`` is True iff row ``i``'s
    entity is exposed to column CVE ``j``."""

    columns: tuple[str, ...]
    rows: tuple[EntityRef, ...]
    cells: tuple[tuple[bool, ...], ...]


def severity_histogram(g: OrgGraph, ref: EntityRef) -> SeverityHistogram:
    counts = g.bucket_counts_of(ref)
    return SeverityHistogram(
        low=counts[Severity.LOW.rank],
        medium=counts[Severity.MEDIUM.rank],
        high=counts[Severity.HIGH.rank],
        critical=counts[Severity.CRITICAL.rank],
        unscored=counts[Severity.UNSCORED.rank],
    )


def score_strip(g: OrgGraph, ref: EntityRef) -> ScoreStrip:
    entries = []
    for cve_id in g.vulns_of(ref):
        vuln = g.vulnerabilities[cve_id]
        if vuln.severity is not Severity.UNSCORED:
            entries.append(StripEntry(cve_id=cve_id, score=vuln.cvss_score))
    entries.sort(key=lambda e: (e.score, e.cve_id))
    return ScoreStrip(entries=tuple(entries))


def default_matrix_columns(g: OrgGraph, k: int = 5) -> tuple[str, ...]:
    """The ``k`` most widespread CVEs: most affected repositories first,
    ties broken by higher CVSS, then CVE id."""
    ranked = sorted(
        g.vulnerabilities,
        key=lambda c: (-len(g.repos_affected_by(c)), -g.vulnerabilities[c].score_tenths, c),
    )
    return tuple(ranked[:k])


def cve_matrix(g: OrgGraph, rows: Sequence[EntityRef], columns: Sequence[str]) -> CveMatrix:
    """Presence matrix for the given rows and CVE columns.

    Unknown row entities or column CVEs raise UnknownEntityError.
    """
    cells = tuple(
        tuple(g.contains_cve(ref, cve_id) for cve_id in columns) for ref in rows
    )
    return CveMatrix(columns=tuple(columns), rows=tuple(rows), cells=cells)


def vuln_count(g: OrgGraph, ref: EntityRef) -> int:
    """Distinct CVEs reachable from the entity."""
    return g.vuln_count_of(ref)


def link_count(row: RowNode) -> int:
    """Child rows under this row in the current (possibly filtered) tree."""
    return len(row.children)
