"""Domain types, identifiers, and the CVSS severity classification.

All types here are immutable value objects; they are safe to share between
threads without coordination. Identifiers are opaque strings assigned at
ingest time -- display names are never used as keys, so renaming (e.g.
pseudonymization) cannot break referential integrity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from vulnex.errors import DomainError

CVE_ID_PATTERN = re.compile(r"^CVE-\d{4}-\d{4,}$")

LGTM_GRADES = ("A+", "A", "B", "C", "D", "E")


class Severity(str, Enum):
    """Severity buckets for CVSS scores.

    LOW..CRITICAL partition (0.0, 10.0]; UNSCORED covers absent scores and
    a score of exactly 0.0 (CVSS "None" semantics).
    """

    UNSCORED = "unscored"
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"

    @property
    def rank(self) -> int:
        """Position in the severity order UNSCORED < LOW < ... < CRITICAL."""
        return _SEVERITY_RANK[self]


_SEVERITY_RANK = {
    Severity.UNSCORED: 0,
    Severity.LOW: 1,
    Severity.MEDIUM: 2,
    Severity.HIGH: 3,
    Severity.CRITICAL: 4,
}

# Bucket colors follow the NVD-style scheme; the palette is configuration
# data so deployments can swap it without touching classification logic.
DEFAULT_PALETTE: Mapping[Severity, str] = {
    Severity.UNSCORED: "#B0B0B0",
    Severity.LOW: "#FFCB0D",
    Severity.MEDIUM: "#F9A009",
    Severity.HIGH: "#DF3D03",
    Severity.CRITICAL: "#8E0000",
}


def validate_score(score: float) -> float:
    """Check a raw CVSS score against [0.0, 10.0] and return it unchanged."""
    if not isinstance(score, (int, float)) or isinstance(score, bool):
        raise DomainError(f"CVSS score must be a number, got {type(score).__name__}")
    if not 0.0 <= score <= 10.0:
        raise DomainError(f"CVSS score {score!r} outside [0.0, 10.0]")
    return float(score)


def deciscore(score: float) -> int:
    """Round a score to one decimal and return it as an integer in tenths.

    All comparisons and bucket boundaries operate on tenths so that float
    representation noise can never move a score across a boundary.
    """
    validate_score(score)
    return round(score * 10)


def classify_severity(score: float | None) -> Severity:
    """Map an optional CVSS score to its severity bucket.

    Bucket membership is decided after rounding to one decimal place:
    0.1-3.9 low, 4.0-6.9 medium, 7.0-8.9 high, 9.0-10.0 critical.
    Absent scores and scores rounding to 0.0 are UNSCORED.
    """
    if score is None:
        return Severity.UNSCORED
    tenths = deciscore(score)
    if tenths == 0:
        return Severity.UNSCORED
    if tenths <= 39:
        return Severity.LOW
    if tenths <= 69:
        return Severity.MEDIUM
    if tenths <= 89:
        return Severity.HIGH
    return Severity.CRITICAL


def severity_color(severity: Severity, palette: Mapping[Severity, str] | None = None) -> str:
    """Return the display color token for a severity bucket."""
    return (palette or DEFAULT_PALETTE)[severity]


@dataclass(frozen=True)
class QualityMeta:
    """External quality metadata for a repository or library.

    Every field is independently optional; absence means the information is
    not available and must render as blank, never as zero.
    """

    lgtm_grade: str | None = None
    lgtm_score: float | None = None
    github_issues: int | None = None
    github_stars: int | None = None
    github_watchers: int | None = None

    def __post_init__(self) -> None:
        if self.lgtm_grade is not None and self.lgtm_grade not in LGTM_GRADES:
            raise DomainError(f"unknown quality grade {self.lgtm_grade!r}")
        for field_name in ("github_issues", "github_stars", "github_watchers"):
            value = getattr(self, field_name)
            if value is not None and (not isinstance(value, int) or value < 0):
                raise DomainError(f"{field_name} must be a non-negative integer")

    def is_empty(self) -> bool:
        return all(
            getattr(self, f) is None
            for f in ("lgtm_grade", "lgtm_score", "github_issues", "github_stars", "github_watchers")
        )

    def merged_under(self, other: "QualityMeta") -> "QualityMeta":
        """Fill this record's absent fields from ``other`` (self wins per field)."""
        return QualityMeta(
            lgtm_grade=self.lgtm_grade if self.lgtm_grade is not None else other.lgtm_grade,
            lgtm_score=self.lgtm_score if self.lgtm_score is not None else other.lgtm_score,
            github_issues=self.github_issues if self.github_issues is not None else other.github_issues,
            github_stars=self.github_stars if self.github_stars is not None else other.github_stars,
            github_watchers=self.github_watchers
            if self.github_watchers is not None
            else other.github_watchers,
        )


@dataclass(frozen=True)
class Repository:
    id: str
    name: str
    source_url: str | None = None
    meta: QualityMeta | None = None

    def __post_init__(self) -> None:
        if not self.id or "/" in self.id:
            # "/" is reserved for row-path addressing in the HTTP API
            raise DomainError(f"repository id must be non-empty and slash-free, got {self.id!r}")
        if not self.name:
            raise DomainError("repository name must be non-empty")


@dataclass(frozen=True)
class Module:
    id: str
    name: str
    repository_id: str
    parent_module_id: str | None = None

    def __post_init__(self) -> None:
        if not self.id or "/" in self.id:
            raise DomainError(f"module id must be non-empty and slash-free, got {self.id!r}")
        if not self.name:
            raise DomainError("module name must be non-empty")


@dataclass(frozen=True)
class Library:
    """A third-party dependency, identified globally by its content digest."""

    group: str
    artifact: str
    version: str
    digest: str
    meta: QualityMeta | None = None

    def __post_init__(self) -> None:
        if not self.artifact or not self.version:
            raise DomainError("library coordinates need a non-empty artifact and version")
        if not self.digest or "/" in self.digest:
            raise DomainError(f"library digest must be non-empty and slash-free, got {self.digest!r}")

    @property
    def coordinates(self) -> str:
        return f"{self.group}:{self.artifact}:{self.version}"

    @property
    def display_name(self) -> str:
        return self.artifact


@dataclass(frozen=True)
class Vulnerability:
    cve_id: str
    cvss_score: float | None = None
    cvss_vector: str | None = None
    description: str | None = None

    def __post_init__(self) -> None:
        if not CVE_ID_PATTERN.match(self.cve_id):
            raise DomainError(f"malformed CVE id {self.cve_id!r}")
        if self.cvss_score is not None:
            # store at one-decimal precision so serialization is exact
            object.__setattr__(self, "cvss_score", deciscore(self.cvss_score) / 10)

    @property
    def severity(self) -> Severity:
        return classify_severity(self.cvss_score)

    @property
    def score_tenths(self) -> int:
        """Score in tenths, or -1 when absent."""
        return -1 if self.cvss_score is None else deciscore(self.cvss_score)


@dataclass(frozen=True)
class DependsEdge:
    module_id: str
    library_digest: str


@dataclass(frozen=True)
class AffectsEdge:
    library_digest: str
    cve_id: str
    reachable: bool | None = None
