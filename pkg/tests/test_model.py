"""Severity classification, palette, and entity validation."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vulnex.errors import DomainError
from vulnex.model import (
    DEFAULT_PALETTE,
    LGTM_GRADES,
    QualityMeta,
    Library,
    Module,
    Repository,
    Severity,
    Vulnerability,
    classify_severity,
    deciscore,
    severity_color,
    validate_score,
)

BOUNDARIES = [
    (None, Severity.UNSCORED),
    (0.0, Severity.UNSCORED),
    (0.1, Severity.LOW),
    (3.9, Severity.LOW),
    (4.0, Severity.MEDIUM),
    (6.9, Severity.MEDIUM),
    (7.0, Severity.HIGH),
    (8.9, Severity.HIGH),
    (9.0, Severity.CRITICAL),
    (10.0, Severity.CRITICAL),
]


@pytest.mark.parametrize("score, expected", BOUNDARIES)
def test_boundary_classification(score, expected):
    assert classify_severity(score) is expected


def test_rounding_decides_bucket():
    # values straddling a boundary land by their one-decimal rounding
    assert classify_severity(3.94) is Severity.LOW
    assert classify_severity(3.96) is Severity.MEDIUM
    assert classify_severity(0.04) is Severity.UNSCORED
    assert classify_severity(8.96) is Severity.CRITICAL  # 8.96 rounds to 9.0


@given(st.floats(min_value=0.0, max_value=10.0, allow_nan=False))
def test_classification_total_and_monotone(score):
    severity = classify_severity(score)
    assert severity in set(Severity)
    # a strictly higher deciscore never yields a lower bucket
    higher = min(10.0, (deciscore(score) + 1) / 10)
    assert classify_severity(higher).rank >= severity.rank


@given(st.floats(min_value=0.0, max_value=10.0, allow_nan=False))
def test_deciscore_one_decimal(score):
    tenths = deciscore(score)
    assert 0 <= tenths <= 100
    assert abs(tenths / 10 - score) <= 0.05 + 1e-9


def test_score_validation_rejects_junk():
    for bad in ("7", True, None, [7]):
        with pytest.raises(DomainError):
            validate_score(bad)
    for bad in (-0.1, 10.1, 1e9):
        with pytest.raises(DomainError):
            validate_score(bad)
    assert validate_score(0) == 0.0
    assert validate_score(10) == 10.0


def test_palette_covers_every_bucket_with_distinct_colors():
    colors = [severity_color(s) for s in Severity]
    assert len(set(colors)) == len(list(Severity))
    assert severity_color(Severity.CRITICAL) == DEFAULT_PALETTE[Severity.CRITICAL]
    custom = {s: f"#{i:06x}" for i, s in enumerate(Severity)}
    assert severity_color(Severity.LOW, custom) == custom[Severity.LOW]


def test_vulnerability_normalizes_score_to_one_decimal():
    vuln = Vulnerability(cve_id="CVE-2020-1234", cvss_score=7.25)
    assert vuln.cvss_score in (7.2, 7.3)  # one decimal, deterministic rounding
    assert vuln.score_tenths == round(vuln.cvss_score * 10)
    assert Vulnerability(cve_id="CVE-2020-1234").score_tenths == -1


def test_vulnerability_rejects_malformed_ids():
    for bad in ("cve-2020-1234", "CVE-20-1234", "CVE-2020-12", "2020-1234", ""):
        with pytest.raises(DomainError):
            Vulnerability(cve_id=bad)
    Vulnerability(cve_id="CVE-2020-123456")  # long suffixes are fine


def test_entity_id_rules():
    with pytest.raises(DomainError):
        Repository(id="", name="x")
    with pytest.raises(DomainError):
        Repository(id="a/b", name="x")
    with pytest.raises(DomainError):
        Module(id="m/1", name="m", repository_id="r")
    with pytest.raises(DomainError):
        Library(group="g", artifact="a", version="1", digest="d/1")
    lib = Library(group="g", artifact="a", version="1", digest="abc")
    assert lib.coordinates == "g:a:1"
    assert lib.display_name == "a"


def test_quality_meta_validation_and_merge():
    with pytest.raises(DomainError):
        QualityMeta(lgtm_grade="F")
    with pytest.raises(DomainError):
        QualityMeta(github_stars=-1)
    assert QualityMeta().is_empty()
    assert set(LGTM_GRADES) >= {"A+", "E"}

    ours = QualityMeta(lgtm_grade="A", github_stars=10)
    theirs = QualityMeta(lgtm_grade="B", github_issues=5)
    merged = ours.merged_under(theirs)
    assert merged.lgtm_grade == "A"  # existing fields win
    assert merged.github_stars == 10
    assert merged.github_issues == 5  # gaps filled
