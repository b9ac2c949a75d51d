"""Derived metrics over the organization graph: per-row cells, filtering,
sorting, and name pseudonymization."""

from vulnex.analytics.cells import (
    CveMatrix,
    ScoreStrip,
    SeverityHistogram,
    StripEntry,
    cve_matrix,
    default_matrix_columns,
    link_count,
    score_strip,
    severity_histogram,
    vuln_count,
)
from vulnex.analytics.filters import (
    FilterSpec,
    SortDirection,
    SortKey,
    SortSpec,
    apply_filters,
    default_direction,
    sort_rows,
)
from vulnex.analytics.pseudonyms import (
    pseudonymize,
    pseudonymize_documents,
    read_mapping,
    write_mapping,
)

__all__ = [
    "CveMatrix",
    "FilterSpec",
    "ScoreStrip",
    "SeverityHistogram",
    "SortDirection",
    "SortKey",
    "SortSpec",
    "StripEntry",
    "apply_filters",
    "cve_matrix",
    "default_direction",
    "default_matrix_columns",
    "link_count",
    "pseudonymize",
    "pseudonymize_documents",
    "read_mapping",
    "score_strip",
    "severity_histogram",
    "sort_rows",
    "vuln_count",
    "write_mapping",
]
