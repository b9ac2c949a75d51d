"""Exception hierarchy shared across the package."""

from __future__ import annotations


class VulnexError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(VulnexError, ValueError):
    """A value violates a domain invariant (e.g. CVSS score out of range)."""


class ParseError(VulnexError, ValueError):
    """Scan file content is not syntactically valid.

    Carries the source position when the underlying parser provides one.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(VulnexError, ValueError):
    """Scan file content is syntactically valid but violates the schema."""


class AdapterError(VulnexError, ValueError):
    """An external-format adapter is unknown or its input is unmappable."""


class GraphError(VulnexError, ValueError):
    """Scan documents cannot be combined into a consistent graph."""


class UnknownEntityError(VulnexError, KeyError):
    """A query referenced a repository, module, library, or CVE not in the graph."""


class CapacityError(VulnexError, ValueError):
    """A deterministic resource pool (e.g. pseudonym word lists) is exhausted."""
