"""Scan-result ingestion: the VSIF interchange format, directory loading,
and adapters for external report formats."""

from vulnex.ingest.adapters import adapt_external, registered_adapters
from vulnex.ingest.directory import IngestReport, ingest_directory
from vulnex.ingest.vsif import (
    FORMAT_VERSION,
    VSIF_EXTENSION,
    ScanDocument,
    canonicalize,
    parse_scan_file,
)

__all__ = [
    "FORMAT_VERSION",
    "VSIF_EXTENSION",
    "IngestReport",
    "ScanDocument",
    "adapt_external",
    "canonicalize",
    "ingest_directory",
    "parse_scan_file",
    "registered_adapters",
]
