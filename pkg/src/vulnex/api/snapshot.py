"""Snapshot persistence: a bundle of canonical scan documents.

The snapshot file is ``{"formatVersion": "1", "documents": [...]}`` with
the same canonical conventions as single scan files (sorted keys, two
space indent, LF, trailing newline).  The graph and all its indexes are
rebuilt from the documents on load, so a snapshot stays valid across
library versions as long as the interchange format is understood.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from vulnex.errors import ParseError, ValidationError
from vulnex.ingest.vsif import (
    FORMAT_VERSION,
    ScanDocument,
    document_from_obj,
    iter_documents_obj,
)


def write_snapshot(docs: Iterable[ScanDocument], path: str | Path) -> None:
    payload = {"formatVersion": FORMAT_VERSION, "documents": iter_documents_obj(docs)}
    text = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def read_snapshot(path: str | Path) -> list[ScanDocument]:
    source = str(path)
    try:
        obj = json.loads(Path(path).read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    if not isinstance(obj, dict):
        raise ValidationError(f"{source}: snapshot must be a JSON object")
    if obj.get("formatVersion") != FORMAT_VERSION:
        raise ValidationError(
            f"{source}: unrecognized snapshot formatVersion {obj.get('formatVersion')!r}"
        )
    documents = obj.get("documents")
    if not isinstance(documents, list):
        raise ValidationError(f"{source}: snapshot field 'documents' must be an array")
    return [
        document_from_obj(entry, f"{source}: documents[{i}]") for i, entry in enumerate(documents)
    ]
