"""Adapters that convert external scanner exports into scan documents.

Each adapter takes the raw text of a foreign report and produces a
validated ScanDocument.  Adapters are looked up by a short format id;
the only built-in one understands the dependency-analysis export
subset described in docs/vsif.md ("steady").
"""

from __future__ import annotations

import json
from typing import Any, Callable

from vulnex.errors import AdapterError, ParseError, ValidationError
from vulnex.ingest.vsif import FORMAT_VERSION, ScanDocument, document_from_obj

_DEFAULT_TIMESTAMP = "1970-01-01T00:00:00Z"

Adapter = Callable[[str, str], ScanDocument]


def adapt_external(format_id: str, content: str, source: str = "<export>") -> ScanDocument:
    """Convert an external report to a ScanDocument.

    Unknown format ids raise AdapterError listing the registered ones.
    Structural problems in the export (missing fields, wrong types)
    also surface as AdapterError, naming the offending field path.
    """
    try:
        adapter = _ADAPTERS[format_id]
    except KeyError:
        known = ", ".join(sorted(_ADAPTERS))
        raise AdapterError(f"unknown adapter '{format_id}' (registered: {known})") from None
    return adapter(content, source)


def registered_adapters() -> tuple[str, ...]:
    return tuple(sorted(_ADAPTERS))


def _get(obj: Any, key: str, path: str) -> Any:
    if not isinstance(obj, dict):
        raise AdapterError(f"{path}: expected an object")
    if key not in obj:
        raise AdapterError(f"{path}: missing required field '{key}'")
    return obj[key]


def _adapt_steady(content: str, source: str) -> ScanDocument:
    """Adapter for the application-level export of the open-source
    dependency analysis tooling: app coordinates, a dependency list with
    SHA-1 digests, and per-dependency CVE findings."""
    try:
        obj = json.loads(content)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc

    app = _get(obj, "app", source)
    group = _get(app, "groupId", f"{source}: app")
    artifact = _get(app, "artifactId", f"{source}: app")
    version = _get(app, "version", f"{source}: app")
    for label, value in (("groupId", group), ("artifactId", artifact), ("version", version)):
        if not isinstance(value, str) or not value:
            raise AdapterError(f"{source}: app.{label} must be a non-empty string")

    repo_id = f"{group}:{artifact}"
    module_id = f"{repo_id}:{version}"
    timestamp = obj.get("lastScan", _DEFAULT_TIMESTAMP)

    libraries: list[dict[str, Any]] = []
    vulns: dict[str, dict[str, Any]] = {}
    dependencies: list[dict[str, Any]] = []
    affects: list[dict[str, Any]] = []
    seen_digests: set[str] = set()

    deps = _get(obj, "dependencies", source)
    if not isinstance(deps, list):
        raise AdapterError(f"{source}: dependencies must be an array")
    for i, dep in enumerate(deps):
        dep_path = f"{source}: dependencies[{i}]"
        lib = _get(dep, "lib", dep_path)
        digest = _get(lib, "digest", f"{dep_path}.lib")
        coords = _get(lib, "libraryId", f"{dep_path}.lib")
        if not isinstance(digest, str) or not digest:
            raise AdapterError(f"{dep_path}.lib.digest must be a non-empty string")
        if digest in seen_digests:
            raise AdapterError(f"{dep_path}: duplicate library digest '{digest}'")
        seen_digests.add(digest)
        libraries.append(
            {
                "group": _get(coords, "group", f"{dep_path}.lib.libraryId"),
                "artifact": _get(coords, "artifact", f"{dep_path}.lib.libraryId"),
                "version": _get(coords, "version", f"{dep_path}.lib.libraryId"),
                "digest": digest,
            }
        )
        dependencies.append({"moduleId": module_id, "libraryDigest": digest})
        findings = dep.get("vulnerabilities", [])
        if not isinstance(findings, list):
            raise AdapterError(f"{dep_path}: vulnerabilities must be an array")
        for j, finding in enumerate(findings):
            f_path = f"{dep_path}.vulnerabilities[{j}]"
            cve_id = _get(finding, "bug", f_path)
            if not isinstance(cve_id, str):
                raise AdapterError(f"{f_path}.bug must be a string")
            entry = {"cveId": cve_id}
            if finding.get("cvssScore") is not None:
                entry["cvssScore"] = finding["cvssScore"]
            if finding.get("cvssVector") is not None:
                entry["cvssVector"] = finding["cvssVector"]
            if finding.get("description") is not None:
                entry["description"] = finding["description"]
            # first occurrence wins when the same bug shows up under
            # several dependencies
            vulns.setdefault(cve_id, entry)
            affects.append({"libraryDigest": digest, "cveId": cve_id})

    vsif_obj = {
        "formatVersion": FORMAT_VERSION,
        "scanTimestamp": timestamp,
        "repository": {"id": repo_id, "name": artifact},
        "modules": [{"id": module_id, "name": artifact}],
        "libraries": libraries,
        "vulnerabilities": list(vulns.values()),
        "dependencies": dependencies,
        "affects": affects,
    }
    try:
        return document_from_obj(vsif_obj, source)
    except ValidationError as exc:
        raise AdapterError(f"{source}: converted document invalid: {exc}") from exc


_ADAPTERS: dict[str, Adapter] = {"steady": _adapt_steady}
