"""VulnEx Scan Interchange Format (VSIF) reading, validation, and
canonical serialization.

A VSIF file is a UTF-8 JSON document describing one repository scan:
its module hierarchy, the open-source libraries each module depends
on, and the known vulnerabilities affecting those libraries.  The
canonical form is deterministic byte-for-byte; see docs/vsif.md for
the full field reference.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Iterable, Mapping

from vulnex.errors import ParseError, ValidationError
from vulnex.model import (
    AffectsEdge,
    DependsEdge,
    DomainError,
    Library,
    Module,
    QualityMeta,
    Repository,
    Vulnerability,
)

FORMAT_VERSION = "1"
VSIF_EXTENSION = ".vulnex.json"

_META_KEYS = {
    "lgtmGrade": "lgtm_grade",
    "lgtmScore": "lgtm_score",
    "githubIssues": "github_issues",
    "githubStars": "github_stars",
    "githubWatchers": "github_watchers",
}
_REPO_KEYS = {"id", "name", "sourceUrl", "meta"}
_MODULE_KEYS = {"id", "name", "parentModuleId"}
_LIBRARY_KEYS = {"group", "artifact", "version", "digest", "meta"}
_VULN_KEYS = {"cveId", "cvssScore", "cvssVector", "description"}
_DEP_KEYS = {"moduleId", "libraryDigest"}
_AFFECTS_KEYS = {"libraryDigest", "cveId", "reachable"}
_TOP_KEYS = {
    "formatVersion",
    "repository",
    "modules",
    "dependencies",
    "libraries",
    "vulnerabilities",
    "affects",
    "scanTimestamp",
}


@dataclass(frozen=True)
class ScanDocument:
    """One validated repository scan.

    Entity tuples are kept in canonical order (sorted by identifier) so
    that two documents with the same content compare equal regardless of
    the ordering in the source file.  ``warnings`` records non-fatal
    oddities found during parsing and is excluded from equality.
    """

    repository: Repository
    modules: tuple[Module, ...]
    libraries: tuple[Library, ...]
    vulnerabilities: tuple[Vulnerability, ...]
    dependencies: tuple[DependsEdge, ...]
    affects: tuple[AffectsEdge, ...]
    scan_timestamp: str
    format_version: str = FORMAT_VERSION
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "modules", tuple(sorted(self.modules, key=lambda m: m.id)))
        object.__setattr__(self, "libraries", tuple(sorted(self.libraries, key=lambda l: l.digest)))
        object.__setattr__(
            self, "vulnerabilities", tuple(sorted(self.vulnerabilities, key=lambda v: v.cve_id))
        )
        object.__setattr__(
            self,
            "dependencies",
            tuple(sorted(self.dependencies, key=lambda d: (d.module_id, d.library_digest))),
        )
        object.__setattr__(
            self,
            "affects",
            tuple(sorted(self.affects, key=lambda a: (a.library_digest, a.cve_id))),
        )


def parse_scan_file(content: str | bytes, source: str = "<scan>") -> ScanDocument:
    """Parse and validate one VSIF document.

    Raises ParseError for malformed JSON (with line/column) and
    ValidationError for well-formed JSON that violates the format:
    unknown format version, missing required fields, duplicate
    identifiers, or edges naming undeclared entities.
    """
    if isinstance(content, bytes):
        try:
            content = content.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"{source}: not valid UTF-8 ({exc.reason})") from exc
    try:
        obj = json.loads(content)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    return document_from_obj(obj, source)


def document_from_obj(obj: Any, source: str = "<scan>") -> ScanDocument:
    """Validate an already-decoded JSON object as a VSIF document."""
    if not isinstance(obj, dict):
        raise ValidationError(f"{source}: top level must be a JSON object")
    warnings: list[str] = []
    _warn_unknown(obj, _TOP_KEYS, source, warnings)

    version = _require(obj, "formatVersion", source)
    if version != FORMAT_VERSION:
        raise ValidationError(
            f"{source}: unrecognized formatVersion {version!r} (supported: {FORMAT_VERSION!r})"
        )

    ts = _require(obj, "scanTimestamp", source)
    if not isinstance(ts, str):
        raise ValidationError(f"{source}: scanTimestamp must be a string")
    _check_timestamp(ts, source)

    repo = _parse_repository(_require(obj, "repository", source), source, warnings)
    modules = _parse_modules(_require(obj, "modules", source), repo.id, source, warnings)
    libraries = _parse_libraries(_require(obj, "libraries", source), source, warnings)
    vulns = _parse_vulnerabilities(_require(obj, "vulnerabilities", source), source, warnings)
    deps = _parse_dependencies(
        _require(obj, "dependencies", source),
        {m.id for m in modules},
        {l.digest for l in libraries},
        source,
        warnings,
    )
    affects = _parse_affects(
        _require(obj, "affects", source),
        {l.digest for l in libraries},
        {v.cve_id for v in vulns},
        source,
        warnings,
    )
    return ScanDocument(
        repository=repo,
        modules=modules,
        libraries=libraries,
        vulnerabilities=vulns,
        dependencies=deps,
        affects=affects,
        scan_timestamp=ts,
        format_version=version,
        warnings=tuple(warnings),
    )


def document_to_obj(doc: ScanDocument) -> dict[str, Any]:
    """Render a document as a JSON-ready dict in canonical entity order.

    Optional fields that are absent are omitted rather than emitted as
    null, so the output is stable under parse/serialize round trips.
    """
    out: dict[str, Any] = {
        "formatVersion": doc.format_version,
        "scanTimestamp": doc.scan_timestamp,
        "repository": _repo_obj(doc.repository),
        "modules": [_module_obj(m) for m in doc.modules],
        "libraries": [_library_obj(l) for l in doc.libraries],
        "vulnerabilities": [_vuln_obj(v) for v in doc.vulnerabilities],
        "dependencies": [
            {"moduleId": d.module_id, "libraryDigest": d.library_digest} for d in doc.dependencies
        ],
        "affects": [_affects_obj(a) for a in doc.affects],
    }
    return out


def canonicalize(doc: ScanDocument) -> str:
    """Serialize to the canonical text form: sorted keys, two-space
    indentation, entity lists sorted by identifier, scores with exactly
    one decimal place, trailing newline.  Canonicalizing twice yields
    identical bytes."""
    return json.dumps(document_to_obj(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -- field helpers ----------------------------------------------------------


def _require(obj: Mapping[str, Any], key: str, path: str) -> Any:
    if key not in obj:
        raise ValidationError(f"{path}: missing required field '{key}'")
    return obj[key]


def _require_str(obj: Mapping[str, Any], key: str, path: str) -> str:
    value = _require(obj, key, path)
    if not isinstance(value, str):
        raise ValidationError(f"{path}: field '{key}' must be a string")
    return value


def _require_list(value: Any, what: str, path: str) -> list[Any]:
    if not isinstance(value, list):
        raise ValidationError(f"{path}: {what} must be an array")
    return value


def _warn_unknown(obj: Mapping[str, Any], known: set[str], path: str, warnings: list[str]) -> None:
    for key in sorted(set(obj) - known):
        warnings.append(f"{path}: ignored unknown field '{key}'")


def _check_timestamp(ts: str, source: str) -> None:
    try:
        datetime.fromisoformat(ts.replace("Z", "+00:00"))
    except ValueError:
        raise ValidationError(f"{source}: scanTimestamp {ts!r} is not an ISO-8601 timestamp") from None


def _parse_meta(value: Any, path: str, warnings: list[str]) -> QualityMeta | None:
    if value is None:
        return None
    if not isinstance(value, dict):
        raise ValidationError(f"{path}: meta must be an object")
    _warn_unknown(value, set(_META_KEYS), path + ".meta", warnings)
    kwargs = {attr: value.get(key) for key, attr in _META_KEYS.items()}
    try:
        meta = QualityMeta(**kwargs)
    except DomainError as exc:
        raise ValidationError(f"{path}.meta: {exc}") from exc
    return None if meta.is_empty() else meta


def _parse_repository(value: Any, source: str, warnings: list[str]) -> Repository:
    if not isinstance(value, dict):
        raise ValidationError(f"{source}: repository must be an object")
    path = f"{source}: repository"
    _warn_unknown(value, _REPO_KEYS, path, warnings)
    try:
        return Repository(
            id=_require_str(value, "id", path),
            name=_require_str(value, "name", path),
            source_url=value.get("sourceUrl"),
            meta=_parse_meta(value.get("meta"), path, warnings),
        )
    except DomainError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def _parse_modules(
    value: Any, repository_id: str, source: str, warnings: list[str]
) -> tuple[Module, ...]:
    modules: list[Module] = []
    seen: set[str] = set()
    for i, entry in enumerate(_require_list(value, "modules", source)):
        path = f"{source}: modules[{i}]"
        if not isinstance(entry, dict):
            raise ValidationError(f"{path}: must be an object")
        _warn_unknown(entry, _MODULE_KEYS, path, warnings)
        try:
            module = Module(
                id=_require_str(entry, "id", path),
                name=_require_str(entry, "name", path),
                repository_id=repository_id,
                parent_module_id=entry.get("parentModuleId"),
            )
        except DomainError as exc:
            raise ValidationError(f"{path}: {exc}") from exc
        if module.id in seen:
            raise ValidationError(f"{path}: duplicate module id '{module.id}'")
        seen.add(module.id)
        modules.append(module)
    by_id = {m.id: m for m in modules}
    for module in modules:
        _check_parent_chain(module, by_id, source)
    return tuple(modules)


def _check_parent_chain(module: Module, by_id: Mapping[str, Module], source: str) -> None:
    visited = {module.id}
    current = module
    while current.parent_module_id is not None:
        parent_id = current.parent_module_id
        if parent_id not in by_id:
            raise ValidationError(
                f"{source}: module '{current.id}' names unknown parent module '{parent_id}'"
            )
        if parent_id in visited:
            raise ValidationError(f"{source}: module parent chain contains a cycle at '{parent_id}'")
        visited.add(parent_id)
        current = by_id[parent_id]


def _parse_libraries(value: Any, source: str, warnings: list[str]) -> tuple[Library, ...]:
    libraries: list[Library] = []
    seen: set[str] = set()
    for i, entry in enumerate(_require_list(value, "libraries", source)):
        path = f"{source}: libraries[{i}]"
        if not isinstance(entry, dict):
            raise ValidationError(f"{path}: must be an object")
        _warn_unknown(entry, _LIBRARY_KEYS, path, warnings)
        try:
            lib = Library(
                group=_require_str(entry, "group", path),
                artifact=_require_str(entry, "artifact", path),
                version=_require_str(entry, "version", path),
                digest=_require_str(entry, "digest", path),
                meta=_parse_meta(entry.get("meta"), path, warnings),
            )
        except DomainError as exc:
            raise ValidationError(f"{path}: {exc}") from exc
        if lib.digest in seen:
            raise ValidationError(f"{path}: duplicate library digest '{lib.digest}'")
        seen.add(lib.digest)
        libraries.append(lib)
    return tuple(libraries)


def _parse_vulnerabilities(value: Any, source: str, warnings: list[str]) -> tuple[Vulnerability, ...]:
    vulns: list[Vulnerability] = []
    seen: set[str] = set()
    for i, entry in enumerate(_require_list(value, "vulnerabilities", source)):
        path = f"{source}: vulnerabilities[{i}]"
        if not isinstance(entry, dict):
            raise ValidationError(f"{path}: must be an object")
        _warn_unknown(entry, _VULN_KEYS, path, warnings)
        cve_id = _require_str(entry, "cveId", path)
        score = entry.get("cvssScore")
        try:
            vuln = Vulnerability(
                cve_id=cve_id,
                cvss_score=score,
                cvss_vector=entry.get("cvssVector"),
                description=entry.get("description"),
            )
        except DomainError as exc:
            raise ValidationError(f"{path}: {exc}") from exc
        if vuln.cve_id in seen:
            raise ValidationError(f"{path}: duplicate vulnerability id '{vuln.cve_id}'")
        seen.add(vuln.cve_id)
        vulns.append(vuln)
    return tuple(vulns)


def _parse_dependencies(
    value: Any,
    module_ids: set[str],
    digests: set[str],
    source: str,
    warnings: list[str],
) -> tuple[DependsEdge, ...]:
    edges: list[DependsEdge] = []
    seen: set[tuple[str, str]] = set()
    for i, entry in enumerate(_require_list(value, "dependencies", source)):
        path = f"{source}: dependencies[{i}]"
        if not isinstance(entry, dict):
            raise ValidationError(f"{path}: must be an object")
        _warn_unknown(entry, _DEP_KEYS, path, warnings)
        module_id = _require_str(entry, "moduleId", path)
        digest = _require_str(entry, "libraryDigest", path)
        if module_id not in module_ids:
            raise ValidationError(f"{path}: unknown module id '{module_id}'")
        if digest not in digests:
            raise ValidationError(f"{path}: unknown library digest '{digest}'")
        key = (module_id, digest)
        if key in seen:
            warnings.append(f"{path}: duplicate dependency edge {module_id} -> {digest}")
            continue
        seen.add(key)
        edges.append(DependsEdge(module_id=module_id, library_digest=digest))
    return tuple(edges)


def _parse_affects(
    value: Any,
    digests: set[str],
    cve_ids: set[str],
    source: str,
    warnings: list[str],
) -> tuple[AffectsEdge, ...]:
    edges: list[AffectsEdge] = []
    seen: set[tuple[str, str]] = set()
    for i, entry in enumerate(_require_list(value, "affects", source)):
        path = f"{source}: affects[{i}]"
        if not isinstance(entry, dict):
            raise ValidationError(f"{path}: must be an object")
        _warn_unknown(entry, _AFFECTS_KEYS, path, warnings)
        digest = _require_str(entry, "libraryDigest", path)
        cve_id = _require_str(entry, "cveId", path)
        if digest not in digests:
            raise ValidationError(f"{path}: unknown library digest '{digest}'")
        if cve_id not in cve_ids:
            raise ValidationError(f"{path}: unknown CVE id '{cve_id}'")
        reachable = entry.get("reachable")
        if reachable is not None and not isinstance(reachable, bool):
            raise ValidationError(f"{path}: field 'reachable' must be a boolean")
        key = (digest, cve_id)
        if key in seen:
            warnings.append(f"{path}: duplicate affects edge {digest} -> {cve_id}")
            continue
        seen.add(key)
        edges.append(AffectsEdge(library_digest=digest, cve_id=cve_id, reachable=reachable))
    return tuple(edges)


# -- serialization helpers --------------------------------------------------


def _meta_obj(meta: QualityMeta | None) -> dict[str, Any] | None:
    if meta is None:
        return None
    out = {key: getattr(meta, attr) for key, attr in _META_KEYS.items()}
    return {k: v for k, v in out.items() if v is not None}


def _repo_obj(repo: Repository) -> dict[str, Any]:
    out: dict[str, Any] = {"id": repo.id, "name": repo.name}
    if repo.source_url is not None:
        out["sourceUrl"] = repo.source_url
    meta = _meta_obj(repo.meta)
    if meta:
        out["meta"] = meta
    return out


def _module_obj(module: Module) -> dict[str, Any]:
    out: dict[str, Any] = {"id": module.id, "name": module.name}
    if module.parent_module_id is not None:
        out["parentModuleId"] = module.parent_module_id
    return out


def _library_obj(lib: Library) -> dict[str, Any]:
    out: dict[str, Any] = {
        "group": lib.group,
        "artifact": lib.artifact,
        "version": lib.version,
        "digest": lib.digest,
    }
    meta = _meta_obj(lib.meta)
    if meta:
        out["meta"] = meta
    return out


def _vuln_obj(vuln: Vulnerability) -> dict[str, Any]:
    out: dict[str, Any] = {"cveId": vuln.cve_id}
    if vuln.cvss_score is not None:
        out["cvssScore"] = vuln.cvss_score
    if vuln.cvss_vector is not None:
        out["cvssVector"] = vuln.cvss_vector
    if vuln.description is not None:
        out["description"] = vuln.description
    return out


def _affects_obj(edge: AffectsEdge) -> dict[str, Any]:
    out: dict[str, Any] = {"libraryDigest": edge.library_digest, "cveId": edge.cve_id}
    if edge.reachable is not None:
        out["reachable"] = edge.reachable
    return out


def iter_documents_obj(docs: Iterable[ScanDocument]) -> list[dict[str, Any]]:
    """JSON-ready list for a bundle of documents, sorted by repository id."""
    return [document_to_obj(d) for d in sorted(docs, key=lambda d: d.repository.id)]
