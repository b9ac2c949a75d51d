"""Metadata provider protocol and the file-backed fixture provider."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping, Protocol, runtime_checkable

from vulnex.errors import ValidationError
from vulnex.model import QualityMeta


@runtime_checkable
class MetaProvider(Protocol):
    """Source of quality metadata.

    Repositories are looked up by source URL, libraries by their
    ``group:artifact:version`` coordinates.  A provider returns None
    when it has nothing for the key; it must never raise for an
    unknown key.
    """

    def repository_meta(self, source_url: str) -> QualityMeta | None: ...

    def library_meta(self, coordinates: str) -> QualityMeta | None: ...


_FIELDS = {
    "lgtmGrade": "lgtm_grade",
    "lgtmScore": "lgtm_score",
    "githubIssues": "github_issues",
    "githubStars": "github_stars",
    "githubWatchers": "github_watchers",
}


def meta_from_obj(obj: Mapping[str, Any], context: str = "meta") -> QualityMeta:
    unknown = set(obj) - set(_FIELDS)
    if unknown:
        raise ValidationError(f"{context}: unknown fields {sorted(unknown)}")
    return QualityMeta(**{attr: obj.get(key) for key, attr in _FIELDS.items()})


def meta_to_obj(meta: QualityMeta) -> dict[str, Any]:
    out = {key: getattr(meta, attr) for key, attr in _FIELDS.items()}
    return {k: v for k, v in out.items() if v is not None}


class FixtureMetaProvider:
    """Provider backed by a JSON file of recorded metadata.

    File shape: ``{"repositories": {url: meta...}, "libraries":
    {coordinates: meta...}}`` with camelCase meta fields.
    """

    def __init__(self, path: str | Path) -> None:
        obj = json.loads(Path(path).read_text("utf-8"))
        if not isinstance(obj, dict):
            raise ValidationError(f"{path}: fixture file must be a JSON object")
        self._repos = {
            url: meta_from_obj(entry, f"repositories[{url!r}]")
            for url, entry in obj.get("repositories", {}).items()
        }
        self._libs = {
            coords: meta_from_obj(entry, f"libraries[{coords!r}]")
            for coords, entry in obj.get("libraries", {}).items()
        }

    def repository_meta(self, source_url: str) -> QualityMeta | None:
        return self._repos.get(source_url)

    def library_meta(self, coordinates: str) -> QualityMeta | None:
        return self._libs.get(coordinates)
