"""Code-hosting metadata provider with a TTL disk cache.

Fetches repository statistics (open issues, stars, watchers) from a
GitHub-style REST API.  Responses are cached on disk (default TTL 24h,
directory from VULNEX_CACHE_DIR); on network or server failure a stale
cache entry is served rather than dropping the data.  An auth failure
disables the provider for the rest of the session so one bad token
does not stall enrichment.  Cache entry format is documented in
docs/vsif.md.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from pathlib import Path
from urllib.parse import urlparse

import httpx

from vulnex.enrich.providers import meta_from_obj, meta_to_obj
from vulnex.model import QualityMeta

DEFAULT_API_BASE = "https://api.github.com"
DEFAULT_TTL_SECONDS = 24 * 60 * 60
TOKEN_ENV = "VULNEX_CODEHOST_TOKEN"
CACHE_DIR_ENV = "VULNEX_CACHE_DIR"


def _default_cache_dir() -> Path:
    env = os.environ.get(CACHE_DIR_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "vulnex"


def parse_repo_path(source_url: str) -> str | None:
    """Extract ``owner/name`` from a repository URL; None if it has no
    two-segment path."""
    parsed = urlparse(source_url)
    parts = [p for p in parsed.path.split("/") if p]
    if len(parts) < 2:
        return None
    name = parts[1]
    if name.endswith(".git"):
        name = name[: -len(".git")]
    return f"{parts[0]}/{name}"


class CodeHostMetaProvider:
    """MetaProvider backed by a code-hosting REST API.

    ``transport`` is injectable so tests can run against recorded
    responses (httpx.MockTransport) with no live network involved.
    """

    def __init__(
        self,
        api_base: str = DEFAULT_API_BASE,
        token: str | None = None,
        cache_dir: str | Path | None = None,
        ttl_seconds: int = DEFAULT_TTL_SECONDS,
        transport: httpx.BaseTransport | None = None,
        clock=time.time,
    ) -> None:
        self._api_base = api_base.rstrip("/")
        self._token = token if token is not None else os.environ.get(TOKEN_ENV)
        self._cache_dir = Path(cache_dir) if cache_dir is not None else _default_cache_dir()
        self._ttl = ttl_seconds
        self._clock = clock
        self._disabled = False
        headers = {"Accept": "application/vnd.github+json"}
        if self._token:
            headers["Authorization"] = f"Bearer {self._token}"
        self._client = httpx.Client(transport=transport, headers=headers, timeout=10.0)

    # -- MetaProvider -------------------------------------------------------

    def repository_meta(self, source_url: str) -> QualityMeta | None:
        repo_path = parse_repo_path(source_url)
        if repo_path is None:
            return None
        entry = self._read_cache(repo_path)
        now = self._clock()
        if entry is not None and now - entry["fetchedAt"] < self._ttl:
            return self._entry_meta(entry)
        if self._disabled:
            return self._entry_meta(entry) if entry is not None else None
        fetched = self._fetch(repo_path)
        if fetched == "failed":
            # keep serving the stale entry rather than losing the fields
            return self._entry_meta(entry) if entry is not None else None
        if isinstance(fetched, QualityMeta) and fetched.is_empty():
            fetched = None
        self._write_cache(repo_path, fetched)
        return fetched

    def library_meta(self, coordinates: str) -> QualityMeta | None:
        return None  # the code host only knows repositories

    # -- fetch and cache ----------------------------------------------------

    def _fetch(self, repo_path: str) -> QualityMeta | None | str:
        try:
            response = self._client.get(f"{self._api_base}/repos/{repo_path}")
        except httpx.HTTPError:
            return "failed"
        if response.status_code in (401, 403):
            self._disabled = True
            return "failed"
        if response.status_code == 404:
            return None  # cached as a miss so the 404 is not re-fetched
        if response.status_code != 200:
            return "failed"
        try:
            payload = response.json()
        except ValueError:
            return "failed"
        return QualityMeta(
            github_issues=payload.get("open_issues_count"),
            github_stars=payload.get("stargazers_count"),
            github_watchers=payload.get("subscribers_count"),
        )

    def _cache_path(self, repo_path: str) -> Path:
        digest = hashlib.sha256(repo_path.encode("utf-8")).hexdigest()[:32]
        return self._cache_dir / f"{digest}.json"

    def _read_cache(self, repo_path: str) -> dict | None:
        path = self._cache_path(repo_path)
        try:
            entry = json.loads(path.read_text("utf-8"))
        except (OSError, ValueError):
            return None
        if not isinstance(entry, dict) or "fetchedAt" not in entry:
            return None
        return entry

    @staticmethod
    def _entry_meta(entry: dict) -> QualityMeta | None:
        meta_obj = entry.get("meta")
        if meta_obj is None:
            return None
        try:
            meta = meta_from_obj(meta_obj)
        except Exception:
            return None
        return None if meta.is_empty() else meta

    def _write_cache(self, repo_path: str, meta: QualityMeta | None) -> None:
        entry = {
            "fetchedAt": self._clock(),
            "key": repo_path,
            "meta": None if meta is None else meta_to_obj(meta),
        }
        path = self._cache_path(repo_path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(entry, sort_keys=True), encoding="utf-8")
            tmp.replace(path)  # atomic so readers never see partial JSON
        except OSError:
            pass  # caching is best-effort

    def close(self) -> None:
        self._client.close()
