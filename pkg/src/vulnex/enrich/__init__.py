"""External quality metadata: provider protocol, fixture and code-host
providers, and graph enrichment."""

from vulnex.enrich.code_host import CodeHostMetaProvider, parse_repo_path
from vulnex.enrich.enricher import enrich_graph
from vulnex.enrich.providers import FixtureMetaProvider, MetaProvider

__all__ = [
    "CodeHostMetaProvider",
    "FixtureMetaProvider",
    "MetaProvider",
    "enrich_graph",
    "parse_repo_path",
]
