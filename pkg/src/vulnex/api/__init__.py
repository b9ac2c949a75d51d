"""HTTP/JSON interface, snapshot persistence, and the command line."""

from vulnex.api.app import create_app
from vulnex.api.snapshot import read_snapshot, write_snapshot
from vulnex.api.views import ViewRequest, build_view_response, canonical_json

__all__ = [
    "ViewRequest",
    "build_view_response",
    "canonical_json",
    "create_app",
    "read_snapshot",
    "write_snapshot",
]
