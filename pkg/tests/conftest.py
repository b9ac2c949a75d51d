"""Shared test configuration.

Every test runs with outbound network access blocked; only loopback and
unix-domain sockets are allowed.  Anything that needs HTTP runs against
in-process apps or recorded transports.
"""

from __future__ import annotations

import socket
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make `factories` importable

_LOCAL_HOSTS = {"127.0.0.1", "::1", "localhost", "0.0.0.0"}


@pytest.fixture(autouse=True)
def no_remote_network(monkeypatch):
    real_connect = socket.socket.connect

    def guarded(self, address, *args, **kwargs):
        host = address[0] if isinstance(address, tuple) else address
        if isinstance(host, bytes):
            host = host.decode("utf-8", "replace")
        if isinstance(host, str) and not host.startswith("/") and host not in _LOCAL_HOSTS:
            raise AssertionError(f"test attempted a network connection to {host!r}")
        return real_connect(self, address, *args, **kwargs)

    monkeypatch.setattr(socket.socket, "connect", guarded)
    yield


@pytest.fixture(scope="session")
def org_dir() -> Path:
    path = Path(__file__).parent / "data" / "org"
    assert path.is_dir(), "fixture corpus missing; run tools/gen_org_fixture.py"
    return path


@pytest.fixture(scope="session")
def org_docs(org_dir):
    from vulnex.ingest import ingest_directory

    docs, report = ingest_directory(org_dir)
    assert report.ok, report.rejected
    return docs


@pytest.fixture(scope="session")
def org_graph(org_docs):
    """Merged graph over the checked-in corpus, built once per run.

    Tests must treat it as read-only.
    """
    from vulnex.graph import build_graph

    g = build_graph(org_docs)
    g.warm()
    return g
