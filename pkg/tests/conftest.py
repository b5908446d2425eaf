"""Shared fixtures: built groups and catalogs are reused across the session."""

import pytest

from sigmaperm import build_group
from sigmaperm.catalog import catalog


@pytest.fixture(scope="session")
def make():
    """Memoized group builder so lattices are shared between tests."""
    cache = {}

    def _make(spec: str):
        if spec not in cache:
            cache[spec] = build_group(spec)
        return cache[spec]

    return _make


@pytest.fixture(scope="session")
def catalog24():
    return catalog(24)


@pytest.fixture(scope="session")
def catalog60():
    return catalog(60)
