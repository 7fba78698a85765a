from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from mediahub.gateway import ApiConfig, create_app
from mediahub.graph import MediaGraph
from mediahub.seed import seed_fixture
from mediahub.textstore import TextStore

WRITE_TOKEN = "test-secret"


@pytest.fixture
def graph() -> MediaGraph:
    return MediaGraph()


@pytest.fixture
def stores() -> tuple[MediaGraph, TextStore]:
    g = MediaGraph()
    return g, TextStore(g)


@pytest.fixture
def fixture_stores() -> tuple[MediaGraph, TextStore]:
    g = MediaGraph()
    t = TextStore(g)
    seed_fixture(g, t)
    return g, t


@pytest.fixture
def fixture_app(fixture_stores, tmp_path):
    g, t = fixture_stores
    config = ApiConfig(write_token=WRITE_TOKEN, data_dir=tmp_path / "data")
    return create_app(g, t, config), g, t


@pytest.fixture
def client(fixture_app):
    app, _, _ = fixture_app
    with TestClient(app) as c:
        yield c
