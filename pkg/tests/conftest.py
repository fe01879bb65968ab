from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fixture_repo import (  # noqa: E402
    Fixture,
    build_deletion_fixture,
    build_main_fixture,
    build_trunk_fixture,
)

from repoknowledge.config import ServiceConfig  # noqa: E402
from repoknowledge.pipeline import AnalysisService  # noqa: E402


@pytest.fixture(scope="session")
def main_repo(tmp_path_factory) -> Fixture:
    return build_main_fixture(tmp_path_factory.mktemp("fixture"))


@pytest.fixture(scope="session")
def trunk_repo(tmp_path_factory) -> Fixture:
    return build_trunk_fixture(tmp_path_factory.mktemp("fixture"))


@pytest.fixture(scope="session")
def deletion_repo(tmp_path_factory) -> Fixture:
    return build_deletion_fixture(tmp_path_factory.mktemp("fixture"))


@pytest.fixture
def service(tmp_path) -> AnalysisService:
    config = ServiceConfig(
        store_path=str(tmp_path / "store.db"),
        workdir_root=str(tmp_path / "work"),
        worker_count=2,
        token_lifetime=3600,
    )
    instance = AnalysisService(config)
    yield instance
    instance.close()
