"""
Shared fixtures: repository imports, isolated settings and database, slow tests.
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import reset_settings  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run long exhaustive searches")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Point the database and certificates at a temporary directory"""
    monkeypatch.setenv("ZEROSUM_DATABASE_URL", f"sqlite:///{tmp_path / 'reference.db'}")
    monkeypatch.setenv("ZEROSUM_CERTIFICATE_DIR", str(tmp_path / "certificates"))
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def write_file(tmp_path):
    """Write text to a file under tmp_path and return its path"""

    def _write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write
