import pathlib

import pytest

from charp.harness import load_session

FIXTURE_DIR = pathlib.Path(__file__).resolve().parent.parent / "src" / "charp" / "fixtures"

FIXTURES = ["FX1", "FX2", "FX3", "FX4", "FX5", "FX6"]


def fixture_path(name):
    return FIXTURE_DIR / f"{name}.json"


@pytest.fixture(scope="session")
def sessions():
    """All shipped fixtures, loaded once; module caches are shared."""
    return {name: load_session(fixture_path(name)) for name in FIXTURES}
