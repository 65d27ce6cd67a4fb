import os

import pytest

_FIXTURES = os.path.abspath(
    os.path.join(os.path.dirname(__file__), "..", "fixtures")
)


def fixture_path(name: str) -> str:
    return os.path.join(_FIXTURES, name)


@pytest.fixture
def fixtures_dir() -> str:
    return _FIXTURES
