import random
import pytest
from waring_kit.config import CACHE_DIR_ENV


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20090101)


@pytest.fixture
def cache_dir(tmp_path, monkeypatch) -> str:
    monkeypatch.setenv(CACHE_DIR_ENV, str(tmp_path))
    return str(tmp_path)
