import pytest


@pytest.fixture(autouse=True)
def _isolated_front_cache(tmp_path_factory, monkeypatch):
    """Keep reference-front cache files inside the test session tmp dir."""
    cache = tmp_path_factory.getbasetemp() / "front-cache"
    monkeypatch.setenv("DASCMOP_CACHE", str(cache))
    yield
