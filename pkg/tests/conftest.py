import sys

import pytest

from jacobi_diagrams.cache import set_default_cache


@pytest.fixture(autouse=True)
def no_disk_cache(monkeypatch):
    """Keep tests off any user cache directory."""
    monkeypatch.delenv("JACOBI_CACHE_DIR", raising=False)
    set_default_cache(None)
    yield
    set_default_cache(None)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.summary_line(number))
