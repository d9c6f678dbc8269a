import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from vpconf.modelio import load_corpus  # noqa: E402

ACCEPTANCE = {}  # (number, title) -> outcome of the call phase


@pytest.fixture(scope="session")
def corpus():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_corpus(name)
        return cache[name]

    return get


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark and (report.when == "call" or report.outcome != "passed"):
        ACCEPTANCE[tuple(mark.args)] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (n, title), outcome in sorted(ACCEPTANCE.items()):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict}  {title}")
