import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# -- acceptance summary: one line per criterion --------------------------------


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")
    config.criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (report.when != "call" and not report.failed):
        return
    number, title = marker.args
    _, ok = item.config.criteria.get(number, (title, True))
    item.config.criteria[number] = (title, ok and report.passed)


def pytest_terminal_summary(terminalreporter, config):
    if not config.criteria:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(config.criteria):
        title, ok = config.criteria[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {number:>2}. {title}")
