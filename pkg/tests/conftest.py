import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


import pytest

#: (criterion number, "PASS"/"FAIL", summary) collected by the acceptance suite
ACCEPTANCE_LINES: list[tuple[int, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    n = mark.args[0]
    if not any(line[0] == n for line in ACCEPTANCE_LINES):
        reason = call.excinfo.typename if call.excinfo else "no verdict recorded"
        ACCEPTANCE_LINES.append((n, "FAIL", f"{item.name}: {reason}"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n, status, text in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"{status} criterion {n}: {text}")
