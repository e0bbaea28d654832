"""Shared pytest wiring: the acceptance-criteria summary block.

Tests marked ``@pytest.mark.acceptance(criterion=N, title="...")`` get one
PASS/FAIL line each at the end of the run, in criterion order.
"""

import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(criterion, title): tracked release gate, one summary line each",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    crit = mark.kwargs["criterion"]
    title = mark.kwargs["title"]
    if report.when == "setup" and report.outcome == "skipped":
        _RESULTS[crit] = (title, "SKIP")
    elif report.when == "call":
        _RESULTS[crit] = (title, "PASS" if report.outcome == "passed" else "FAIL")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_RESULTS):
        title, status = _RESULTS[crit]
        terminalreporter.write_line(f"[{status}] criterion {crit:>2}: {title}")
