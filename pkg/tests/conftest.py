"""Prints one PASS/FAIL line per acceptance criterion after the run.

Criterion titles come from the first docstring line of each test in
tests/test_acceptance.py; outcomes cover setup/call/teardown so a crashed
fixture still shows up as a failed criterion.
"""

from __future__ import annotations

import pytest

_results: dict[str, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if "test_acceptance.py" not in item.nodeid:
        return
    doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
    entry = _results.setdefault(item.nodeid, {"title": doc, "passed": True})
    if report.failed:
        entry["passed"] = False


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for entry in _results.values():
        verdict = "PASS" if entry["passed"] else "FAIL"
        terminalreporter.write_line(f"[{verdict}] {entry['title']}")
