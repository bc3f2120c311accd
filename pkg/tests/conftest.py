import sys
from pathlib import Path

import mpmath as mp
import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA: dict[int, list] = {}


@pytest.fixture(autouse=True)
def hundred_digits():
    with mp.workdps(100):
        yield


def pytest_collection_modifyitems(items):
    for item in items:
        for mark in item.iter_markers("criterion"):
            _CRITERIA.setdefault(mark.args[0], [])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marks = list(item.iter_markers("criterion"))
    if not marks:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        for mark in marks:
            _CRITERIA.setdefault(mark.args[0], []).append((item.nodeid, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        results = _CRITERIA[k]
        if not results:
            status = "NOT RUN"
        elif all(outcome == "passed" for _, outcome in results):
            status = "PASS"
        elif any(outcome == "failed" for _, outcome in results):
            status = "FAIL"
        else:
            status = "SKIPPED"
        failed = [nodeid.split("::")[-1] for nodeid, outcome in results if outcome == "failed"]
        detail = f" ({', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {k}: {status}{detail}")
