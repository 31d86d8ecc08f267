import os
import sys
import time

import pytest

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, HERE)

FIXTURES = os.path.join(HERE, "fixtures")

# criterion id -> (title, outcome, seconds); filled from test_acceptance.py
_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    yield
    item.user_properties.append(("elapsed", time.perf_counter() - start))


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_ac"):
        return
    tag = name.split("_")[1].upper()
    title = " ".join(name.split("_")[2:])
    elapsed = dict(report.user_properties).get("elapsed", 0.0)
    if report.when == "call" or (report.when == "setup" and report.failed):
        _ACCEPTANCE[tag] = (title, "PASS" if report.passed else "FAIL", elapsed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for tag in sorted(_ACCEPTANCE, key=lambda t: int(t[2:])):
        title, outcome, elapsed = _ACCEPTANCE[tag]
        terminalreporter.write_line("%-4s %-4s %7.2fs  %s" % (tag, outcome, elapsed, title))
