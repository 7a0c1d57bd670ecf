import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_criteria = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    import test_acceptance

    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_criteria.items()):
        doc = (getattr(test_acceptance, name).__doc__ or name).strip().splitlines()[0]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {doc}")
