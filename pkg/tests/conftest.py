from collections import defaultdict

import pytest

CRITERIA = 14
_outcomes: dict[int, list[str]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marks = getattr(report, "_criteria", ())
    for n in marks:
        if hasattr(report, "wasxfail") or report.failed or report.skipped:
            _outcomes[n].append(f"FAIL ({report.nodeid.split('::')[-1]})")
        else:
            _outcomes[n].append("PASS")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    rep._criteria = tuple(m.args[0] for m in item.iter_markers("criterion"))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, CRITERIA + 1):
        results = _outcomes.get(n)
        if not results:
            terminalreporter.write_line(f"criterion {n}: NOT RUN")
            continue
        fails = [r for r in results if r != "PASS"]
        status = "PASS" if not fails else fails[0]
        terminalreporter.write_line(f"criterion {n}: {status}")
