import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "lab",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("lab")

SUITE_BUDGET_S = 300.0
_criteria = {}
_start = [None]


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")
    _start[0] = time.perf_counter()


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    n = dict(report.user_properties).get("criterion")
    if n is None:
        return
    title = dict(report.user_properties).get("title", "")
    detail = dict(report.user_properties).get("detail", "")
    _criteria[n] = (report.outcome, title, detail, report.duration)


@pytest.fixture
def criterion(request, record_property):
    """Tag an acceptance test; returns a callable for a one-line detail."""
    marker = request.node.get_closest_marker("criterion")
    n, title = marker.args
    record_property("criterion", n)
    record_property("title", title)

    def detail(text):
        record_property("detail", text)

    return detail


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    elapsed = time.perf_counter() - _start[0]
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_criteria):
        outcome, title, detail, dur = _criteria[n]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        tr.write_line(f"criterion {n}: {verdict}  {title}  [{dur:.1f}s]  {detail}")
    collected = tr._session.testscollected if hasattr(tr, "_session") else None
    full = not config.args or config.args == ["tests"] or config.args == [str(config.rootpath / "tests")]
    verdict = "PASS" if elapsed <= SUITE_BUDGET_S else "FAIL"
    scope = "full suite" if full else "this run"
    tr.write_line(f"criterion 9: {verdict}  test suite wall time ({scope}) {elapsed:.1f}s <= {SUITE_BUDGET_S:.0f}s")


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - _start[0]
    if _criteria and elapsed > SUITE_BUDGET_S and exitstatus == 0:
        session.exitstatus = 1
