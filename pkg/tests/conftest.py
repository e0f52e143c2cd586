import pytest

# criterion number -> [title, passed, failed]
_CRITERIA: dict[int, list] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        entry = _CRITERIA.setdefault(number, [title, 0, 0])
        entry[1 if report.passed else 2] += 1


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, passed, failed = _CRITERIA[number]
        status = "PASS" if failed == 0 and passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {title} ({passed} passed, {failed} failed)")
