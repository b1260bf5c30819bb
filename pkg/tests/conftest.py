import pytest

_results: dict[str, str] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    label = marker.args[0]
    if call.excinfo is None:
        _results[label] = "PASS"
    else:
        _results[label] = f"FAIL  ({call.excinfo.value})".splitlines()[0]


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_results, key=lambda s: int(s.split()[0][2:])):
        status = _results[label]
        terminalreporter.write_line(f"{status[:4]}  {label}{status[4:]}")
