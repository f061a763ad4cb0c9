"""Collects acceptance outcomes and prints one verdict line per criterion."""

import pytest

_OUTCOMES: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    number, title = mark.args
    entry = _OUTCOMES.setdefault(number, {"title": title, "failed": []})
    if rep.failed:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        entry = _OUTCOMES[number]
        verdict = "FAIL" if entry["failed"] else "PASS"
        line = f"criterion {number:2d}: {verdict}  {entry['title']}"
        if entry["failed"]:
            line += "  [failing: " + ", ".join(entry["failed"]) + "]"
        terminalreporter.write_line(line)
