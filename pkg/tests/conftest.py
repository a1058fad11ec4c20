from __future__ import annotations

import pytest

# criterion number -> {"title": str, "outcomes": [bool], "notes": [str]}
CRITERIA: dict = {}


def note(number: int, text: str) -> None:
    """Attach a line of detail (timings, counts) to a criterion's summary."""
    CRITERIA.setdefault(number, {"title": "", "outcomes": [], "notes": []})["notes"].append(text)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = CRITERIA.setdefault(number, {"title": title, "outcomes": [], "notes": []})
    entry["title"] = title
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        entry["outcomes"].append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        entry = CRITERIA[number]
        runs = entry["outcomes"]
        status = "PASS" if runs and all(runs) else ("NOT RUN" if not runs else "FAIL")
        terminalreporter.write_line(f"criterion {number}: {status}  {entry['title']} ({sum(runs)}/{len(runs)} checks)")
        for line in entry["notes"]:
            terminalreporter.write_line(f"    {line}")
