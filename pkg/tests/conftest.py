BUDGET_SECONDS = 5.0

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when not in ("setup", "call", "teardown"):
        return
    n, title = mark.args
    entry = _criteria.setdefault(n, {"title": title, "ok": True, "seconds": 0.0, "ran": False})
    entry["seconds"] += call.duration
    if call.when == "call":
        entry["ran"] = True
    if call.excinfo is not None:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        slow = e["seconds"] >= BUDGET_SECONDS
        ok = e["ok"] and e["ran"] and not slow
        note = " over the time budget" if slow else ""
        terminalreporter.write_line(
            f"criterion {n}: {'PASS' if ok else 'FAIL'}  {e['title']}  ({e['seconds']:.2f} s{note})")
