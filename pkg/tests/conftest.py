import pytest


def pytest_addoption(parser):
    parser.addoption("--extended", action="store_true", default=False, help="run long searches (minutes each)")


def pytest_configure(config):
    config.addinivalue_line("markers", "extended: long-running, enabled with --extended")
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--extended"):
        return
    skip = pytest.mark.skip(reason="long-running; pass --extended")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


# --- one summary line per acceptance criterion ------------------------------------

_CRITERIA: dict[str, list] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    label = f"{mark.args[0]:>2}. {mark.args[1]}"
    if rep.when == "call" or (rep.when == "setup" and rep.skipped):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _CRITERIA.setdefault(label, []).append((status, item.name, rep.duration))
    elif rep.when == "setup" and rep.failed:
        _CRITERIA.setdefault(label, []).append(("FAIL", item.name, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: int(s.split(".")[0])):
        for status, name, secs in _CRITERIA[label]:
            terminalreporter.write_line(f"{status}  {label}  [{name}, {secs:.2f}s]")
