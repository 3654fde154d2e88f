import pytest

# criterion number -> list of per-test outcomes
_ACCEPTANCE: dict = {}
_TITLES = {
    1: "worked example end to end",
    2: "blocking by specificity (golden traces)",
    3: "conditional lexical choice by sort",
    4: "class expansion and retention",
    5: "head switching and light verbs",
    6: "bidirectional round trip",
    7: "oracle equivalence and index completeness",
    8: "randomized invariant suite",
    9: "performance at production scale",
}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion this test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _ACCEPTANCE.setdefault(marker.args[0], []).append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_TITLES):
        results = _ACCEPTANCE.get(n)
        if results is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status} - {_TITLES[n]}")
