import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"

ACCEPTANCE_TITLES = {
    1: "spanning forests: condition, matroid rank, construction and brute force agree (all small graphs)",
    2: "matroid partition size equals brute-force sum rank (500 instances)",
    3: "regular forests with exact counts: conditions, construction and brute force agree (300 instances)",
    4: "regular forests with root bounds: conditions, construction and brute force agree (200 instances)",
    5: "hyperforest pipeline: conditions, trimming, construction and brute force agree (150 instances)",
    6: "partition lattice, submodularity and the capped-sum inequality",
    7: "directed pipeline: subpartition and bipartite conditions, construction and brute force agree (100 instances)",
    8: "specialized condition forms agree with the general checkers (100 instances)",
    9: "number-partitioning reduction is exact for totals up to 12",
    10: "pack reports are byte-identical across reruns",
}
_outcomes: dict[int, str] = {}


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    crit = marker.args[0]
    if report.when == "call" or report.outcome != "passed":
        if _outcomes.get(crit, "passed") == "passed":
            _outcomes[crit] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for crit, title in ACCEPTANCE_TITLES.items():
        outcome = _outcomes.get(crit, "not run")
        mark = {"passed": "PASS", "failed": "FAIL"}.get(outcome, outcome.upper())
        terminalreporter.write_line(f"criterion {crit:2d}: {mark}  {title}")
