"""Acceptance criteria, one test per criterion.

Each test runs the named suite once at the default configuration, checks
that nothing failed and that the suite met its time budget, and records a
PASS/FAIL line that is printed in the terminal summary.
"""

import pytest

from lmt.config import Config
from lmt.suites import run_suite

# (criterion, suite, seconds allowed, minimum number of checked instances)
CRITERIA = [
    (1, "structural", 60, 1),
    (2, "theories", 30, 7),
    (3, "layered-witnesses", 10, 15),
    (4, "zx-soundness", 60, 1),
    (5, "mbqc-brute", 300, 500),
    (6, "pivot", 30, 1),
    (7, "prob", 120, 1000 + 4 * 200 + 100),
    (8, "ccs", 120, 1),
    (9, "roundtrip", 30, 8 * 1000),
]

RESULTS: list[str] = []


@pytest.mark.parametrize("number,suite,budget,minimum", CRITERIA, ids=[f"criterion-{c[0]}-{c[1]}" for c in CRITERIA])
def test_criterion(number, suite, budget, minimum):
    rep = run_suite(suite, Config())
    in_time = rep.seconds < budget
    ok = rep.ok and in_time and rep.passed >= minimum
    line = (f"{'PASS' if ok else 'FAIL'} criterion {number} ({suite}): {rep.passed} passed, "
            f"{rep.failed} failed, {rep.seconds:.1f} s of {budget} s")
    RESULTS.append(line)
    print(line)
    assert rep.failed == 0, rep.failures[:5]
    assert rep.passed >= minimum
    assert in_time, f"took {rep.seconds:.1f} s"


def test_mbqc_graph_count():
    rep = run_suite("mbqc-brute", Config())
    assert rep.details["graphs"] >= 500
    assert set(rep.details["ops"]) == {"lc", "pivot", "rm", "rename"}
