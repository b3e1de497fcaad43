"""Session-wide fixtures and the acceptance reporting hook.

The large series are built once per session; everything that needs a shorter
window truncates its own copy.
"""
from __future__ import annotations

import pytest

from shimlift import fixtures


def pytest_runtest_logreport(report):
    # one visible PASS/FAIL line per acceptance criterion
    if report.when != "call":
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    tag = name[len("test_criterion_"):]
    num, _, rest = tag.partition("_")
    verdict = "PASS" if report.passed else "FAIL"
    print(
        "\n[acceptance] criterion %s (%s): %s in %.2fs"
        % (num.lstrip("0") or num, rest.replace("_", " "), verdict, report.duration)
    )


@pytest.fixture(scope="session")
def big_cohen():
    # covers prec 30 at index 45, and prec 200 at index 1
    return fixtures.cohen_eisenstein(2, 40516)


@pytest.fixture(scope="session")
def big_hj4():
    return fixtures.weakly_holomorphic_product(40516)


@pytest.fixture(scope="session")
def big_theta_e4():
    return fixtures.plus_product(4, 40516)
