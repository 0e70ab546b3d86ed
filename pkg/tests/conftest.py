import os

import pytest

from rootstack.ring import BaseRing, Field

QQ = Field(0)
F5 = Field(5)
F7 = Field(7)


@pytest.fixture
def kx_q():
    return BaseRing.poly_line(QQ)


@pytest.fixture
def k_q():
    return BaseRing.of_field(QQ)


def pytest_collection_modifyitems(config, items):
    if os.environ.get("ROOTSTACK_SLOW"):
        return
    skip = pytest.mark.skip(reason="set ROOTSTACK_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
