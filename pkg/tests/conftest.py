import sys

import pytest

from melg64 import f2poly
from melg64.params import PARAMS


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run long verification tests (large p, 10^9 bulk)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the per-criterion verdict lines collected by the acceptance tests."""
    for name, mod in sys.modules.items():
        if name.rpartition(".")[2] != "test_acceptance":
            continue
        lines = getattr(mod, "ACCEPTANCE_LINES", None)
        if lines:
            terminalreporter.section("acceptance criteria")
            for line in lines:
                terminalreporter.write_line(line)
        break


class _CertCache:
    """Per-session maximal-period certificates, computed once per set."""

    def __init__(self):
        self._certs = {}

    def get(self, name):
        if name not in self._certs:
            self._certs[name] = f2poly.assert_maximal_period(PARAMS[name])
        return self._certs[name]


@pytest.fixture(scope="session")
def certs():
    return _CertCache()
