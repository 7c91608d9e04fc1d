from __future__ import annotations

import sys
from pathlib import Path

import pytest

from causal_assembly.catalog import default_fixture_dir, load_catalog

# make tests/oracles.py and tests/generators.py importable as plain modules
sys.path.insert(0, str(Path(__file__).parent))


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(name): ties a test to one acceptance criterion; "
        "a PASS/FAIL line per criterion is printed in the terminal summary",
    )


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return default_fixture_dir()


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


_acceptance_results: dict[str, bool] = {}


def pytest_runtest_makereport(item, call):
    if call.when != "call":
        return
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    name = marker.args[0]
    passed = call.excinfo is None
    # a criterion split across tests only counts as PASS if every part passed
    _acceptance_results[name] = _acceptance_results.get(name, True) and passed


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, passed in _acceptance_results.items():
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{verdict}] {name}")
