import sys
from pathlib import Path

import numpy as np
import pytest

DATA = Path(__file__).parent / "data"


def pytest_addoption(parser):
    parser.addoption("--skip-slow", action="store_true", help="skip tests marked slow")


def pytest_collection_modifyitems(config, items):
    if not config.getoption("--skip-slow"):
        return
    skip = pytest.mark.skip(reason="--skip-slow given")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None:
        return
    outcomes = {}
    for kind in ("passed", "failed", "skipped", "error"):
        for rep in terminalreporter.stats.get(kind, []):
            name = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_" in name:
                outcomes[int(name.split("::test_")[1][:2])] = kind
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, 11):
        line = module.RESULTS.get(number)
        if line is None:
            state = outcomes.get(number)
            label = {"skipped": "SKIP", None: "NOT RUN"}.get(state, "FAIL")
            line = f"ACCEPTANCE {number:>2}: {label}  ({state or 'deselected'})"
        terminalreporter.write_line(line)
