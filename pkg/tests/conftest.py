import json
from pathlib import Path

import pytest

from sysrisk.config import paper_config

GOLDEN_PATH = Path(__file__).with_name("golden.json")
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def golden():
    return json.loads(GOLDEN_PATH.read_text())


@pytest.fixture(scope="session")
def paper_cfg():
    return paper_config()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
