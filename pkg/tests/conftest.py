import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bellpoly.facets import build_catalog  # noqa: E402
from bellpoly.scenario import BellScenario  # noqa: E402


@pytest.fixture(scope="session")
def s221():
    return BellScenario((2, 2, 1))


@pytest.fixture(scope="session")
def catalog221(s221):
    return build_catalog(s221)


@pytest.fixture(scope="session")
def catalog2211():
    return build_catalog(BellScenario((2, 2, 1, 1)))


def pytest_terminal_summary(terminalreporter):
    from acceptance_report import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
