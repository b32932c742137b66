from pathlib import Path

import numpy as np
import pytest

from ppfd.synth import generate

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def synthetic():
    return generate()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def noisy_csv():
    return FIXTURES / "noisy_daily_1000.csv"


_VERDICTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_VERDICTS] = {}


@pytest.fixture
def criterion(request):
    """``criterion(number, passed, detail)`` records an acceptance verdict."""
    verdicts = request.config.stash[_VERDICTS]

    def record(number, passed, detail):
        verdicts[number] = (bool(passed), detail)
        print(f"criterion {number}: {'PASS' if passed else 'FAIL'} {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter, config):
    verdicts = config.stash[_VERDICTS]
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(verdicts):
        passed, detail = verdicts[number]
        terminalreporter.write_line(
            f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
