import numpy as np
import pytest

_ACCEPTANCE = []


def record_acceptance(line: str) -> None:
    """Queue a criterion line for the terminal summary (visible without ``-s``)."""
    print(line)
    _ACCEPTANCE.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)



@pytest.fixture
def acceptance():
    """Callable that records one PASS/FAIL line per acceptance criterion."""
    return record_acceptance
