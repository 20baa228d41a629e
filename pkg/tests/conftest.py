import pytest
from hypothesis import settings

from onetrough import build_wave, count_levels, make_params

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# the five-solution point and the zero-solution point used throughout
FIVE = (0.61005, 0.00065)
ZERO = (0.99, 0.4)

# acceptance summary lines, filled by tests/test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def five_params():
    return make_params(*FIVE)


@pytest.fixture(scope="session")
def five_count(five_params):
    return count_levels(five_params)


@pytest.fixture(scope="session")
def five_profiles(five_params, five_count):
    return [build_wave(five_params, cand) for cand in five_count.candidates]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
