import pytest

from duelhalt.scripts import setup_run_a, setup_run_b


@pytest.fixture(scope="session")
def board_a():
    return setup_run_a()


@pytest.fixture(scope="session")
def board_b():
    return setup_run_b()
