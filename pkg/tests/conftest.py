import pytest

from drgcert.fixtures import load_fixture
from drgcert.graph import build_named, complete, hypercube, strong_product


@pytest.fixture(scope="session")
def petersen():
    return build_named("petersen")


@pytest.fixture(scope="session")
def q3k2():
    return strong_product(hypercube(3), complete(2))


@pytest.fixture(scope="session")
def perkel():
    return load_fixture("perkel")


@pytest.fixture(scope="session")
def hoffman():
    return load_fixture("hoffman")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number].line())
