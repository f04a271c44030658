import pytest

from hpcfabric.config import bundled, load_catalog, load_network, load_system

ACCEPTANCE_RESULTS: list[tuple[str, str, bool]] = []


@pytest.fixture(scope="session")
def system_config():
    return load_system(bundled("system_6x6.json"))[0]


@pytest.fixture(scope="session")
def plan():
    return load_network(bundled("testbed_network.json"))[0]


@pytest.fixture(scope="session")
def catalog():
    return load_catalog(bundled("catalog.json"))[0]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for ident, title, ok in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {ident:<5} {title}")
