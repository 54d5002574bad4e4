import pytest

from barter.model import Agent


@pytest.fixture
def make_agent():
    def make(id=1, demand=(0.0, 0.0), offer=(0.0, 0.0), alpha=1.0, beta=0.1, gamma=0.5):
        return Agent(id, demand, offer, alpha, beta, gamma)

    return make


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
