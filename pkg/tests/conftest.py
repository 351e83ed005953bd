import pytest

from pnlab import corpus


@pytest.fixture(scope="session")
def named_nets():
    return corpus.named_fixtures()


@pytest.fixture(scope="session")
def all_nets():
    return corpus.full_corpus()


@pytest.fixture(scope="session")
def copy_net(named_nets):
    return named_nets["copy"]


@pytest.fixture(scope="session")
def jump_net(named_nets):
    return named_nets["jump"]
