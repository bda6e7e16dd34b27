import logging

import pytest

from pacsbridge.engine import StationConfig
from pacsbridge.mockpacs import seed, standard_fixture

logging.getLogger("pacsbridge").setLevel(logging.WARNING)

TEST_TIMEOUTS = dict(connect_timeout=2.0, dimse_timeout=5.0)


@pytest.fixture
def mock_pacs():
    mock = seed(standard_fixture(), dimse_timeout=5.0)
    yield mock
    mock.stop()


@pytest.fixture
def station(mock_pacs):
    return StationConfig("MockA", mock_pacs.ae_title, "127.0.0.1", mock_pacs.port)


def free_port() -> int:
    import socket
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]
