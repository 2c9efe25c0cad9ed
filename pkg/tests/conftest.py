import pytest

from lcseries import LCSEngine, Presentation


@pytest.fixture(scope="session")
def a2():
    return LCSEngine(Presentation.free(2))


@pytest.fixture(scope="session")
def a3():
    return LCSEngine(Presentation.free(3))
