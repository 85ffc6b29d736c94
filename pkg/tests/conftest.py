import pytest

from cotangent_yangian.core import fixture


@pytest.fixture(scope="session")
def sl2():
    return fixture("sl2")


@pytest.fixture(scope="session")
def sl3():
    return fixture("sl3")


@pytest.fixture(scope="session")
def idx(sl2):
    return {lab: i for i, lab in enumerate(sl2.labels)}
