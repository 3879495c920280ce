import pytest

from gausslab import build_tower


@pytest.fixture(scope="session")
def f9():
    return build_tower(3, 1, 2)


@pytest.fixture(scope="session")
def f32():
    return build_tower(2, 1, 5)


@pytest.fixture(scope="session")
def f81():
    return build_tower(3, 1, 4)


@pytest.fixture(scope="session")
def f25():
    return build_tower(5, 1, 2)


@pytest.fixture(scope="session")
def f729():
    return build_tower(3, 1, 6)
