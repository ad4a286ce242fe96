import pytest

from posetmodels.brackets import enumerate_brackets, enumerate_model_structures
from posetmodels.poset import boolean_algebra
from posetmodels.quiver import build_quiver


@pytest.fixture(scope="session")
def p1():
    return boolean_algebra(1)


@pytest.fixture(scope="session")
def p2():
    return boolean_algebra(2)


@pytest.fixture(scope="session")
def p3():
    return boolean_algebra(3)


@pytest.fixture(scope="session")
def brackets1(p1):
    return enumerate_brackets(p1)


@pytest.fixture(scope="session")
def brackets2(p2):
    return enumerate_brackets(p2)


@pytest.fixture(scope="session")
def brackets3(p3):
    return enumerate_brackets(p3)


@pytest.fixture(scope="session")
def ms1(p1):
    return enumerate_model_structures(p1)


@pytest.fixture(scope="session")
def ms2(p2):
    return enumerate_model_structures(p2)


@pytest.fixture(scope="session")
def ms3(p3):
    return enumerate_model_structures(p3)


@pytest.fixture(scope="session")
def quiver2(ms2):
    return build_quiver(ms2)


@pytest.fixture(scope="session")
def quiver3(ms3):
    return build_quiver(ms3)
