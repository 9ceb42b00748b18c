import pytest
from hypothesis import settings

from app.models.ring import PrimeField, RationalField
from app.ops.bmp import bmp_sheaf
from app.ops.coxeter import get_group

settings.register_profile("algebra", deadline=None, max_examples=60)
settings.load_profile("algebra")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive sweeps over a whole Weyl group")


@pytest.fixture(scope="session")
def a1():
    """Weyl group of type A1"""
    return get_group("A1")

@pytest.fixture(scope="session")
def a2():
    """Weyl group of type A2 (S3)"""
    return get_group("A2")

@pytest.fixture(scope="session")
def a3():
    """Weyl group of type A3 (S4)"""
    return get_group("A3")

@pytest.fixture(scope="session")
def b2():
    """Weyl group of type B2"""
    return get_group("B2")

@pytest.fixture(scope="session")
def b3():
    """Weyl group of type B3"""
    return get_group("B3")

@pytest.fixture(scope="session")
def g2():
    """Weyl group of type G2"""
    return get_group("G2")

@pytest.fixture(scope="session")
def qq():
    """The rationals"""
    return RationalField()

@pytest.fixture(scope="session")
def f3():
    """The field with 3 elements"""
    return PrimeField(3)

@pytest.fixture(scope="session")
def f5():
    """The field with 5 elements"""
    return PrimeField(5)

@pytest.fixture(scope="session")
def a2_w0_sheaf(a2, qq):
    """Canonical sheaf on the full A2 Bruhat graph over Q"""
    return bmp_sheaf(a2, a2.longest_element, qq)

@pytest.fixture(scope="session")
def a3_2132_sheaf(a3, qq):
    """Canonical sheaf below s2s1s3s2 in A3 over Q"""
    return bmp_sheaf(a3, a3.element("2132"), qq)
