import pytest

from mbs import moebius_annulus, quasi_pure, theta


@pytest.fixture
def theta3():
    return theta(3)


@pytest.fixture
def mb():
    return moebius_annulus()


@pytest.fixture
def qn():
    return quasi_pure()
