import pytest

from intensity_lab import constructions as C
from intensity_lab import groups as GR
from intensity_lab.structure import series


@pytest.fixture(scope="session")
def Y():
    return C.build_yo()


@pytest.fixture(scope="session")
def Y_series(Y):
    return series(Y)


@pytest.fixture(scope="session")
def Y4(Y, Y_series):
    return GR.quotient(Y, Y_series.term(4))


@pytest.fixture(scope="session")
def heis():
    return C.build_extraspecial(3, 1, "p")


@pytest.fixture(scope="session")
def sn_m2():
    return C.build_sn_delta(5, None, 2)


@pytest.fixture(scope="session")
def sn_g5():
    return C.build_sn_delta(5, None, 3, 5)
