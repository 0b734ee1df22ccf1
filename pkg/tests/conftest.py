import pytest

from bhfi import (cfa_zero_handlebody, cfd_solid_torus, cfd_zero_handlebody,
                  cfda_az, cfda_azbar, split_pmc)


@pytest.fixture(scope="session")
def z1():
    return split_pmc(1)


@pytest.fixture(scope="session")
def z2():
    return split_pmc(2)


@pytest.fixture(scope="session")
def cfd0():
    return cfd_solid_torus("zero")


@pytest.fixture(scope="session")
def cfd_inf():
    return cfd_solid_torus("infinity")


@pytest.fixture(scope="session")
def cfd_m1():
    return cfd_solid_torus("minus_one")


@pytest.fixture(scope="session")
def cfa1():
    return cfa_zero_handlebody(1)


@pytest.fixture(scope="session")
def az1(z1):
    return cfda_az(z1)


@pytest.fixture(scope="session")
def azbar1(z1):
    return cfda_azbar(z1)


@pytest.fixture(scope="session")
def cfa2():
    return cfa_zero_handlebody(2)


@pytest.fixture(scope="session")
def cfd0_k2():
    return cfd_zero_handlebody(2)
