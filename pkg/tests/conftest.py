from __future__ import annotations

import pytest

from zeta3cf import catalog, derived_chain, flatten, lookup, verify_chain, zeta3_reference


@pytest.fixture(scope="session")
def cat():
    return catalog()


@pytest.fixture(scope="session")
def chain():
    return derived_chain()


@pytest.fixture(scope="session")
def chain_report():
    return verify_chain()


@pytest.fixture(scope="session")
def nes_flat():
    return flatten(lookup("N"))


@pytest.fixture(scope="session")
def apery_flat():
    return flatten(lookup("APERY"))


@pytest.fixture(scope="session")
def ref40():
    return zeta3_reference(40)


@pytest.fixture(scope="session")
def ref120():
    return zeta3_reference(120)
