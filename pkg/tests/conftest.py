import pytest

import qcdensity as q


@pytest.fixture(scope="session")
def table():
    return q.build_spf_table(10**5)


@pytest.fixture(scope="session")
def small_table():
    return q.build_spf_table(10**4)


@pytest.fixture(scope="session")
def big_table():
    # large enough that k = 2 counting covers x = 10**7 (needs primes to x/2)
    return q.build_spf_table(5 * 10**6)
