import numpy as np
import pytest

from fsk import ToleranceConfig, fixtures

POPULATION_COMBOS = [
    (d, N, m) for d in (1, 2, 3) for N in (1, 2, 3) for m in (1, 2)
]


@pytest.fixture(scope="session")
def cfg():
    return ToleranceConfig()


@pytest.fixture(scope="session")
def kernel_d1():
    return fixtures.example_d1()


@pytest.fixture(scope="session")
def kernel_d2():
    return fixtures.example_d2()


@pytest.fixture(scope="session")
def kernel_delta_half():
    return fixtures.delta_half_kernel()


@pytest.fixture(scope="session")
def dominant_population():
    """20 dominance-enforced random kernels over d <= 3, N <= 3, m <= 2."""
    rng = np.random.default_rng(20240917)
    return [
        fixtures.random_dominant_kernel(rng, *POPULATION_COMBOS[k % len(POPULATION_COMBOS)])
        for k in range(20)
    ]


@pytest.fixture(scope="session")
def consistent_population():
    """Shift-consistent kernels generated by random row contractions."""
    rng = np.random.default_rng(771)
    combos = [(1, 2, 1), (2, 1, 1), (2, 2, 1), (2, 2, 2), (3, 2, 1), (1, 3, 2)]
    return [fixtures.random_shift_consistent_kernel(rng, *c) for c in combos]
