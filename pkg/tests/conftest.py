import numpy as np
import pytest

from symbreak.burnside import build_lattice


@pytest.fixture(scope="session")
def lattice4():
    return build_lattice(4)


@pytest.fixture(scope="session")
def lattice5():
    return build_lattice(5)


@pytest.fixture(scope="session")
def lattice6():
    return build_lattice(6)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240901)


def random_admissible(rng, k: int, spread: float = 0.4) -> np.ndarray:
    """Random weight matrix near the identity with safely nonzero rows."""
    while True:
        point = np.eye(k) + spread * rng.standard_normal((k, k))
        if np.linalg.norm(point, axis=1).min() > 0.2:
            return point
