import numpy as np
import pytest

from core.prob import Channel, Distribution

REFERENCE_MATRIX = [
    [0.259, 0.463, 0.278],
    [0.328, 0.172, 0.500],
    [0.425, 0.225, 0.350],
]


def random_channel(rng: np.random.Generator, n_x: int, n_y: int) -> Channel:
    raw = rng.random((n_x, n_y)) + 1e-3
    return Channel(raw / raw.sum(axis=1, keepdims=True))


def random_distribution(rng: np.random.Generator, n: int) -> Distribution:
    raw = rng.random(n) + 1e-3
    return Distribution(raw / raw.sum())


def bsc(eps: float) -> Channel:
    return Channel([[1 - eps, eps], [eps, 1 - eps]])


def write_matrix(path, matrix) -> str:
    path.write_text("\n".join(",".join(repr(float(v)) for v in row) for row in matrix) + "\n")
    return str(path)


@pytest.fixture
def reference_channel() -> Channel:
    return Channel(REFERENCE_MATRIX)


@pytest.fixture
def identity3() -> Channel:
    return Channel.identity(3)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def reference_csv(tmp_path) -> str:
    return write_matrix(tmp_path / "reference.csv", REFERENCE_MATRIX)


@pytest.fixture
def identity3_csv(tmp_path) -> str:
    return write_matrix(tmp_path / "identity3.csv", np.eye(3))


def cyclic_erasure() -> Channel:
    """Each output is reached from exactly two inputs; C_α = log(3/2) for every α."""
    return Channel([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])


# C_α of REFERENCE_MATRIX as stored (three decimals), by direct maximization of
# the Sibson closed form; the grid oracle agrees in tests/test_oracle.py.
REFERENCE_CAPACITY = {
    1.03: 0.054254966,
    1.5: 0.076248895,
    2.0: 0.097114351,
    5.0: 0.183222557,
}
