import numpy as np
import pytest

from statelattice import DensityOp, HermOp


@pytest.fixture(scope="session")
def paulis():
    sx = HermOp([[0, 1], [1, 0]])
    sy = HermOp([[0, -1j], [1j, 0]])
    sz = HermOp([[1, 0], [0, -1]])
    return sx, sy, sz


@pytest.fixture(scope="session")
def qubit_projectors():
    return HermOp(np.diag([1.0, 0.0])), HermOp(np.diag([0.0, 1.0]))


def bell_vector(d: int = 2) -> np.ndarray:
    v = np.zeros(d * d, dtype=complex)
    for i in range(d):
        v[i * d + i] = 1.0 / np.sqrt(d)
    return v


@pytest.fixture(scope="session")
def bell_state():
    return DensityOp.pure(bell_vector(2))


def ginibre_density(rng: np.random.Generator, n: int, rank: int) -> DensityOp:
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    m = g @ g.conj().T
    return DensityOp(HermOp(m / float(np.trace(m).real)))
