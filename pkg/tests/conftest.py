import numpy as np
import pytest

from mpsprep.mps import AmplitudeVector


def random_state(num_qubits: int, rng: np.random.Generator) -> AmplitudeVector:
    """Dense Haar-like random state."""
    v = rng.normal(size=2**num_qubits) + 1j * rng.normal(size=2**num_qubits)
    return AmplitudeVector.from_array(v / np.linalg.norm(v))


def random_product_state(num_qubits: int, rng: np.random.Generator) -> AmplitudeVector:
    """Tensor product of random single-qubit states."""
    v = np.array([1.0 + 0j])
    for _ in range(num_qubits):
        a = rng.normal(size=2) + 1j * rng.normal(size=2)
        v = np.kron(v, a / np.linalg.norm(a))
    return AmplitudeVector.from_array(v)


def ghz(num_qubits: int) -> AmplitudeVector:
    amps = np.zeros(2**num_qubits)
    amps[0] = amps[-1] = 2**-0.5
    return AmplitudeVector.from_array(amps)


def bell() -> AmplitudeVector:
    return AmplitudeVector.from_array([2**-0.5, 0.0, 0.0, 2**-0.5])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
