"""Dense statevector kernels. Qubit q is bit q of the amplitude index."""
import numpy as np


def apply_1q(state: np.ndarray, U: np.ndarray, q: int, total_qubits: int) -> np.ndarray:
    view = state.reshape(2 ** (total_qubits - q - 1), 2, 2**q)
    return np.einsum("ij,ajb->aib", U, view).reshape(-1)


def apply_controlled_diag(state: np.ndarray, control: int, diag: np.ndarray,
                          total_qubits: int) -> np.ndarray:
    """Multiply the low-register amplitudes by ``diag`` where ``control`` is 1.

    ``diag`` acts on the lowest ``log2(len(diag))`` qubits, which must all lie
    below ``control``.
    """
    n_low = int(diag.size).bit_length() - 1
    out = state.copy()
    view = out.reshape(2 ** (total_qubits - control - 1), 2, 2 ** (control - n_low), 2**n_low)
    view[:, 1, :, :] *= diag
    return out


def norm_sq(state: np.ndarray) -> float:
    return float(np.vdot(state, state).real)
