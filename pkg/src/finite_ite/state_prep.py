"""Initial states and their overlap with the ground subspace."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import limits
from .errors import ValidationError
from .pauli_model import Spectrum, bits_to_index, index_to_bits
from .statevector import apply_1q

NORM_TOL = 1e-12


@dataclass(frozen=True)
class QuantumState:
    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.n_qubits,):
            raise ValidationError(
                f"expected {2**self.n_qubits} amplitudes for {self.n_qubits} qubits, got {amps.shape}"
            )
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"state is not normalized (norm^2 = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


@dataclass(frozen=True)
class WarmStartSpec:
    """Bias every qubit toward ``target`` with probability ``p``."""

    target: str
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"warm-start bias p must lie in [0, 1], got {self.p}")
        if any(c not in "01" for c in self.target):
            raise ValidationError(f"warm-start target must be a 0/1 string, got {self.target!r}")


def arbitrary_state(amplitudes: Sequence[complex], normalize: bool = True) -> QuantumState:
    amps = np.asarray(amplitudes, dtype=complex)
    n = int(round(np.log2(amps.size))) if amps.size else -1
    if n < 0 or 2**n != amps.size:
        raise ValidationError(f"amplitude count {amps.size} is not a power of two")
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise ValidationError("zero amplitude vector")
    if normalize:
        amps = amps / norm
    return QuantumState(n, amps)


def uniform_state(n: int) -> QuantumState:
    limits.check(n, limits.system_cap(), "uniform state")
    return QuantumState(n, np.full(2**n, 2.0 ** (-n / 2), dtype=complex))


def product_state(single_qubit: Sequence[Sequence[float]]) -> QuantumState:
    """Tensor product of per-qubit (amp0, amp1) pairs, qubit 0 first."""
    vec = np.ones(1, dtype=complex)
    for pair in single_qubit:
        # qubit i is the more significant factor as i grows
        vec = np.kron(np.asarray(pair, dtype=complex), vec)
    n = len(single_qubit)
    vec = vec / np.linalg.norm(vec)
    return QuantumState(n, vec)


def warm_start_amplitudes(spec: WarmStartSpec) -> list[tuple[float, float]]:
    """Per-qubit real (amp0, amp1) for the R_y warm start."""
    hi, lo = np.sqrt(spec.p), np.sqrt(1.0 - spec.p)
    return [(hi, lo) if c == "0" else (lo, hi) for c in spec.target]


def warm_start(n: int, spec: WarmStartSpec) -> QuantumState:
    if len(spec.target) != n:
        raise ValidationError(f"g* has {len(spec.target)} bits but n={n}")
    limits.check(n, limits.system_cap(), "warm start")
    return product_state(warm_start_amplitudes(spec))


def ground_overlap(state: QuantumState, spec: Spectrum) -> float:
    if state.dim != spec.energies.size:
        raise ValidationError(
            f"state dimension {state.dim} does not match spectrum dimension {spec.energies.size}"
        )
    return float(np.sum(state.probabilities[spec.ground_indices]))


def warm_overlap_closed_form(ground_set: Sequence[str], gstar: str, p: float, n: int) -> float:
    """sum over ground states g of p^(n-d) (1-p)^d with d the Hamming distance to g*."""
    if len(gstar) != n:
        raise ValidationError(f"g* has {len(gstar)} bits but n={n}")
    ref = bits_to_index(gstar, n)
    total = 0.0
    for g in ground_set:
        d = bin(bits_to_index(g, n) ^ ref).count("1")
        total += p ** (n - d) * (1.0 - p) ** d
    return total


def auto_gstar(spec: Spectrum) -> str:
    """Lexicographically smallest ground bitstring (deterministic tie-break)."""
    return min(index_to_bits(int(i), spec.n) for i in spec.ground_indices)


# ---------------------------------------------------------------------------
# preparation unitaries (used by amplitude amplification)
# ---------------------------------------------------------------------------


class ProductPreparer:
    """Per-qubit real rotations mapping |0...0> to a product state.

    Each qubit gets [[a0, -a1], [a1, a0]], an R_y rotation when (a0, a1) is
    real and nonnegative.
    """

    def __init__(self, pairs: Sequence[Sequence[float]]):
        self.n = len(pairs)
        self.matrices = []
        for a0, a1 in pairs:
            a0, a1 = float(np.real(a0)), float(np.real(a1))
            r = np.hypot(a0, a1)
            a0, a1 = a0 / r, a1 / r
            self.matrices.append(np.array([[a0, -a1], [a1, a0]]))

    def apply(self, joint: np.ndarray, total_qubits: int) -> np.ndarray:
        for q, U in enumerate(self.matrices):
            joint = apply_1q(joint, U, q, total_qubits)
        return joint

    def apply_adjoint(self, joint: np.ndarray, total_qubits: int) -> np.ndarray:
        for q, U in enumerate(self.matrices):
            joint = apply_1q(joint, U.T, q, total_qubits)
        return joint


class HouseholderPreparer:
    """phase * (I - 2|v><v|) on the system register, sending |0> exactly to |psi>.

    Works for any state, including complex amplitudes.
    """

    def __init__(self, state: QuantumState):
        self.n = state.n_qubits
        psi = np.asarray(state.amplitudes, dtype=complex)
        self.phase = np.exp(1j * np.angle(psi[0])) if abs(psi[0]) > 0 else 1.0
        # the reflection swaps phase|0> and |psi>
        v = -psi.copy()
        v[0] += self.phase
        norm = np.linalg.norm(v)
        self.v = v / norm if norm > 1e-15 else None

    def _reflect(self, joint: np.ndarray) -> np.ndarray:
        if self.v is None:
            return joint
        mat = joint.reshape(-1, 2**self.n)
        proj = mat @ self.v.conj()
        return (mat - 2.0 * np.outer(proj, self.v)).reshape(-1)

    def apply(self, joint: np.ndarray, total_qubits: int) -> np.ndarray:
        return self.phase * self._reflect(joint)

    def apply_adjoint(self, joint: np.ndarray, total_qubits: int) -> np.ndarray:
        return np.conj(self.phase) * self._reflect(joint)


def preparer_for(state: QuantumState, pairs: Sequence[Sequence[float]] | None = None):
    """Product rotations when per-qubit amplitudes are known, else a Householder reflection."""
    if pairs is not None:
        return ProductPreparer(pairs)
    return HouseholderPreparer(state)


def uniform_pairs(n: int) -> list[tuple[float, float]]:
    h = 1.0 / np.sqrt(2.0)
    return [(h, h)] * n
