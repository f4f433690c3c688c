"""Termwise-LCU block-encoding of exp(-beta W) exp(-beta H).

Two independent routes are provided:

``analytic_outcome``
    closed-form success probability, ground fidelity and post-selected state
    from the diagonal spectrum;
``run_gate_level``
    simulation of the ancilla-rotation / controlled-Z-string / rotation
    program on the joint (system + M ancilla) register followed by
    post-selection of all ancillas on |0>.

Joint-register layout: system qubits occupy indices 0..n-1, the ancilla of
term ``mu`` is qubit ``n + mu``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import limits
from .errors import ValidationError
from .pauli_model import PauliHamiltonian, PauliTerm, Spectrum, index_to_bits, parity_signs, spectrum
from .state_prep import QuantumState
from .statevector import apply_1q, apply_controlled_diag

# ---------------------------------------------------------------------------
# blocks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LcuBlock:
    """One two-unitary block: alpha_w * I - gamma_w * sgn(x) * sigma."""

    term: PauliTerm
    beta: float

    @property
    def y(self) -> float:
        return self.beta * abs(self.term.coeff)

    @property
    def alpha_w(self) -> float:
        return 0.5 * (1.0 + math.exp(-2.0 * self.y))

    @property
    def gamma_w(self) -> float:
        # -expm1 keeps full relative precision as beta -> 0
        return -0.5 * math.expm1(-2.0 * self.y)

    @property
    def kappa(self) -> float:
        """coth(beta |x|); infinite at beta = 0. Reporting only."""
        g = self.gamma_w
        return math.inf if g == 0.0 else self.alpha_w / g

    @property
    def sign(self) -> float:
        return math.copysign(1.0, self.term.coeff)

    def rotation(self) -> np.ndarray:
        a, g = math.sqrt(self.alpha_w), math.sqrt(self.gamma_w)
        return np.array([[a, -g], [g, a]])

    def block_matrix(self, n: int) -> np.ndarray:
        """Diagonal of the encoded n-qubit block (alpha_w - gamma_w sgn(x) sigma)."""
        return self.alpha_w - self.gamma_w * self.sign * parity_signs(self.term.mask, n)


@dataclass(frozen=True)
class Rotation:
    qubit: int
    matrix: np.ndarray = field(repr=False)

    def describe(self) -> dict:
        return {"gate": "rot", "qubit": self.qubit, "matrix": self.matrix.tolist()}


@dataclass(frozen=True)
class ControlledZString:
    """Ancilla-controlled application of sign * sigma_mask on the system register."""

    control: int
    mask: int
    sign: float

    def describe(self) -> dict:
        qs = [i for i in range(self.mask.bit_length()) if (self.mask >> i) & 1]
        return {"gate": "c-zstring", "control": self.control, "targets": qs, "sign": self.sign}


class UnitaryProgram:
    """Ordered gate list on the joint register; real orthogonal by construction."""

    def __init__(self, n: int, M: int, gates: list, blocks: list[LcuBlock]):
        self.n = n
        self.M = M
        self.gates = gates
        self.blocks = blocks
        self._diag_cache: dict[int, np.ndarray] = {}

    @property
    def total_qubits(self) -> int:
        return self.n + self.M

    def ancilla_of(self, term_index: int) -> int:
        return self.n + term_index

    def _diag(self, gate: ControlledZString) -> np.ndarray:
        d = self._diag_cache.get(gate.control)
        if d is None:
            d = gate.sign * parity_signs(gate.mask, self.n)
            self._diag_cache[gate.control] = d
        return d

    def _apply_gate(self, state, gate, adjoint=False):
        if isinstance(gate, Rotation):
            U = gate.matrix.T if adjoint else gate.matrix
            return apply_1q(state, U, gate.qubit, self.total_qubits)
        return apply_controlled_diag(state, gate.control, self._diag(gate), self.total_qubits)

    def apply(self, state: np.ndarray) -> np.ndarray:
        for gate in self.gates:
            state = self._apply_gate(state, gate)
        return state

    def apply_adjoint(self, state: np.ndarray) -> np.ndarray:
        for gate in reversed(self.gates):
            state = self._apply_gate(state, gate, adjoint=True)
        return state

    def iter_apply(self, state: np.ndarray):
        """Yield the state after every gate (used for norm checks)."""
        for gate in self.gates:
            state = self._apply_gate(state, gate)
            yield gate, state

    def describe(self) -> list[dict]:
        return [g.describe() for g in self.gates]


def _check_beta(beta: float) -> None:
    if not beta >= 0.0:
        raise ValidationError(f"beta must be nonnegative, got {beta}")


def build_lcu_program(H: PauliHamiltonian, beta: float) -> UnitaryProgram:
    _check_beta(beta)
    limits.check(H.n + H.M, limits.joint_cap(), "joint LCU register")
    gates: list = []
    blocks = []
    for mu, term in enumerate(H.terms):
        block = LcuBlock(term, beta)
        blocks.append(block)
        anc = H.n + mu
        V = block.rotation()
        gates.append(Rotation(anc, V))
        gates.append(ControlledZString(anc, term.mask, -block.sign))
        gates.append(Rotation(anc, V.T))
    return UnitaryProgram(H.n, H.M, gates, blocks)


# ---------------------------------------------------------------------------
# outcomes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LcuOutcome:
    p_success: float
    post_state: QuantumState | None  # None when p_success underflows to zero
    f_ground: float
    log_p_success: float = -math.inf


def analytic_outcome(H: PauliHamiltonian, spec: Spectrum, state: QuantumState,
                     beta: float, with_state: bool = True) -> LcuOutcome:
    """Closed-form P_LCU, F_g and normalized post-selected state."""
    _check_beta(beta)
    if state.dim != spec.energies.size:
        raise ValidationError("state dimension does not match spectrum")
    probs = state.probabilities
    shifted = spec.energies - spec.e0  # >= 0
    weights = np.exp(-2.0 * beta * shifted)
    z = float(np.dot(probs, weights))  # partition sum with e^{-2 beta E0} factored out
    gamma0 = float(np.sum(probs[spec.ground_indices]))
    W = H.W
    if z > 0.0:
        log_p = -2.0 * beta * (W + spec.e0) + math.log(z)
        f_ground = gamma0 / z
    else:
        log_p = -math.inf
        f_ground = 0.0
    p = min(math.exp(log_p), 1.0)
    post = None
    if with_state and z > 0.0:
        amps = state.amplitudes * np.exp(-beta * shifted)
        amps = amps / math.sqrt(z)
        amps = amps / np.linalg.norm(amps)
        post = QuantumState(state.n_qubits, amps)
    return LcuOutcome(p, post, f_ground, log_p)


def analytic_curves(H: PauliHamiltonian, spec: Spectrum, state: QuantumState,
                    betas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized P_LCU(beta), F_g(beta) over a grid."""
    betas = np.asarray(betas, dtype=float)
    if np.any(betas < 0):
        raise ValidationError("beta grid must be nonnegative")
    probs = state.probabilities
    shifted = spec.energies - spec.e0
    # group by distinct energy level to keep the matrix small
    levels, inverse = np.unique(shifted, return_inverse=True)
    level_w = np.bincount(inverse, weights=probs, minlength=levels.size)
    z = np.exp(-2.0 * np.outer(betas, levels)) @ level_w
    gamma0 = float(np.sum(probs[spec.ground_indices]))
    with np.errstate(divide="ignore"):
        log_p = -2.0 * betas * (H.W + spec.e0) + np.log(z)
    p = np.minimum(np.exp(log_p), 1.0)
    f = np.where(z > 0, gamma0 / np.where(z > 0, z, 1.0), 0.0)
    return p, f


def initial_joint(state: QuantumState, M: int) -> np.ndarray:
    joint = np.zeros(2 ** (state.n_qubits + M), dtype=complex)
    joint[: state.dim] = state.amplitudes
    return joint


def simulate_joint(H: PauliHamiltonian, state: QuantumState, beta: float,
                   program: UnitaryProgram | None = None) -> np.ndarray:
    if state.n_qubits != H.n:
        raise ValidationError(f"state has {state.n_qubits} qubits, Hamiltonian has {H.n}")
    program = program or build_lcu_program(H, beta)
    return program.apply(initial_joint(state, H.M))


def outcome_from_joint(joint: np.ndarray, n: int, spec: Spectrum) -> LcuOutcome:
    good = joint[: 2**n]
    p = float(np.vdot(good, good).real)
    if p <= 0.0:
        return LcuOutcome(0.0, None, 0.0)
    post = good / math.sqrt(p)
    post = post / np.linalg.norm(post)
    f = float(np.sum(np.abs(post[spec.ground_indices]) ** 2))
    return LcuOutcome(min(p, 1.0), QuantumState(n, post), f, math.log(p))


def run_gate_level(H: PauliHamiltonian, state: QuantumState, beta: float,
                   spec: Spectrum | None = None) -> LcuOutcome:
    spec = spec or spectrum(H)
    joint = simulate_joint(H, state, beta)
    return outcome_from_joint(joint, H.n, spec)


def fidelity(a: QuantumState, b: QuantumState) -> float:
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


# ---------------------------------------------------------------------------
# shot sampling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShotReport:
    shots: int
    seed: int
    successes: int
    ground_hits: int
    histogram: dict[str, int]
    beta: float | None = None

    def to_json(self) -> str:
        payload = {
            "shots": self.shots,
            "seed": self.seed,
            "successes": self.successes,
            "ground_hits": self.ground_hits,
            "histogram": self.histogram,
        }
        if self.beta is not None:
            payload["beta"] = self.beta
        return json.dumps(payload, sort_keys=True, indent=2)

    @property
    def success_fraction(self) -> float:
        return self.successes / self.shots

    @property
    def ground_fraction(self) -> float:
        """Ground hits conditioned on LCU success (nan when nothing succeeded)."""
        return self.ground_hits / self.successes if self.successes else math.nan


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based Philox stream; identical seeds give identical draws."""
    return np.random.Generator(np.random.Philox(int(seed)))


def sample_joint(probs: np.ndarray, shots: int, seed: int) -> np.ndarray:
    """Inverse-CDF sampling of basis indices."""
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    u = make_rng(seed).random(shots)
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, probs.size - 1)


def sample_shots(H: PauliHamiltonian, state: QuantumState, beta: float, shots: int,
                 seed: int = 0, spec: Spectrum | None = None) -> ShotReport:
    """Measure every qubit of the joint register ``shots`` times.

    Histogram keys are joint bitstrings: the n system characters followed by
    the M ancilla characters, each in qubit order.
    """
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    spec = spec or spectrum(H)
    joint = simulate_joint(H, state, beta)
    probs = np.abs(joint) ** 2
    outcomes = sample_joint(probs, shots, seed)
    n, M = H.n, H.M
    sys_mask = 2**n - 1
    success = (outcomes >> n) == 0
    ground = spec.ground_mask()[outcomes & sys_mask]
    values, counts = np.unique(outcomes, return_counts=True)
    hist = {index_to_bits(int(v), n + M): int(c) for v, c in zip(values, counts)}
    return ShotReport(
        shots=int(shots),
        seed=int(seed),
        successes=int(success.sum()),
        ground_hits=int((success & ground).sum()),
        histogram=dict(sorted(hist.items())),
        beta=float(beta),
    )
