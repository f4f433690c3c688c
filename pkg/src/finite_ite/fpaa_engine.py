"""Fixed-point amplitude amplification of the LCU success event.

The amplified state is

    G_l ... G_1 A |0>,   G_j = S_s(alpha_j) S_good(beta_j)

with S_good(beta) multiplying marked amplitudes by exp(-i beta) and
S_s(alpha) = A S_0(alpha) A^dagger, where S_0 multiplies the all-zero joint
amplitude by exp(i alpha). This ordering and sign choice is the one whose
simulated success probability reproduces ``analytic_pl`` exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .lcu_engine import UnitaryProgram, build_lcu_program
from .pauli_model import PauliHamiltonian, Spectrum, spectrum
from .state_prep import QuantumState, preparer_for


def chebyshev_t(order: float, x: float) -> float:
    """T_order(x) = cos(order * arccos x), continued as cosh(order * arccosh x) for x > 1.

    Integer orders also accept x < -1 through T_L(-x) = (-1)^L T_L(x).
    Fractional orders require x >= 1.
    """
    if order <= 0:
        raise ValidationError("Chebyshev order must be positive")
    integral = float(order).is_integer()
    if not integral and x < 1.0:
        raise ValidationError(f"fractional order {order} needs x >= 1, got {x}")
    if abs(x) <= 1.0:
        return math.cos(order * math.acos(x))
    if x > 1.0:
        return math.cosh(order * math.acosh(x))
    return (-1.0) ** int(order) * math.cosh(order * math.acosh(-x))


def arccot(x: float) -> float:
    """Inverse cotangent on the (0, pi) branch."""
    return math.pi / 2.0 - math.atan(x)


@dataclass(frozen=True)
class FpaaSchedule:
    L: int
    delta: float
    gamma_cheb: float
    alphas: tuple[float, ...]
    betas: tuple[float, ...]

    @property
    def l(self) -> int:
        return (self.L - 1) // 2


def _check_L_delta(L: int, delta: float) -> None:
    if int(L) != L or L < 1 or L % 2 == 0:
        raise ValidationError(f"query depth L must be an odd integer >= 1, got {L}")
    if not 0.0 < delta < 1.0:
        raise ValidationError(f"delta must lie in (0, 1), got {delta}")


def cheb_gamma(L: int, delta: float) -> float:
    return 1.0 / chebyshev_t(1.0 / L, 1.0 / delta)


def phase_schedule(L: int, delta: float = 0.1) -> FpaaSchedule:
    _check_L_delta(L, delta)
    gamma = cheb_gamma(L, delta)
    l = (L - 1) // 2
    root = math.sqrt(max(0.0, 1.0 - gamma * gamma))
    alphas = tuple(2.0 * arccot(math.tan(2.0 * math.pi * j / L) * root) for j in range(1, l + 1))
    betas = tuple(-alphas[l - j] for j in range(1, l + 1))
    return FpaaSchedule(int(L), float(delta), gamma, alphas, betas)


def analytic_pl(lam: float, L: int, delta: float = 0.1) -> float:
    """Amplified success probability 1 - delta^2 T_L(sqrt(1-lam)/gamma)^2."""
    _check_L_delta(L, delta)
    lam = min(max(float(lam), 0.0), 1.0)
    if L == 1:
        return lam
    gamma = cheb_gamma(L, delta)
    t = chebyshev_t(L, math.sqrt(1.0 - lam) / gamma)
    return min(1.0, max(0.0, 1.0 - delta * delta * t * t))


@dataclass(frozen=True)
class AmplifiedOutcome:
    p_amplified: float
    f_ground: float
    p_g: float
    p_unamplified: float
    f_ground_unamplified: float
    post_state: QuantumState | None = None


def ancilla_zero_mask(n: int, M: int) -> np.ndarray:
    """Boolean mask over the joint register marking all-ancillas-zero states."""
    mask = np.zeros(2 ** (n + M), dtype=bool)
    mask[: 2**n] = True
    return mask


def _good_stats(joint, good_mask, n, spec):
    good = joint[good_mask]
    p = float(np.vdot(good, good).real)
    if p <= 0.0:
        return p, 0.0, None
    post = good / math.sqrt(p)
    post = post / np.linalg.norm(post)
    f = float(np.sum(np.abs(post[spec.ground_indices]) ** 2))
    return p, f, QuantumState(n, post)


def amplify(program: UnitaryProgram, preparer, good_mask: np.ndarray,
            schedule: FpaaSchedule, spec: Spectrum) -> AmplifiedOutcome:
    """Run the phase-matched sequence on the joint register.

    ``preparer`` maps |0>^n to the initial system state (see
    ``state_prep.preparer_for``). ``good_mask`` must mark exactly the
    all-ancillas-zero subspace.
    """
    n, N = program.n, program.total_qubits
    if good_mask.shape != (2**N,):
        raise ValidationError(f"good mask has shape {good_mask.shape}, register needs {(2**N,)}")
    if preparer.n != n or spec.energies.size != 2**n:
        raise ValidationError("preparer/spectrum do not match the program's system register")
    if not np.array_equal(good_mask, ancilla_zero_mask(n, program.M)):
        raise ValidationError("good mask must mark the all-ancillas-zero subspace")

    def A(v):
        return program.apply(preparer.apply(v, N))

    def A_dag(v):
        return preparer.apply_adjoint(program.apply_adjoint(v), N)

    zero = np.zeros(2**N, dtype=complex)
    zero[0] = 1.0
    joint = A(zero)
    p0, f0, _ = _good_stats(joint, good_mask, n, spec)
    for alpha, beta in zip(schedule.alphas, schedule.betas):
        joint = np.where(good_mask, joint * np.exp(-1j * beta), joint)
        joint = A_dag(joint)
        joint[0] *= np.exp(1j * alpha)
        joint = A(joint)
    p, f, post = _good_stats(joint, good_mask, n, spec)
    return AmplifiedOutcome(min(p, 1.0), f, min(p, 1.0) * f, p0, f0, post)


def amplify_lcu(H: PauliHamiltonian, state: QuantumState, beta: float, schedule: FpaaSchedule,
                spec: Spectrum | None = None, pairs=None) -> AmplifiedOutcome:
    """Convenience wrapper: build the program, preparer and mask for one beta.

    ``pairs`` gives per-qubit (amp0, amp1) when the initial state is a product
    state; otherwise a Householder preparer is used.
    """
    spec = spec or spectrum(H)
    if state.n_qubits != H.n:
        raise ValidationError("state and Hamiltonian sizes differ")
    program = build_lcu_program(H, beta)
    return amplify(program, preparer_for(state, pairs), ancilla_zero_mask(H.n, H.M), schedule, spec)
