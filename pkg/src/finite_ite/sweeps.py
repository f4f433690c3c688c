"""Beta sweeps producing the CSV rows for the ``sweep`` and ``fpaa`` commands."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import ResourceError, ValidationError
from .fpaa_engine import amplify, analytic_pl, ancilla_zero_mask, phase_schedule
from .lcu_engine import analytic_curves, build_lcu_program, outcome_from_joint, simulate_joint
from .pauli_model import PauliHamiltonian, Spectrum
from .state_prep import QuantumState, preparer_for

SWEEP_HEADER = ["beta", "p_lcu", "f_g", "product", "envelope", "rel_err"]
GATE_COLUMNS = ["p_lcu_gate", "f_g_gate"]
FPAA_HEADER = ["beta", "L", "delta", "p_unamp", "p_amp", "p_amp_formula", "f_g", "p_g"]

# amplitude updates allowed per gate-level sweep (points x 2^(n+M) x passes)
GATE_BUDGET = 2**27
FORMULA_TOL = 1e-8


def default_workers() -> int:
    return min(8, os.cpu_count() or 1)


def _ordered_map(fn, items, workers):
    """Map over beta points; results come back in input order whatever the completion order."""
    items = list(items)
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def beta_grid(start: float, stop: float, step: float) -> np.ndarray:
    if start < 0 or stop < start:
        raise ValidationError(f"bad beta grid [{start}, {stop}]")
    if not step > 0:
        raise ValidationError("beta step must be positive")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), 12)


def _check_budget(points: int, qubits: int, passes: int = 1) -> None:
    work = points * 2**qubits * passes
    if work > GATE_BUDGET:
        raise ResourceError(
            f"gate-level sweep over {points} beta points on {qubits} qubits is too large "
            f"({work:.3g} amplitude updates > {GATE_BUDGET:.3g}); use a coarser --beta step"
        )


def lcu_sweep(H: PauliHamiltonian, spec: Spectrum, state: QuantumState, betas,
              gate_level: bool = False, workers: int | None = None) -> list[dict]:
    betas = np.asarray(betas, dtype=float)
    gamma0 = float(np.sum(state.probabilities[spec.ground_indices]))
    p, f = analytic_curves(H, spec, state, betas)
    env = gamma0 * np.exp(-2.0 * betas * (H.W + spec.e0))
    product = p * f
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(env > 0, np.abs(product - env) / env, np.abs(product))
    rows = [
        {"beta": float(b), "p_lcu": float(p[i]), "f_g": float(f[i]),
         "product": float(product[i]), "envelope": float(env[i]), "rel_err": float(rel[i])}
        for i, b in enumerate(betas)
    ]
    if gate_level:
        _check_budget(betas.size, H.n + H.M)

        def gate_point(b):
            return outcome_from_joint(simulate_joint(H, state, float(b)), H.n, spec)

        for row, out in zip(rows, _ordered_map(gate_point, betas, workers)):
            row["p_lcu_gate"] = out.p_success
            row["f_g_gate"] = out.f_ground
    return rows


def fpaa_sweep(H: PauliHamiltonian, spec: Spectrum, state: QuantumState, betas, Ls,
               delta: float = 0.1, pairs=None, workers: int | None = None) -> list[dict]:
    """Rows ordered by L then beta. L = 0 means no amplification.

    Each row also carries l = (L - 1) / 2 (phase pairs); it appears in JSON
    output while the CSV keeps the fixed FPAA_HEADER columns.
    """
    betas = np.asarray(betas, dtype=float)
    for L in Ls:
        if L != 0 and (L < 0 or L % 2 == 0):
            raise ValidationError(f"L must be 0 or a positive odd integer, got {L}")
    passes = sum(max(L, 1) for L in Ls)
    _check_budget(betas.size, H.n + H.M, passes)
    p_un, f_un = analytic_curves(H, spec, state, betas)
    preparer = preparer_for(state, pairs)
    mask = ancilla_zero_mask(H.n, H.M)
    schedules = {L: phase_schedule(L, delta) for L in Ls if L > 0}

    def point(task):
        L, i = task
        b = float(betas[i])
        if L == 0:
            p_amp = p_form = float(p_un[i])
            f = float(f_un[i])
        else:
            out = amplify(build_lcu_program(H, b), preparer, mask, schedules[L], spec)
            p_amp, f = out.p_amplified, out.f_ground
            p_form = analytic_pl(float(p_un[i]), L, delta)
        return {
            "beta": b, "L": int(L), "l": (int(L) - 1) // 2 if L > 0 else 0,
            "delta": float(delta), "p_unamp": float(p_un[i]),
            "p_amp": p_amp, "p_amp_formula": p_form, "f_g": f, "p_g": p_amp * f,
        }

    tasks = [(int(L), i) for L in Ls for i in range(betas.size)]
    return _ordered_map(point, tasks, workers)


def flagged_rows(rows: list[dict], tol: float = FORMULA_TOL) -> int:
    return sum(1 for r in rows if abs(r["p_amp"] - r["p_amp_formula"]) > tol)
