"""Closed-form planning: envelope, fidelity bound, beta threshold, query and CNOT budgets."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .errors import UnreachableError, ValidationError
from .fpaa_engine import analytic_pl, cheb_gamma


@dataclass(frozen=True)
class PlanInputs:
    gamma0: float
    delta_gap: float
    w_norm: float
    e0: float
    target_f: float
    fpaa_delta: float = 0.1

    def __post_init__(self):
        if not 0.0 <= self.gamma0 <= 1.0:
            raise ValidationError(f"gamma0 must lie in [0, 1], got {self.gamma0}")
        if not 0.0 < self.target_f < 1.0:
            raise ValidationError(f"target fidelity must lie in (0, 1), got {self.target_f}")
        if not 0.0 < self.fpaa_delta < 1.0:
            raise ValidationError(f"FPAA delta must lie in (0, 1), got {self.fpaa_delta}")
        if self.w_norm < 0 or self.w_norm + self.e0 < -1e-9:
            raise ValidationError("need W >= 0 and W + E0 >= 0")


def envelope(gamma0: float, w_norm: float, e0: float, beta: float) -> float:
    """gamma0 * exp(-2 beta (W + E0)), the exact value of P_LCU * F_g."""
    if beta < 0:
        raise ValidationError("beta must be nonnegative")
    return gamma0 * math.exp(-2.0 * beta * (w_norm + e0))


def gap_bound_f(gamma0: float, delta_gap: float, beta: float) -> float:
    if beta < 0:
        raise ValidationError("beta must be nonnegative")
    if not 0.0 <= gamma0 <= 1.0:
        raise ValidationError("gamma0 must lie in [0, 1]")
    if gamma0 == 0.0:
        return 0.0
    return gamma0 / (gamma0 + (1.0 - gamma0) * math.exp(-2.0 * beta * delta_gap))


def beta_star(gamma0: float, delta_gap: float, target_f: float) -> float:
    """Smallest beta for which the gap bound guarantees F_g >= target_f.

    Returns ``math.inf`` when gamma0 == 0 (no finite beta works).
    """
    if not 0.0 < target_f < 1.0:
        raise ValidationError(f"target fidelity must lie in (0, 1), got {target_f}")
    if not 0.0 <= gamma0 <= 1.0:
        raise ValidationError("gamma0 must lie in [0, 1]")
    if gamma0 == 0.0:
        return math.inf
    if gamma0 >= 1.0 or target_f <= gamma0:
        return 0.0
    if not delta_gap > 0.0:
        raise ValidationError("spectral gap must be positive")
    ratio = target_f * (1.0 - gamma0) / (gamma0 * (1.0 - target_f))
    return max(0.0, math.log(ratio) / (2.0 * delta_gap))


def p_sandwich(gamma0: float, w_norm: float, e0: float, beta_s: float,
               target_f: float) -> tuple[float, float]:
    lower = envelope(gamma0, w_norm, e0, beta_s)
    return lower, lower / target_f


def plan_queries(lambda_star: float, fpaa_delta: float = 0.1) -> int:
    """Smallest odd L with analytic_pl(lambda_star, L, delta) >= 1 - delta^2."""
    if not 0.0 < lambda_star <= 1.0:
        if lambda_star == 0.0:
            raise UnreachableError("lambda_star = 0: no finite query depth suffices")
        raise ValidationError(f"lambda_star must lie in (0, 1], got {lambda_star}")
    target = 1.0 - fpaa_delta**2

    def ok(L):
        return analytic_pl(lambda_star, L, fpaa_delta) >= target

    # admissible iff sqrt(1 - lambda) <= gamma_L; invert for a starting point
    x = 1.0 / math.sqrt(1.0 - lambda_star) if lambda_star < 1.0 else math.inf
    if math.isinf(x):
        return 1
    est = math.acosh(1.0 / fpaa_delta) / math.acosh(x) if x > 1.0 else 1.0
    L = max(1, int(math.ceil(est)))
    if L % 2 == 0:
        L += 1
    while L > 1 and ok(L - 2):
        L -= 2
    while not ok(L):
        L += 2
    return L


def asymptotic_queries(lambda_star: float, fpaa_delta: float = 0.1) -> int:
    """ceil(log(2/delta) / sqrt(lambda)), for comparison with the exact depth."""
    if lambda_star <= 0.0:
        raise UnreachableError("lambda_star = 0")
    return int(math.ceil(math.log(2.0 / fpaa_delta) / math.sqrt(lambda_star)))


def state_error_beta(gamma0: float, delta_gap: float, eps: float) -> float:
    """Smallest beta with ||psi(beta) - Pi_G psi0 / sqrt(gamma0)|| <= eps (gap-based bound)."""
    if not 0.0 < gamma0 <= 1.0:
        raise ValidationError("gamma0 must lie in (0, 1]")
    if eps <= 0.0:
        raise ValidationError("eps must be positive")
    if gamma0 >= 1.0 or eps >= math.sqrt(2.0):
        return 0.0
    if eps >= math.sqrt(2.0 - 2.0 * math.sqrt(gamma0)):
        return 0.0
    if not delta_gap > 0.0:
        raise ValidationError("spectral gap must be positive")
    denom = (1.0 - eps * eps / 2.0) ** -2 - 1.0
    value = math.log(((1.0 - gamma0) / gamma0) / denom) / (2.0 * delta_gap)
    return max(0.0, value)


@dataclass(frozen=True)
class CostReport:
    """Leading-order CNOT estimate with unit constants (an ESTIMATE, not a compiled count)."""

    lcu_pass: int
    oracle: int
    reflection: int
    iterations: int
    total: int
    qubits_total: int
    label: str = "ESTIMATE"

    def as_dict(self) -> dict:
        return asdict(self)


def cnot_estimate(n: int, M: int, term_localities: Sequence[int], L: int) -> CostReport:
    if L < 0:
        raise ValidationError("L must be nonnegative")
    lcu_pass = int(sum(term_localities))
    oracle = M * M
    reflection = (M + n) ** 2 + 2
    total = lcu_pass + L * (lcu_pass + oracle + reflection)
    return CostReport(lcu_pass, oracle, reflection, int(L), total, n + M + 1)


@dataclass(frozen=True)
class Plan:
    inputs: PlanInputs
    reachable: bool
    beta_star: float | None = None
    p_lower: float | None = None
    p_upper: float | None = None
    lambda_star: float | None = None
    l_queries: int | None = None
    l_asymptotic: int | None = None
    cnot: CostReport | None = None
    qubits_total: int | None = None
    error_beta: float | None = None
    notes: list[str] = field(default_factory=list)

    def as_json_dict(self) -> dict:
        return {
            "reachable": self.reachable,
            "beta_star": self.beta_star,
            "p_lower": self.p_lower,
            "p_upper": self.p_upper,
            "lambda_star": self.lambda_star,
            "L_exact": self.l_queries,
            "L_asymptotic": self.l_asymptotic,
            "qubits_total": self.qubits_total,
            "cnot_breakdown": self.cnot.as_dict() if self.cnot else None,
            "error_beta": self.error_beta,
            "inputs": asdict(self.inputs),
            "notes": list(self.notes),
        }


def make_plan(inputs: PlanInputs, n: int, term_localities: Sequence[int],
              eps: float | None = None) -> Plan:
    """Assemble beta*, the success sandwich, the FPAA depth and the CNOT estimate."""
    M = len(term_localities)
    qubits = n + M + 1
    if inputs.gamma0 == 0.0:
        return Plan(inputs, reachable=False, qubits_total=qubits,
                    notes=["gamma0 = 0: no finite beta reaches the target fidelity"])
    bs = beta_star(inputs.gamma0, inputs.delta_gap, inputs.target_f)
    lower, upper = p_sandwich(inputs.gamma0, inputs.w_norm, inputs.e0, bs, inputs.target_f)
    lam = lower
    L = plan_queries(lam, inputs.fpaa_delta)
    err = None
    if eps is not None:
        err = state_error_beta(inputs.gamma0, inputs.delta_gap, eps)
    return Plan(
        inputs,
        reachable=True,
        beta_star=bs,
        p_lower=lower,
        p_upper=upper,
        lambda_star=lam,
        l_queries=L,
        l_asymptotic=asymptotic_queries(lam, inputs.fpaa_delta),
        cnot=cnot_estimate(n, M, term_localities, L),
        qubits_total=qubits,
        error_beta=err,
    )


__all__ = [
    "PlanInputs", "Plan", "CostReport", "envelope", "gap_bound_f", "beta_star", "p_sandwich",
    "plan_queries", "asymptotic_queries", "state_error_beta", "cnot_estimate", "make_plan",
    "cheb_gamma",
]
