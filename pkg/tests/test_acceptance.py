"""Acceptance criteria, one test each; run with ``pytest tests/test_acceptance.py -s``."""
import math
import time

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from conftest import random_instances
from finite_ite.cli import main
from finite_ite.fpaa_engine import analytic_pl, phase_schedule
from finite_ite.lcu_engine import analytic_curves, analytic_outcome, fidelity, run_gate_level, sample_shots
from finite_ite.pauli_model import limit_projector_rank, maxcut_hamiltonian, spectrum
from finite_ite.planner import beta_star, gap_bound_f, p_sandwich, state_error_beta
from finite_ite.state_prep import WarmStartSpec, auto_gstar, ground_overlap, uniform_pairs, uniform_state, warm_start
from finite_ite.sweeps import beta_grid, fpaa_sweep, lcu_sweep

RANDOM_SET = random_instances(100, seed=2024)


def _max_rel(rows):
    return max(r["rel_err"] for r in rows)


def test_c1_maxcut_identity(maxcut, maxcut_spec, report):
    t0 = time.perf_counter()
    rows = lcu_sweep(maxcut, maxcut_spec, uniform_state(5), beta_grid(0, 2, 0.001))
    elapsed = time.perf_counter() - t0
    b = np.array([r["beta"] for r in rows])
    prod = np.array([r["product"] for r in rows])
    err = float(np.max(np.abs(prod - 3 / 16 * np.exp(-4 * b)) / (3 / 16 * np.exp(-4 * b))))
    ok = len(rows) == 2001 and err <= 1e-12 and elapsed < 1.0
    assert report("C1 MaxCut identity", ok,
                  f"max rel err {err:.2e} (tol 1e-12), {len(rows)} rows, {elapsed:.3f}s (target < 1s)")


def test_c2_maxcut_gate_level(maxcut, maxcut_spec, report):
    psi = uniform_state(5)
    t0 = time.perf_counter()
    worst_p = worst_f = 0.0
    for b in beta_grid(0, 2, 0.01):
        a = analytic_outcome(maxcut, maxcut_spec, psi, float(b))
        g = run_gate_level(maxcut, psi, float(b), maxcut_spec)
        worst_p = max(worst_p, abs(g.p_success - a.p_success) / a.p_success)
        worst_f = max(worst_f, 1 - fidelity(g.post_state, a.post_state))
    elapsed = time.perf_counter() - t0
    ok = worst_p <= 1e-10 and worst_f <= 1e-10 and elapsed < 30
    assert report("C2 MaxCut gate-level", ok,
                  f"max rel dP {worst_p:.2e}, max 1-fidelity {worst_f:.2e} (tol 1e-10), "
                  f"201 points on 10 qubits, {elapsed:.2f}s (target < 30s)")


def test_c3_hubo_identity(hubo, hubo_spec, report):
    psi = uniform_state(8)
    t0 = time.perf_counter()
    rows = lcu_sweep(hubo, hubo_spec, psi, beta_grid(0, 3, 0.001))
    b = np.array([r["beta"] for r in rows])
    prod = np.array([r["product"] for r in rows])
    ref = np.exp(-9.6 * b) / 32
    err = float(np.max(np.abs(prod - ref) / ref))
    worst = 0.0
    for beta in (0.0, 0.5, 1.0, 2.0):
        a = analytic_outcome(hubo, hubo_spec, psi, beta)
        g = run_gate_level(hubo, psi, beta, hubo_spec)
        worst = max(worst, abs(g.p_success - a.p_success) / a.p_success,
                    1 - fidelity(g.post_state, a.post_state))
    elapsed = time.perf_counter() - t0
    qubits = hubo.n + hubo.M
    ok = err <= 1e-10 and worst <= 1e-8 and elapsed < 120
    assert report("C3 HUBO identity", ok,
                  f"max rel err {err:.2e} (tol 1e-10); gate-level spot checks on {qubits}-qubit "
                  f"joint register (+1 FPAA flag = {qubits + 1}) worst {worst:.2e} (tol 1e-8); {elapsed:.2f}s")


def test_c4_initial_state_regimes(hubo, hubo_spec, report):
    g = auto_gstar(hubo_spec)
    inits = {"uniform": uniform_state(8),
             "warm p=0.6": warm_start(8, WarmStartSpec(g, 0.6)),
             "warm p=0.85": warm_start(8, WarmStartSpec(g, 0.85))}
    expected = {"uniform": 1 / 32, "warm p=0.6": 0.041, "warm p=0.85": 0.29}
    betas = beta_grid(0, 3, 0.001)
    ok = True
    parts = []
    for name, psi in inits.items():
        gamma0 = ground_overlap(psi, hubo_spec)
        p, f = analytic_curves(hubo, hubo_spec, psi, betas)
        slope, icpt = np.polyfit(betas, np.log(p * f), 1)
        pref = math.exp(icpt)
        ok &= abs(slope + 9.6) <= 1e-6
        ok &= abs(pref - gamma0) <= 1e-9
        tol = 1e-12 if name == "uniform" else 0.005
        ok &= abs(gamma0 - expected[name]) <= tol
        parts.append(f"{name}: slope {slope:.9f}, prefactor {pref:.5f}, gamma0 {gamma0:.5f}")
    assert report("C4 initial-state regimes", bool(ok), "; ".join(parts))


def test_c5_beta_star(maxcut, maxcut_spec, hubo, hubo_spec, report):
    vals = [beta_star(3 / 16, maxcut_spec.delta, F) for F in (0.5, 0.9, 0.98)]
    ok = all(abs(v - e) <= 0.01 for v, e in zip(vals, (0.37, 0.92, 1.34)))
    checked = 0
    cases = [(maxcut, maxcut_spec, uniform_state(5)), (hubo, hubo_spec, uniform_state(8))]
    cases += [(H, spectrum(H), psi) for H, psi, _ in RANDOM_SET]
    worst = math.inf
    for H, spec, psi in cases:
        g0 = ground_overlap(psi, spec)
        for F in (0.5, 0.9, 0.98):
            bs = beta_star(g0, spec.delta, F)
            f = analytic_outcome(H, spec, psi, bs, with_state=False).f_ground
            worst = min(worst, f - F)
            checked += 1
    ok = ok and worst >= -1e-9
    assert report("C5 beta*", ok,
                  f"MaxCut beta* = {', '.join(f'{v:.4f}' for v in vals)} (expected 0.37/0.92/1.34 +-0.01); "
                  f"min F_g(beta*) - F = {worst:.3e} over {checked} (instance, F) pairs")


@pytest.fixture(scope="module")
def fpaa_rows(maxcut, maxcut_spec):
    return fpaa_sweep(maxcut, maxcut_spec, uniform_state(5), beta_grid(0, 2, 0.05), [1, 5, 9, 15],
                      0.1, uniform_pairs(5))


def test_c6_fpaa_agreement(fpaa_rows, report):
    dp = max(abs(r["p_amp"] - r["p_amp_formula"]) for r in fpaa_rows)
    base = {r["beta"]: r["f_g"] for r in fpaa_rows if r["L"] == 1}
    df = max(abs(r["f_g"] - base[r["beta"]]) for r in fpaa_rows)
    # fixed point on circuit rows and on a dense lambda grid through the formula
    fp_ok = True
    for r in fpaa_rows:
        if r["L"] > 1:
            g = phase_schedule(r["L"], 0.1).gamma_cheb
            if r["p_unamp"] >= 1 - g * g:
                fp_ok &= r["p_amp"] >= 0.99 - 1e-12
    for L in (5, 9, 15):
        g = phase_schedule(L, 0.1).gamma_cheb
        for lam in np.linspace(1 - g * g, 1, 2001):
            fp_ok &= analytic_pl(lam, L, 0.1) >= 0.99 - 1e-12
    ok = dp <= 1e-8 and df <= 1e-10 and fp_ok
    assert report("C6 FPAA circuit/formula", bool(ok),
                  f"max |P_circ - P_formula| {dp:.2e} (tol 1e-8), max fidelity shift {df:.2e} "
                  f"(tol 1e-10), fixed-point guarantee {'holds' if fp_ok else 'violated'}")


def test_c6_qualitative_l15_window(fpaa_rows, report):
    window = [r for r in fpaa_rows if r["L"] == 15 and 1.4 - 1e-9 <= r["beta"] <= 2.0 + 1e-9]
    low = min(window, key=lambda r: r["p_g"])
    ok = low["p_g"] >= 0.95
    g = phase_schedule(15, 0.1).gamma_cheb
    # no 15-query amplification of any schedule can beat sin^2(15 asin sqrt(lambda))
    grover_cap = math.sin(15 * math.asin(math.sqrt(low["p_unamp"]))) ** 2
    assert report("C6b L=15 p_g >= 0.95 on [1.4, 2]", ok,
                  f"min p_g {low['p_g']:.4f} at beta {low['beta']:.2f}; P_LCU there "
                  f"{low['p_unamp']:.2e} is below the L=15 threshold 1-gamma^2 = {1 - g * g:.4f}; "
                  f"15-query Grover ceiling {grover_cap:.4f}")


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(range(len(RANDOM_SET))), st.floats(0, 4))
def _bounds_property(k, beta):
    H, psi, _ = RANDOM_SET[k]
    spec = spectrum(H)
    g0 = ground_overlap(psi, spec)
    out = analytic_outcome(H, spec, psi, beta)
    assert out.p_success >= math.exp(-4 * beta * H.W) * (1 - 1e-12)
    assert out.f_ground >= gap_bound_f(g0, spec.delta, beta) - 1e-12
    assert H.W + spec.e0 >= -1e-12
    p, f = analytic_curves(H, spec, psi, np.array([beta, beta + 0.1]))
    assert p[1] <= p[0] * (1 + 1e-12) and f[1] >= f[0] - 1e-12
    for F in (0.5, 0.9):
        bs = beta_star(g0, spec.delta, F)
        lo, hi = p_sandwich(g0, H.W, spec.e0, bs, F)
        pb = analytic_outcome(H, spec, psi, bs, with_state=False).p_success
        assert lo * (1 - 1e-9) <= pb <= hi * (1 + 1e-9)
    if g0 < 1:
        eps = 0.05
        b = state_error_beta(g0, spec.delta, eps)
        post = analytic_outcome(H, spec, psi, b).post_state
        target = psi.amplitudes * spec.ground_mask() / math.sqrt(g0)
        assert np.linalg.norm(post.amplitudes - target) <= eps + 1e-9


def test_c7_bounds_suite(report):
    try:
        _bounds_property()
        ok, detail = True, "300 hypothesis draws over 100 random instances: all bounds hold"
    except AssertionError as exc:
        ok, detail = False, f"counterexample: {exc}"
    assert report("C7 bounds suite", ok, detail)


def test_c8_shot_sampler(maxcut, maxcut_spec, capsys, report):
    args = ["sample", "--instance", "maxcut5", "--beta", "0.5", "--shots", "10000", "--seed", "3"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    second = capsys.readouterr().out
    ok = first == second
    parts = [f"reruns byte-identical: {ok}"]
    shots = 100_000
    for beta in (0.25, 0.5, 1.0):
        rep = sample_shots(maxcut, uniform_state(5), beta, shots, seed=17, spec=maxcut_spec)
        a = analytic_outcome(maxcut, maxcut_spec, uniform_state(5), beta, with_state=False)
        zs = abs(rep.success_fraction - a.p_success) / math.sqrt(a.p_success * (1 - a.p_success) / shots)
        zf = abs(rep.ground_fraction - a.f_ground) / math.sqrt(a.f_ground * (1 - a.f_ground) / rep.successes)
        ok &= zs <= 4 and zf <= 4
        parts.append(f"beta {beta}: z_success {zs:.2f}, z_ground {zf:.2f}")
    assert report("C8 shot sampler", ok, "; ".join(parts))


def test_c9_limit_diagnostics(maxcut, report):
    bipartite = {
        "edge": [(0, 1)],
        "path5": [(0, 1), (1, 2), (2, 3), (3, 4)],
        "C6": [(i, (i + 1) % 6) for i in range(6)],
        "star": [(0, k) for k in range(1, 6)],
        "K2,3": [(a, b) for a in (0, 1) for b in (2, 3, 4)],
        "Q3": [(a, a ^ (1 << k)) for a in range(8) for k in range(3) if a < a ^ (1 << k)],
    }
    ranks = {name: limit_projector_rank(maxcut_hamiltonian(e)) for name, e in bipartite.items()}
    bench = limit_projector_rank(maxcut)
    ok = bench == 0 and all(r == 2 for r in ranks.values())
    assert report("C9 limit diagnostics", ok, f"benchmark graph rank {bench}; bipartite ranks {ranks}")
