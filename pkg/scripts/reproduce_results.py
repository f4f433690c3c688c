#!/usr/bin/env python3
"""Regenerate every benchmark curve and report as CSV/JSON under an output directory.

    python scripts/reproduce_results.py [--out results] [--fast]

Each file is produced through the ``finite`` CLI so the commands printed here
are the ones to rerun by hand. ``--fast`` coarsens the grids (step 0.01).
"""
import argparse
import csv
import json
import shlex
import sys
import time
from pathlib import Path

from finite_ite.cli import main as finite


def run(argv):
    print("finite " + shlex.join(argv))
    t0 = time.perf_counter()
    code = finite(argv)
    if code != 0:
        sys.exit(f"command failed with exit code {code}")
    print(f"  done in {time.perf_counter() - t0:.2f}s")


def read_rows(path):
    with open(path, newline="") as fh:
        return [{k: float(v) for k, v in r.items()} for r in csv.DictReader(fh)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--fast", action="store_true")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    fine = "0.01" if args.fast else "0.001"

    for name in ("maxcut5", "hubo8"):
        run(["spectrum", "--instance", name, "--out", str(out / f"{name}_spectrum.json")])

    # MaxCut without amplification: P_LCU, F_g and the product identity
    run(["sweep", "--instance", "maxcut5", "--beta", "0", "2", fine, "--out", str(out / "maxcut_sweep.csv")])
    run(["sweep", "--instance", "maxcut5", "--beta", "0", "2", "0.01", "--gate-level",
         "--out", str(out / "maxcut_sweep_gate.csv")])

    # MaxCut with amplification at several depths
    run(["fpaa", "--instance", "maxcut5", "--beta", "0", "2", "0.01", "--L", "0,5,9,15",
         "--out", str(out / "maxcut_fpaa.csv")])

    # HUBO identity under three initial states
    for tag, init in (("uniform", "uniform"), ("warm060", "warm:p=0.6,gstar=auto"),
                      ("warm085", "warm:p=0.85,gstar=auto")):
        run(["sweep", "--instance", "hubo8", "--init", init, "--beta", "0", "3", fine,
             "--out", str(out / f"hubo_sweep_{tag}.csv")])

    for target in ("0.5", "0.9", "0.98"):
        run(["plan", "--instance", "maxcut5", "--measured", "--target", target, "--eps", "0.1",
             "--out", str(out / f"maxcut_plan_{target}.json")])
    run(["plan", "--instance", "hubo8", "--measured", "--target", "0.9",
         "--out", str(out / "hubo_plan_0.9.json")])
    run(["sample", "--instance", "maxcut5", "--beta", "0.5", "--shots", "100000", "--seed", "0",
         "--out", str(out / "maxcut_sample.json")])

    rows = read_rows(out / "maxcut_sweep.csv")
    print(f"\nMaxCut identity: max rel err {max(r['rel_err'] for r in rows):.2e}")
    for tag in ("uniform", "warm060", "warm085"):
        hubo = read_rows(out / f"hubo_sweep_{tag}.csv")
        print(f"HUBO {tag}: gamma0 {hubo[0]['f_g']:.5f}, max rel err {max(r['rel_err'] for r in hubo):.2e}")
    fp = read_rows(out / "maxcut_fpaa.csv")
    for L in (5, 9, 15):
        window = [r["p_g"] for r in fp if r["L"] == L and 1.4 <= r["beta"] <= 2.0]
        print(f"FPAA L={L}: p_g on beta in [1.4, 2] spans {min(window):.4f} .. {max(window):.4f}")
    for target in ("0.5", "0.9", "0.98"):
        plan = json.loads((out / f"maxcut_plan_{target}.json").read_text())
        print(f"plan F={target}: beta* {plan['beta_star']:.4f}, L_exact {plan['L_exact']}, "
              f"L_asymptotic {plan['L_asymptotic']}")


if __name__ == "__main__":
    main()
