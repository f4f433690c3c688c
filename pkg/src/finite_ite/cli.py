"""Command-line frontend.

Exit codes: 0 success, 2 input error, 3 unreachable plan, 4 resource limit.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field

from .errors import ResourceError, UnreachableError, ValidationError
from .instances import Instance, load_instance, parse_init
from .lcu_engine import build_lcu_program, sample_shots
from .pauli_model import limit_projector_rank, spectrum
from .planner import PlanInputs, cnot_estimate, make_plan
from .state_prep import ground_overlap
from .sweeps import FPAA_HEADER, GATE_COLUMNS, SWEEP_HEADER, beta_grid, flagged_rows, fpaa_sweep, lcu_sweep

log = logging.getLogger("finite_ite")

DEFAULT_GRIDS = {
    "maxcut": (0.0, 2.0, 0.001),
    "hubo": (0.0, 3.0, 0.001),
}
GATE_LEVEL_STEP = 0.01


@dataclass
class RunConfig:
    command: str
    instance: str
    type: str | None = None
    init: str = "uniform"
    beta: list[float] = field(default_factory=list)
    L: list[int] = field(default_factory=lambda: [0, 5, 9, 15])
    delta: float = 0.1
    shots: int = 10_000
    seed: int = 0
    gate_level: bool = False
    out: str | None = None
    format: str = "csv"
    target: float | None = None
    eps: float | None = None
    gamma0: float | None = None
    gap: float | None = None
    e0: float | None = None
    measured: bool = False
    workers: int | None = None

    def grid(self, kind: str, gate_level: bool = False, default=None):
        if self.beta:
            if len(self.beta) == 1:
                return beta_grid(self.beta[0], self.beta[0], 1.0)
            if len(self.beta) != 3:
                raise ValidationError("--beta takes <value> or <start> <stop> <step>")
            return beta_grid(*self.beta)
        start, stop, step = default or DEFAULT_GRIDS.get(kind, (0.0, 2.0, 0.001))
        if gate_level:
            step = max(step, GATE_LEVEL_STEP)
        return beta_grid(start, stop, step)


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def dump_json(payload) -> str:
    return json.dumps(_jsonable(payload), indent=2, sort_keys=False, allow_nan=False) + "\n"


def dump_csv(rows: list[dict], header: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([repr(r[h]) if isinstance(r[h], float) else r[h] for h in header])
    return buf.getvalue()


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _setup(cfg: RunConfig):
    inst: Instance = load_instance(cfg.instance, cfg.type)
    H = inst.hamiltonian
    spec = spectrum(H)
    init = parse_init(cfg.init, H.n, spec)
    if init.state.n_qubits != H.n:
        raise ValidationError(f"initial state has {init.state.n_qubits} qubits, instance has {H.n}")
    return inst, H, spec, init


def cmd_spectrum(cfg: RunConfig) -> dict:
    inst, H, spec, init = _setup(cfg)
    report = {
        "instance": inst.name,
        "n": H.n,
        "M": H.M,
        "W": H.W,
        "E0": spec.e0,
        "delta": spec.delta,
        "ground_count": len(spec.ground_indices),
        "ground_set": list(spec.ground_set),
        "identity_shift": H.identity_shift,
        "init": init.description,
        "gamma0": ground_overlap(init.state, spec),
        "limit_projector_rank": limit_projector_rank(H),
        "warning": None,
    }
    if spec.degenerate:
        report["warning"] = "degenerate spectrum: every basis state is a ground state, gap undefined"
        log.warning(report["warning"])
    _emit(dump_json(report), cfg)
    return report


def cmd_sweep(cfg: RunConfig) -> list[dict]:
    inst, H, spec, init = _setup(cfg)
    betas = cfg.grid(inst.kind, cfg.gate_level)
    rows = lcu_sweep(H, spec, init.state, betas, gate_level=cfg.gate_level, workers=cfg.workers)
    header = SWEEP_HEADER + (GATE_COLUMNS if cfg.gate_level else [])
    _emit(dump_json(rows) if cfg.format == "json" else dump_csv(rows, header), cfg)
    return rows


def cmd_fpaa(cfg: RunConfig) -> list[dict]:
    inst, H, spec, init = _setup(cfg)
    betas = cfg.grid(inst.kind, default=(0.0, 2.0, 0.01))
    rows = fpaa_sweep(H, spec, init.state, betas, cfg.L, cfg.delta, init.pairs, cfg.workers)
    bad = flagged_rows(rows)
    if bad:
        log.warning("%d rows disagree with the closed-form amplified probability", bad)
    _emit(dump_json(rows) if cfg.format == "json" else dump_csv(rows, FPAA_HEADER), cfg)
    return rows


def cmd_plan(cfg: RunConfig) -> dict:
    if cfg.target is None:
        raise ValidationError("plan needs --target")
    inst, H, spec, init = _setup(cfg)
    gamma0, gap, e0 = cfg.gamma0, cfg.gap, cfg.e0
    if cfg.measured:
        gamma0 = ground_overlap(init.state, spec)
        gap = spec.delta
        e0 = spec.e0
    missing = [name for name, v in (("--gamma0", gamma0), ("--gap", gap), ("--e0", e0)) if v is None]
    if missing:
        raise ValidationError(f"plan needs {', '.join(missing)} (or --measured)")
    if math.isinf(gap):
        gap = 1.0  # every state is ground, so gamma0 = 1 and beta* = 0 regardless
    inputs = PlanInputs(gamma0, gap, H.W, e0, cfg.target, cfg.delta)
    plan = make_plan(inputs, H.n, [t.locality for t in H.terms], cfg.eps)
    payload = plan.as_json_dict()
    _emit(dump_json(payload), cfg)
    if not plan.reachable:
        raise UnreachableError(plan.notes[0])
    return payload


def cmd_sample(cfg: RunConfig):
    inst, H, spec, init = _setup(cfg)
    betas = cfg.grid(inst.kind) if cfg.beta else [0.5]
    reports = [sample_shots(H, init.state, float(b), cfg.shots, cfg.seed, spec) for b in betas]
    if len(reports) == 1:
        text = reports[0].to_json() + "\n"
    else:
        text = "[\n" + ",\n".join(r.to_json() for r in reports) + "\n]\n"
    _emit(text, cfg)
    return reports


def cmd_gates(cfg: RunConfig) -> dict:
    inst, H, spec, init = _setup(cfg)
    beta = cfg.beta[0] if cfg.beta else 0.5
    program = build_lcu_program(H, beta)
    L = cfg.L[0] if cfg.L else 0
    cost = cnot_estimate(H.n, H.M, [t.locality for t in H.terms], L)
    payload = {
        "instance": inst.name,
        "n": H.n,
        "M": H.M,
        "joint_qubits": program.total_qubits,
        "beta": beta,
        "blocks": [
            {"term": b.term.label(), "coeff": b.term.coeff, "ancilla": H.n + mu,
             "alpha_w": b.alpha_w, "gamma_w": b.gamma_w, "kappa": b.kappa}
            for mu, b in enumerate(program.blocks)
        ],
        "gates": program.describe(),
        "cnot": cost.as_dict(),
    }
    _emit(dump_json(payload), cfg)
    return payload


COMMANDS = {
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "fpaa": cmd_fpaa,
    "plan": cmd_plan,
    "sample": cmd_sample,
    "gates": cmd_gates,
}


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list of integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="finite", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--instance", required=True,
                        help="graph/JSON file, or bundled name maxcut5 | hubo8")
    common.add_argument("--type", choices=["maxcut", "hubo"], default=None)
    common.add_argument("--init", default="uniform",
                        help="uniform | warm:p=<float>,gstar=<bits|auto> | file:<path>")
    common.add_argument("--beta", type=float, nargs="+", default=[],
                        metavar="B", help="<value> or <start> <stop> <step>")
    common.add_argument("--L", type=_int_list, default=[0, 5, 9, 15],
                        help="query depths, e.g. '0,5,9,15' (0 = no amplification)")
    common.add_argument("--delta", type=float, default=0.1)
    common.add_argument("--shots", type=int, default=10_000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--gate-level", action="store_true")
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--workers", type=int, default=None,
                        help="threads for per-beta circuit work (default: up to 8)")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "plan":
            p.add_argument("--target", type=float, required=True, help="target fidelity F")
            p.add_argument("--eps", type=float, default=None, help="state-error target")
            p.add_argument("--gamma0", type=float, default=None)
            p.add_argument("--gap", type=float, default=None)
            p.add_argument("--e0", type=float, default=None)
            p.add_argument("--measured", action="store_true",
                           help="take gamma0, gap and E0 from exact enumeration")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    fields_ = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    cfg = RunConfig(**fields_)
    try:
        COMMANDS[args.command](cfg)
    except UnreachableError as exc:
        print(f"unreachable: {exc}", file=sys.stderr)
        return 3
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 4
    except ValidationError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
