"""Instance files and initial-state specifications.

Graph files are UTF-8 text with one edge ``u v [weight]`` per line and ``#``
comments. Hamiltonian files are JSON::

    {"n": 8, "terms": [{"qubits": [0, 1, 2], "coeff": 2.0}, ...]}

where each entry is a Z-string (``"kind": "pauli"``, the default). With
``"kind": "pubo"`` the entries are binary monomials prod x_i instead and are
expanded into Z-strings on load.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .pauli_model import PauliHamiltonian, PuboPolynomial, Spectrum, maxcut_hamiltonian, to_hamiltonian
from .state_prep import (
    QuantumState,
    WarmStartSpec,
    arbitrary_state,
    auto_gstar,
    uniform_pairs,
    uniform_state,
    warm_start,
    warm_start_amplitudes,
)

BUNDLED = {
    "maxcut5": ("maxcut5.txt", "maxcut"),
    "hubo8": ("hubo8.json", "hubo"),
}


class InstanceParseError(ValidationError):
    def __init__(self, path, line, column, message):
        self.path, self.line, self.column = str(path), line, column
        super().__init__(f"{path}:{line}:{column}: {message}")


@dataclass(frozen=True)
class Instance:
    name: str
    kind: str  # "maxcut" or "hubo"
    hamiltonian: PauliHamiltonian


def parse_graph(text: str, path: str = "<graph>") -> PauliHamiltonian:
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = []
        col = 0
        for tok in line.split():
            col = line.index(tok, col)
            tokens.append((tok, col + 1))
            col += len(tok)
        if len(tokens) not in (2, 3):
            raise InstanceParseError(path, lineno, tokens[0][1],
                                     f"expected 'u v [weight]', got {len(tokens)} fields")
        try:
            u = int(tokens[0][0])
        except ValueError:
            raise InstanceParseError(path, lineno, tokens[0][1], f"bad vertex {tokens[0][0]!r}")
        try:
            v = int(tokens[1][0])
        except ValueError:
            raise InstanceParseError(path, lineno, tokens[1][1], f"bad vertex {tokens[1][0]!r}")
        w = 1.0
        if len(tokens) == 3:
            try:
                w = float(tokens[2][0])
            except ValueError:
                raise InstanceParseError(path, lineno, tokens[2][1], f"bad weight {tokens[2][0]!r}")
        if u < 0 or v < 0:
            raise InstanceParseError(path, lineno, tokens[0][1], "negative vertex index")
        if u == v:
            raise InstanceParseError(path, lineno, tokens[0][1], f"self-loop on vertex {u}")
        edges.append((u, v, w))
    return maxcut_hamiltonian(edges)


def parse_hamiltonian_json(text: str, path: str = "<json>") -> PauliHamiltonian:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(path, exc.lineno, exc.colno, exc.msg) from exc
    if not isinstance(data, dict) or "n" not in data or "terms" not in data:
        raise InstanceParseError(path, 1, 1, "expected an object with 'n' and 'terms'")
    n = data["n"]
    if not isinstance(n, int) or n < 0:
        raise InstanceParseError(path, 1, 1, f"'n' must be a nonnegative integer, got {n!r}")
    kind = data.get("kind", "pauli")
    entries = []
    for k, term in enumerate(data["terms"]):
        if not isinstance(term, dict) or "qubits" not in term or "coeff" not in term:
            raise InstanceParseError(path, 1, 1, f"term {k} needs 'qubits' and 'coeff'")
        qubits, coeff = term["qubits"], term["coeff"]
        if not isinstance(qubits, list) or not all(isinstance(q, int) for q in qubits):
            raise InstanceParseError(path, 1, 1, f"term {k}: 'qubits' must be a list of ints")
        if not isinstance(coeff, (int, float)):
            raise InstanceParseError(path, 1, 1, f"term {k}: 'coeff' must be a number")
        bad = [q for q in qubits if not 0 <= q < n]
        if bad:
            raise InstanceParseError(path, 1, 1, f"term {k}: qubit {bad[0]} out of range [0, {n})")
        entries.append((tuple(qubits), float(coeff)))
    if kind == "pauli":
        return PauliHamiltonian.from_terms(n, entries)
    if kind == "pubo":
        return to_hamiltonian(PuboPolynomial(n, tuple(entries)))
    raise InstanceParseError(path, 1, 1, f"unknown kind {kind!r} (expected 'pauli' or 'pubo')")


def hamiltonian_to_json(H: PauliHamiltonian) -> str:
    terms = [{"qubits": list(t.qubits), "coeff": t.coeff} for t in H.terms]
    if H.identity_shift:
        terms.insert(0, {"qubits": [], "coeff": H.identity_shift})
    return json.dumps({"n": H.n, "kind": "pauli", "terms": terms}, indent=2)


def bundled_path(name: str) -> Path:
    fname, _ = BUNDLED[name]
    return Path(str(resources.files("finite_ite.data").joinpath(fname)))


def load_instance(path: str, kind: str | None = None) -> Instance:
    """Load a graph or JSON instance; bundled names ``maxcut5``/``hubo8`` also work."""
    p = Path(path)
    if not p.exists() and path in BUNDLED:
        p = bundled_path(path)
        kind = kind or BUNDLED[path][1]
    if not p.exists():
        raise InstanceParseError(path, 0, 0, "file not found")
    if kind is None:
        kind = "hubo" if p.suffix.lower() == ".json" else "maxcut"
    try:
        text = p.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InstanceParseError(path, 0, 0, f"cannot read file: {exc}") from exc
    if kind == "maxcut":
        H = parse_graph(text, str(p))
    elif kind == "hubo":
        H = parse_hamiltonian_json(text, str(p))
    else:
        raise ValidationError(f"unknown instance type {kind!r}")
    return Instance(p.stem, kind, H)


@dataclass(frozen=True)
class InitialState:
    state: QuantumState
    pairs: list | None  # per-qubit amplitudes for product states, else None
    description: str


def parse_init(spec_text: str, n: int, spec: Spectrum | None = None) -> InitialState:
    """``uniform`` | ``warm:p=<float>,gstar=<bits|auto>`` | ``file:<path>``."""
    text = spec_text.strip()
    if text == "uniform":
        return InitialState(uniform_state(n), uniform_pairs(n), "uniform")
    if text.startswith("warm:"):
        fields = {}
        for item in text[5:].split(","):
            if "=" not in item:
                raise ValidationError(f"bad warm-start field {item!r}")
            k, v = item.split("=", 1)
            fields[k.strip()] = v.strip()
        try:
            p = float(fields["p"])
        except (KeyError, ValueError):
            raise ValidationError("warm start needs p=<float>")
        gstar = fields.get("gstar", "auto")
        if gstar == "auto":
            if spec is None:
                raise ValidationError("gstar=auto needs the spectrum")
            gstar = auto_gstar(spec)
        ws = WarmStartSpec(gstar, p)
        return InitialState(warm_start(n, ws), warm_start_amplitudes(ws), f"warm:p={p},gstar={gstar}")
    if text.startswith("file:"):
        return InitialState(load_amplitudes(text[5:]), None, text)
    raise ValidationError(f"unknown init spec {spec_text!r}")


def load_amplitudes(path: str) -> QuantumState:
    """Newline-separated ``re im`` pairs (``im`` optional); normalized on load."""
    amps = []
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InstanceParseError(path, 0, 0, f"cannot read amplitude file: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            re_ = float(parts[0])
            im = float(parts[1]) if len(parts) > 1 else 0.0
        except (ValueError, IndexError):
            raise InstanceParseError(path, lineno, 1, f"bad amplitude {line!r}")
        if len(parts) > 2:
            raise InstanceParseError(path, lineno, 1, "expected 're im'")
        amps.append(complex(re_, im))
    return arbitrary_state(np.array(amps))


def write_amplitudes(state: QuantumState, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for a in state.amplitudes:
            fh.write(f"{float(a.real)!r} {float(a.imag)!r}\n")
