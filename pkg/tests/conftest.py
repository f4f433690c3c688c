import itertools

import numpy as np
import pytest

from finite_ite import BENCHMARK_MAXCUT_EDGES
from finite_ite.instances import load_instance
from finite_ite.pauli_model import PauliHamiltonian, maxcut_hamiltonian, spectrum
from finite_ite.state_prep import product_state


@pytest.fixture(scope="session")
def maxcut():
    return maxcut_hamiltonian(BENCHMARK_MAXCUT_EDGES)


@pytest.fixture(scope="session")
def maxcut_spec(maxcut):
    return spectrum(maxcut)


@pytest.fixture(scope="session")
def hubo():
    return load_instance("hubo8").hamiltonian


@pytest.fixture(scope="session")
def hubo_spec(hubo):
    return spectrum(hubo)


def brute_energies(H):
    """Energies by explicit spin products over bit tuples (qubit i = bit i)."""
    out = []
    for bits in itertools.product([0, 1], repeat=H.n):
        bits = bits[::-1]  # itertools varies the last entry fastest; make qubit 0 the LSB
        e = 0.0
        for t in H.terms:
            s = 1.0
            for q in t.qubits:
                s *= 1 - 2 * bits[q]
            e += t.coeff * s
        out.append(e)
    return np.array(out)


def random_instance(rng, max_n=8, max_terms=10):
    """Random commuting Z-string Hamiltonian plus a random product state."""
    n = int(rng.integers(1, max_n + 1))
    n_terms = int(rng.integers(1, min(max_terms, 2**n - 1) + 1))
    masks = rng.choice(np.arange(1, 2**n), size=n_terms, replace=False)
    coeffs = rng.uniform(-2, 2, size=n_terms)
    H = PauliHamiltonian.from_terms(n, [(int(m), float(c)) for m, c in zip(masks, coeffs)])
    angles = rng.uniform(0.05, np.pi / 2 - 0.05, size=n)
    pairs = [(np.cos(a), np.sin(a)) for a in angles]
    return H, product_state(pairs), pairs


def random_instances(count, seed=1234, **kw):
    rng = np.random.default_rng(seed)
    return [random_instance(rng, **kw) for _ in range(count)]


# -- acceptance reporting ----------------------------------------------------

_CRITERIA: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion and return the verdict."""

    def _report(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _CRITERIA.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
