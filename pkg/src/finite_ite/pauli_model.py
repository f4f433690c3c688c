"""PUBO cost polynomials, diagonal Pauli-Z Hamiltonians and exact spectra.

Conventions used everywhere in the package:

* qubit ``i`` is bit ``i`` of a basis-state index (qubit 0 is the LSB);
* a bitstring *string* lists qubits in order, so character ``i`` is qubit ``i``
  (``"10"`` means qubit 0 is 1 and qubit 1 is 0, i.e. index 1);
* a Z-string is stored as an integer mask of the qubits it acts on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence, Union

import numpy as np

from . import limits
from .errors import ValidationError

Bits = Union[str, int, Sequence[int]]

DEGENERACY_TOL = 1e-9


# ---------------------------------------------------------------------------
# bitstring helpers
# ---------------------------------------------------------------------------


def bits_to_index(bits: Bits, n: int) -> int:
    """Convert a bitstring (str, int or 0/1 sequence) to a basis index."""
    if isinstance(bits, (int, np.integer)):
        index = int(bits)
        if not 0 <= index < 2**n:
            raise ValidationError(f"basis index {index} out of range for n={n}")
        return index
    if isinstance(bits, str):
        if len(bits) != n or any(c not in "01" for c in bits):
            raise ValidationError(f"expected a {n}-character 0/1 string, got {bits!r}")
        return sum(1 << i for i, c in enumerate(bits) if c == "1")
    seq = list(bits)
    if len(seq) != n or any(b not in (0, 1) for b in seq):
        raise ValidationError(f"expected {n} bits, got {seq!r}")
    return sum(1 << i for i, b in enumerate(seq) if b)


def index_to_bits(index: int, n: int) -> str:
    return "".join("1" if (index >> i) & 1 else "0" for i in range(n))


def mask_of(qubits: Iterable[int]) -> int:
    mask = 0
    for q in qubits:
        mask |= 1 << int(q)
    return mask


def qubits_of(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if (mask >> i) & 1)


def parity_signs(mask: int, n: int) -> np.ndarray:
    """(-1)^popcount(mask & x) for every basis index x, as float64."""
    idx = np.arange(2**n, dtype=np.uint64)
    par = np.bitwise_count(idx & np.uint64(mask)) & 1
    return 1.0 - 2.0 * par.astype(np.float64)


# ---------------------------------------------------------------------------
# types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PuboPolynomial:
    """C(x) = sum_alpha c_alpha prod_{i in S_alpha} x_i over x in {0,1}^n.

    The empty index set is a constant offset. Duplicate monomials are merged
    and index sets are sorted on construction.
    """

    n: int
    monomials: tuple[tuple[tuple[int, ...], float], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError("n must be nonnegative")
        merged: dict[tuple[int, ...], float] = {}
        for indices, coeff in self.monomials:
            idx = tuple(sorted(int(i) for i in indices))
            if len(set(idx)) != len(idx):
                raise ValidationError(f"repeated variable in monomial {indices!r}")
            for i in idx:
                if not 0 <= i < self.n:
                    raise ValidationError(f"variable index {i} out of range [0, {self.n})")
            merged[idx] = merged.get(idx, 0.0) + float(coeff)
        object.__setattr__(self, "monomials", tuple(sorted(merged.items())))

    @classmethod
    def qubo(cls, n: int, h: Sequence[float] = (), J: dict | None = None) -> "PuboPolynomial":
        """Build from linear coefficients ``h`` and a pair map ``J[(i, j)]``."""
        monos = [((i,), c) for i, c in enumerate(h) if c != 0]
        monos += [(tuple(k), c) for k, c in (J or {}).items()]
        return cls(n, tuple(monos))

    def cost(self, bits: Bits) -> float:
        index = bits_to_index(bits, self.n)
        total = 0.0
        for idx, coeff in self.monomials:
            if all((index >> i) & 1 for i in idx):
                total += coeff
        return total

    def costs(self) -> np.ndarray:
        """Dense vector of C(x) over all 2^n assignments."""
        limits.check(self.n, limits.enumeration_cap(), "cost enumeration")
        x = np.arange(2**self.n, dtype=np.uint64)
        out = np.zeros(2**self.n)
        for idx, coeff in self.monomials:
            m = np.uint64(mask_of(idx))
            out += coeff * ((x & m) == m)
        return out


@dataclass(frozen=True)
class PauliTerm:
    mask: int
    coeff: float

    @property
    def qubits(self) -> tuple[int, ...]:
        return qubits_of(self.mask)

    @property
    def locality(self) -> int:
        return bin(self.mask).count("1")

    def label(self) -> str:
        return "".join(f"Z{q}" for q in self.qubits)


@dataclass(frozen=True)
class PauliHamiltonian:
    """Diagonal Hamiltonian sum_mu x_mu sigma_mu with the identity part held apart.

    Build with :meth:`from_terms`, which merges duplicate Z-strings, moves
    any identity component into ``identity_shift`` and drops zero terms.
    """

    n: int
    terms: tuple[PauliTerm, ...] = ()
    identity_shift: float = 0.0
    _coeffs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        masks = [t.mask for t in self.terms]
        if len(set(masks)) != len(masks):
            raise ValidationError("duplicate Z-strings; use PauliHamiltonian.from_terms")
        for t in self.terms:
            if t.mask == 0:
                raise ValidationError("identity term must go into identity_shift")
            if t.coeff == 0:
                raise ValidationError("zero-coefficient term")
            if t.mask >> self.n:
                raise ValidationError(f"term {t.label()} acts outside {self.n} qubits")
        object.__setattr__(self, "_coeffs", np.array([t.coeff for t in self.terms], dtype=float))

    @classmethod
    def from_terms(cls, n: int, terms: Iterable, identity_shift: float = 0.0,
                   zero_tol: float = 0.0) -> "PauliHamiltonian":
        """``terms`` yields ``(qubits_or_mask, coeff)`` pairs.

        ``qubits_or_mask`` is either an int mask or an iterable of qubit
        indices. Merged coefficients with ``|c| <= zero_tol`` are dropped.
        """
        acc: dict[int, float] = {}
        shift = float(identity_shift)
        for key, coeff in terms:
            if isinstance(key, (int, np.integer)):
                mask = int(key)
            else:
                qs = [int(q) for q in key]
                if len(set(qs)) != len(qs):
                    raise ValidationError(f"repeated qubit in Z-string {key!r}")
                for q in qs:
                    if not 0 <= q < n:
                        raise ValidationError(f"qubit index {q} out of range [0, {n})")
                mask = mask_of(qs)
            if mask >> n:
                raise ValidationError(f"Z-string mask {mask:#x} acts outside {n} qubits")
            if mask == 0:
                shift += float(coeff)
            else:
                acc[mask] = acc.get(mask, 0.0) + float(coeff)
        kept = tuple(
            PauliTerm(m, c) for m, c in sorted(acc.items()) if abs(c) > zero_tol
        )
        return cls(n, kept, shift)

    @property
    def M(self) -> int:
        return len(self.terms)

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(t.mask for t in self.terms)

    @property
    def W(self) -> float:
        return l1_norm(self)

    def energies(self) -> np.ndarray:
        """Dense vector E_x over all basis states (identity shift excluded)."""
        limits.check(self.n, limits.enumeration_cap(), "energy enumeration")
        out = np.zeros(2**self.n)
        for t in self.terms:
            out += t.coeff * parity_signs(t.mask, self.n)
        return out


@dataclass(frozen=True)
class Spectrum:
    e0: float
    delta: float  # math.inf when every state is a ground state
    ground_indices: np.ndarray
    energies: np.ndarray
    n: int

    @property
    def ground_set(self) -> tuple[str, ...]:
        return tuple(index_to_bits(int(i), self.n) for i in self.ground_indices)

    @property
    def degenerate(self) -> bool:
        """True when no excited level exists (gap undefined)."""
        return math.isinf(self.delta)

    def ground_mask(self) -> np.ndarray:
        mask = np.zeros(self.energies.shape, dtype=bool)
        mask[self.ground_indices] = True
        return mask


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def to_hamiltonian(poly: PuboPolynomial) -> PauliHamiltonian:
    """Expand prod (I - Z_i)/2 factors into Z-strings and merge them."""
    limits.check(poly.n, limits.system_cap(), "PUBO mapping")
    acc: dict[int, float] = {}
    scale = 0.0
    for idx, coeff in poly.monomials:
        k = len(idx)
        weight = coeff / 2**k
        scale += abs(coeff)
        for r in range(k + 1):
            sign = -1.0 if r % 2 else 1.0
            for sub in combinations(idx, r):
                m = mask_of(sub)
                acc[m] = acc.get(m, 0.0) + sign * weight
    # cancellations leave roundoff-level residues; treat them as exact zeros
    tol = 1e-14 * max(scale, 1.0)
    return PauliHamiltonian.from_terms(poly.n, acc.items(), zero_tol=tol)


def l1_norm(H: PauliHamiltonian) -> float:
    return float(np.sum(np.abs(H.coeffs))) if H.terms else 0.0


def energy(H: PauliHamiltonian, bits: Bits) -> float:
    """Eigenvalue of H (without identity shift) on one basis state."""
    index = bits_to_index(bits, H.n)
    total = 0.0
    for t in H.terms:
        total += t.coeff * (-1.0 if bin(t.mask & index).count("1") % 2 else 1.0)
    return total


def spectrum(H: PauliHamiltonian) -> Spectrum:
    energies = H.energies()
    e0 = float(energies.min())
    is_ground = np.abs(energies - e0) <= DEGENERACY_TOL
    ground = np.flatnonzero(is_ground)
    excited = energies[~is_ground]
    delta = float(excited.min() - e0) if excited.size else math.inf
    return Spectrum(e0=e0, delta=delta, ground_indices=ground, energies=energies, n=H.n)


def maxcut_hamiltonian(edges: Iterable, n: int | None = None) -> PauliHamiltonian:
    """Ising MaxCut Hamiltonian sum_(u,v) w Z_u Z_v; edges are (u, v) or (u, v, w)."""
    terms = []
    top = -1
    for e in edges:
        if len(e) == 2:
            u, v, w = int(e[0]), int(e[1]), 1.0
        elif len(e) == 3:
            u, v, w = int(e[0]), int(e[1]), float(e[2])
        else:
            raise ValidationError(f"edge must be (u, v) or (u, v, w), got {e!r}")
        if u == v:
            raise ValidationError(f"self-loop on vertex {u}")
        if u < 0 or v < 0:
            raise ValidationError(f"negative vertex index in edge {e!r}")
        top = max(top, u, v)
        terms.append(((u, v), w))
    if n is None:
        n = top + 1
    elif top >= n:
        raise ValidationError(f"vertex {top} out of range for n={n}")
    return PauliHamiltonian.from_terms(n, terms)


def limit_projector_rank(H: PauliHamiltonian) -> int:
    """Number of basis states on which every term has eigenvalue -sgn(coeff).

    These span the range of the beta -> infinity limit of the normalized
    termwise block product.
    """
    limits.check(H.n, limits.enumeration_cap(), "projector enumeration")
    ok = np.ones(2**H.n, dtype=bool)
    for t in H.terms:
        ok &= parity_signs(t.mask, H.n) == -math.copysign(1.0, t.coeff)
    return int(ok.sum())
