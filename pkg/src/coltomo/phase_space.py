"""Discrete phase space of N qubits: fiducial, coherent states, kernels and symbols."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .binary_pauli import (
    DEFAULT_MAX_QUBITS,
    BinaryTuple,
    check_capacity,
    pauli_coefficients,
    pauli_sum,
    popcount,
    sign_matrix,
)
from .errors import DimensionError, DomainError, SingularFiducialError

#: Bloch vector (1, 1, 1)/sqrt(3); makes the one-qubit coherent states a SIC-POVM.
DEFAULT_XI = (math.sqrt(3) - 1) / math.sqrt(2) * cmath.exp(1j * math.pi / 4)

SINGULAR_OVERLAP = 1e-12


@dataclass(frozen=True)
class FiducialState:
    """Product state ``(|0> + xi |1>)^{(x)N} / (1+|xi|^2)^{N/2}``."""

    n_qubits: int
    xi: complex = DEFAULT_XI
    cap: int = field(default=DEFAULT_MAX_QUBITS, compare=False)

    def __post_init__(self):
        check_capacity(self.n_qubits, self.cap)
        object.__setattr__(self, "xi", complex(self.xi))

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    @property
    def is_default(self) -> bool:
        return self.xi == DEFAULT_XI

    @property
    def amplitudes(self) -> np.ndarray:
        return _fiducial_vector(self.n_qubits, self.xi)

    @property
    def overlaps(self) -> np.ndarray:
        """``<xi| Z_g X_d |xi>`` indexed ``[g, d]``, computed numerically."""
        return _fiducial_overlaps(self.n_qubits, self.xi)

    def check_invertible(self) -> None:
        ov = np.abs(self.overlaps)
        g, d = np.unravel_index(np.argmin(ov), ov.shape)
        if ov[g, d] < SINGULAR_OVERLAP:
            raise SingularFiducialError(
                f"<xi|Z_g X_d|xi> vanishes for g={BinaryTuple.from_int(int(g), self.n_qubits).bits}, "
                f"d={BinaryTuple.from_int(int(d), self.n_qubits).bits} (xi={self.xi})"
            )


@lru_cache(maxsize=32)
def _fiducial_vector(n_qubits: int, xi: complex) -> np.ndarray:
    single = np.array([1.0, xi]) / math.sqrt(1 + abs(xi) ** 2)
    out = np.ones(1, dtype=complex)
    for _ in range(n_qubits):
        out = np.kron(out, single)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=32)
def _fiducial_overlaps(n_qubits: int, xi: complex) -> np.ndarray:
    v = _fiducial_vector(n_qubits, xi)
    dim = v.size
    rows = np.arange(dim)[:, None]
    d = np.arange(dim)[None, :]
    # Z_g X_d v has amplitude (-1)^{g.r} v[r+d] at row r
    weighted = np.conj(v)[:, None] * v[rows ^ d]
    out = sign_matrix(n_qubits) @ weighted
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class DiscreteCoherentState:
    alpha: BinaryTuple
    beta: BinaryTuple
    vector: np.ndarray


@dataclass(frozen=True)
class PhaseSpaceSymbol:
    """Q or P symbol; ``values[a, b]`` with a, b the integer masks of alpha, beta."""

    kind: str
    values: np.ndarray

    def __post_init__(self):
        if self.kind not in ("Q", "P"):
            raise DomainError(f"symbol kind must be 'Q' or 'P', got {self.kind!r}")
        v = np.asarray(self.values)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] & (v.shape[0] - 1):
            raise DimensionError(f"symbol values must be 2^N x 2^N, got {v.shape}")

    @property
    def n_qubits(self) -> int:
        return self.values.shape[0].bit_length() - 1


def _as_mask(t, n_qubits: int) -> int:
    if isinstance(t, BinaryTuple):
        if t.n_qubits != n_qubits:
            raise DimensionError(f"tuple has {t.n_qubits} components, expected {n_qubits}")
        return t.to_int()
    return int(t)


def coherent_state(alpha, beta, fid: FiducialState) -> DiscreteCoherentState:
    """``Z_alpha X_beta |xi>`` with the global phase set to zero."""
    a, b = _as_mask(alpha, fid.n_qubits), _as_mask(beta, fid.n_qubits)
    vec = coherent_states(fid)[a, b]
    return DiscreteCoherentState(
        BinaryTuple.from_int(a, fid.n_qubits), BinaryTuple.from_int(b, fid.n_qubits), vec.copy()
    )


def coherent_states(fid: FiducialState) -> np.ndarray:
    """All coherent states as an array ``[a, b, :]``."""
    return _coherent_states(fid.n_qubits, fid.xi)


@lru_cache(maxsize=16)
def _coherent_states(n_qubits: int, xi: complex) -> np.ndarray:
    v = _fiducial_vector(n_qubits, xi)
    dim = v.size
    rows = np.arange(dim)
    b = np.arange(dim)[:, None]
    shifted = v[rows[None, :] ^ b]  # [b, r] = v[r + b]
    signs = sign_matrix(n_qubits)  # [a, r] = (-1)^{a.r}
    out = signs[:, None, :] * shifted[None, :, :]
    out.setflags(write=False)
    return out


def _kernel_coefficients(s: int, a: int, b: int, fid: FiducialState) -> np.ndarray:
    n = fid.n_qubits
    idx = np.arange(fid.dim)
    g = idx[:, None]
    d = idx[None, :]
    parity = popcount(a & d) + popcount(b & g)
    if s == -1:
        parity = parity + popcount(g & d)
    phase = 1 - 2 * (parity & 1)
    ov = fid.overlaps
    weight = ov if s == -1 else 1.0 / ov
    return phase * weight / 2.0 ** (n * (s + 3) / 2)


def _check_s(s: int) -> int:
    if s not in (1, -1):
        raise DomainError(f"s must be +1 or -1, got {s}")
    return s


def kernel(s: int, alpha, beta, fid: FiducialState) -> np.ndarray:
    """Phase-space kernel ``Delta^(s)(alpha, beta)`` as a Pauli expansion."""
    _check_s(s)
    if s == 1:
        fid.check_invertible()
    a, b = _as_mask(alpha, fid.n_qubits), _as_mask(beta, fid.n_qubits)
    return pauli_sum(_kernel_coefficients(s, a, b, fid))


def all_kernels(s: int, fid: FiducialState) -> np.ndarray:
    """Every kernel, stacked as ``[a, b, :, :]``."""
    _check_s(s)
    if s == 1:
        fid.check_invertible()
    dim = fid.dim
    out = np.empty((dim, dim, dim, dim), dtype=complex)
    for a in range(dim):
        for b in range(dim):
            out[a, b] = pauli_sum(_kernel_coefficients(s, a, b, fid))
    return out


def _check_operator(a: np.ndarray, fid: FiducialState) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.shape != (fid.dim, fid.dim):
        raise DimensionError(f"operator shape {a.shape} does not match N={fid.n_qubits}")
    return a


def q_symbol(a: np.ndarray, fid: FiducialState) -> PhaseSpaceSymbol:
    """``Q_A(alpha, beta) = <alpha,beta| A |alpha,beta>``."""
    a = _check_operator(a, fid)
    states = coherent_states(fid)
    values = np.einsum("abi,ij,abj->ab", states.conj(), a, states)
    return PhaseSpaceSymbol("Q", values)


def p_symbol(a: np.ndarray, fid: FiducialState) -> PhaseSpaceSymbol:
    """``P_A(alpha, beta) = Tr[A Delta^(1)(alpha, beta)]``."""
    a = _check_operator(a, fid)
    fid.check_invertible()
    n = fid.n_qubits
    h = sign_matrix(n)
    x = pauli_coefficients(a) / fid.overlaps
    # sum_{g,d} (-1)^{a.d + b.g} x[g, d]  ->  (H x H)[b, a]
    values = (h @ x @ h).T / 4.0 ** n
    return PhaseSpaceSymbol("P", values)


def expand(symbol: PhaseSpaceSymbol, fid: FiducialState) -> np.ndarray:
    """``sum_{alpha,beta} symbol(alpha,beta) Delta^(1)(alpha,beta)``."""
    if symbol.n_qubits != fid.n_qubits:
        raise DimensionError("symbol and fiducial disagree on N")
    fid.check_invertible()
    n = fid.n_qubits
    h = sign_matrix(n)
    # coefficient of Z_g X_d: sum_{a,b} Q[a,b] (-1)^{a.d + b.g} / overlap[g,d]
    coeffs = (h @ symbol.values.T @ h) / fid.overlaps / 4.0 ** n
    return pauli_sum(coeffs)


def reconstruct_full(a: np.ndarray, fid: FiducialState) -> np.ndarray:
    """Rebuild ``A`` from its Q symbol through the s=+1 kernels."""
    return expand(q_symbol(a, fid), fid)
