"""Tomography inside the fully symmetric (Dicke) subspace with a rank-one POVM."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .binary_pauli import (
    HammingTriple,
    check_capacity,
    enumerate_triples,
    popcount,
    require_admissible,
    triple_index,
)
from .errors import DimensionError, IncompleteDataError, UnsupportedFiducialError, ValidationError
from .phase_space import DEFAULT_XI
from .special_fn import f_table, g_table, psi_closedform, psi_table, r_vector

DEFAULT_RANK_TOL = 1e-8


@lru_cache(maxsize=None)
def dicke_embedding(n_qubits: int) -> np.ndarray:
    """Columns are the Dicke states ``|l, N>`` written in the computational basis."""
    check_capacity(n_qubits)
    weights = popcount(np.arange(1 << n_qubits))
    out = np.zeros((1 << n_qubits, n_qubits + 1))
    out[np.arange(1 << n_qubits), weights] = 1.0
    out /= np.sqrt(out.sum(axis=0))
    out.setflags(write=False)
    return out


def symmetrizer(n_qubits: int) -> np.ndarray:
    e = dicke_embedding(n_qubits)
    return e @ e.T


@dataclass(frozen=True)
class DickeVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if np.shape(self.amplitudes) != (self.n_qubits + 1,):
            raise DimensionError(f"need {self.n_qubits + 1} Dicke amplitudes, got {np.shape(self.amplitudes)}")

    def embed(self) -> np.ndarray:
        return dicke_embedding(self.n_qubits) @ self.amplitudes

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True)
class SymmetricDensity:
    """Density matrix restricted to the Dicke subspace, in the Dicke basis."""

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.n_qubits + 1,) * 2:
            raise DimensionError(f"expected a {self.n_qubits + 1}-dim matrix, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    def validate(self, tol: float = 1e-10) -> "SymmetricDensity":
        m = self.matrix
        if np.abs(m - m.conj().T).max() > tol:
            raise ValidationError("symmetric density is not Hermitian")
        if abs(np.trace(m) - 1) > tol:
            raise ValidationError(f"symmetric density has trace {np.trace(m).real}")
        if np.linalg.eigvalsh((m + m.conj().T) / 2).min() < -tol:
            raise ValidationError("symmetric density has a negative eigenvalue")
        return self

    def embed(self) -> np.ndarray:
        e = dicke_embedding(self.n_qubits)
        return e @ self.matrix @ e.T

    @classmethod
    def from_full(cls, rho: np.ndarray) -> "SymmetricDensity":
        n = rho.shape[0].bit_length() - 1
        e = dicke_embedding(n)
        return cls(n, e.T @ rho @ e)


def _require_default(xi: complex) -> None:
    if complex(xi) != DEFAULT_XI:
        raise UnsupportedFiducialError("the dual kernels are only known for the default xi")


def _dicke_prefactor(n_qubits: int, xi: complex) -> np.ndarray:
    binoms = np.array([comb(n_qubits, l) for l in range(n_qubits + 1)], dtype=float)
    return (1 + abs(xi) ** 2) ** (-n_qubits / 2) / np.sqrt(binoms)


def build_psi(n_qubits: int, triple, xi: complex = DEFAULT_XI, closed_form: bool = False) -> DickeVector:
    """Unnormalized ``Psi_mnk``: the symmetric projection of any coherent state of the fiber."""
    t = require_admissible(n_qubits, triple)
    if closed_form:
        psi = np.array([psi_closedform(n_qubits, l, t, xi) for l in range(n_qubits + 1)])
    else:
        psi = psi_table(n_qubits, complex(xi))[triple_index(n_qubits)[t]]
    return DickeVector(n_qubits, _dicke_prefactor(n_qubits, xi) * psi)


@dataclass(frozen=True)
class PovmElementTable:
    """Unnormalized states ``Psi_t``, their squared norms and fiber sizes, in triple order."""

    n_qubits: int
    xi: complex
    states: np.ndarray
    norms2: np.ndarray
    weights: np.ndarray

    @property
    def triples(self) -> list[HammingTriple]:
        return enumerate_triples(self.n_qubits)

    @property
    def unit_states(self) -> np.ndarray:
        return self.states / np.sqrt(self.norms2)[:, None]

    def completeness(self) -> np.ndarray:
        """``sum_t N_t^2 R_t |hat Psi_t><hat Psi_t|``; equals ``2^N`` on the Dicke space."""
        u = self.unit_states
        return np.einsum("t,ti,tj->ij", self.norms2 * self.weights, u, u.conj())

    def distinct_norms(self, tol: float = 1e-10) -> list[float]:
        out: list[float] = []
        for v in sorted(self.norms2):
            if not out or v - out[-1] > tol:
                out.append(float(v))
        return out


def build_povm(n_qubits: int, xi: complex = DEFAULT_XI) -> PovmElementTable:
    check_capacity(n_qubits)
    states = psi_table(n_qubits, complex(xi)) * _dicke_prefactor(n_qubits, xi)[None, :]
    norms2 = np.real(np.einsum("ti,ti->t", states.conj(), states))
    return PovmElementTable(n_qubits, complex(xi), states, norms2, r_vector(n_qubits).astype(float))


def build_A(n_qubits: int, triple) -> np.ndarray:
    """Symmetric projection of any monomial ``Z_g X_d`` with ``(h(g), h(d), h(g+d)) = triple``.

    ``<l| A |l'> = f_{l l'}(m, k, n) / sqrt(C(N,l) C(N,l'))``.  Note the row
    index is the first subscript of f; with the rows and columns the other
    way round the kernel expansion is off by ``(-1)^{(m+n-k)/2}``.
    """
    m, n, k = require_admissible(n_qubits, triple)
    col = triple_index(n_qubits)[HammingTriple(m, k, n)]
    binoms = np.array([comb(n_qubits, l) for l in range(n_qubits + 1)], dtype=float)
    return f_table(n_qubits)[:, :, col] / np.sqrt(np.outer(binoms, binoms))


@lru_cache(maxsize=8)
def _all_A(n_qubits: int) -> np.ndarray:
    out = np.array([build_A(n_qubits, t) for t in enumerate_triples(n_qubits)])
    out.setflags(write=False)
    return out


@lru_cache(maxsize=8)
def _all_K(n_qubits: int) -> np.ndarray:
    triples = enumerate_triples(n_qubits)
    coeff = np.array([3.0 ** (sum(u) / 4) * 1j ** ((u.k - u.m - u.n) // 2) for u in triples])
    # K_t = 4^-N sum_u coeff_u g_u(t) A_u
    weights = g_table(n_qubits).T * coeff[None, :] / 4.0 ** n_qubits
    out = np.tensordot(weights, _all_A(n_qubits), axes=1)
    out.setflags(write=False)
    return out


def build_K(n_qubits: int, triple, xi: complex = DEFAULT_XI) -> np.ndarray:
    """Dual kernel: the symmetric projection of ``Delta^(1)`` at one point of the fiber."""
    _require_default(xi)
    t = require_admissible(n_qubits, triple)
    return _all_K(n_qubits)[triple_index(n_qubits)[t]].copy()


def measure_probabilities(rho: SymmetricDensity, povm: PovmElementTable) -> dict[HammingTriple, float]:
    """``p_t = <hat Psi_t| rho |hat Psi_t>``."""
    rho.validate(tol=1e-8)
    if rho.n_qubits != povm.n_qubits:
        raise DimensionError("state and POVM disagree on N")
    u = povm.unit_states
    p = np.real(np.einsum("ti,ij,tj->t", u.conj(), rho.matrix, u))
    return {t: float(p[i]) for i, t in enumerate(povm.triples)}


def reconstruct_symmetric(p: dict, n_qubits: int, xi: complex = DEFAULT_XI) -> SymmetricDensity:
    """``sum_t N_t^2 R_t p_t K_t`` from normalized projection probabilities.

    The squared norm turns ``p_t`` back into ``<Psi_t|rho|Psi_t>``, which is
    the Q value shared by every point of the fiber.
    """
    _require_default(xi)
    triples = enumerate_triples(n_qubits)
    missing = [tuple(t) for t in triples if t not in p]
    if missing:
        raise IncompleteDataError(missing)
    povm = build_povm(n_qubits, xi)
    probs = np.array([p[t] for t in triples])
    rho = np.tensordot(probs * povm.norms2 * povm.weights, _all_K(n_qubits), axes=1)
    return SymmetricDensity(n_qubits, rho)


@dataclass(frozen=True)
class OmegaMatrix:
    """Linear map ``p -> p`` implied by the reconstruction; rows and columns in triple order."""

    n_qubits: int
    matrix: np.ndarray

    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.matrix - np.eye(len(self.matrix)), compute_uv=False)

    def _threshold(self, sv: np.ndarray, rel_tol: float) -> float:
        # relative to sigma_max, floored at the scale of the identity so that
        # Omega == I (N = 1) has rank zero instead of ranking rounding noise
        return rel_tol * max(float(sv.max(initial=0.0)), 1.0)

    def rank(self, rel_tol: float = DEFAULT_RANK_TOL) -> int:
        sv = self.singular_values()
        return int((sv > self._threshold(sv, rel_tol)).sum())

    def independent_count(self, rel_tol: float = DEFAULT_RANK_TOL) -> int:
        # minus one for the trace condition
        return len(self.matrix) - self.rank(rel_tol) - 1

    def constraint_basis(self, rel_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
        """Rows span the linear constraints ``c . p = 0`` satisfied by every measured p."""
        _, sv, vh = np.linalg.svd(self.matrix - np.eye(len(self.matrix)))
        return vh[: int((sv > self._threshold(sv, rel_tol)).sum())]


def build_omega(n_qubits: int, xi: complex = DEFAULT_XI) -> OmegaMatrix:
    """``Omega[t', t] = N_t^2 R_t <hat Psi_t'| K_t |hat Psi_t'>`` so that ``Omega p = p``."""
    _require_default(xi)
    povm = build_povm(n_qubits, xi)
    u = povm.unit_states
    quad = np.real(np.einsum("si,tij,sj->st", u.conj(), _all_K(n_qubits), u))
    return OmegaMatrix(n_qubits, quad * (povm.norms2 * povm.weights)[None, :])


def expected_constraint_rank(n_qubits: int) -> int:
    return n_qubits * (n_qubits ** 2 - 1) // 6
