"""Partial tomography from permutation-invariant (collective) measurements."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .binary_pauli import (
    HammingTriple,
    check_capacity,
    enumerate_triples,
    pair_triple_ids,
    pauli_sum,
    popcount,
    r_mnk,
    require_admissible,
    triple_index,
)
from .errors import (
    DimensionError,
    DomainError,
    IncompleteDataError,
    UnsupportedFiducialError,
    ValidationError,
)
from .phase_space import DEFAULT_XI, FiducialState, PhaseSpaceSymbol, all_kernels, expand, q_symbol
from .special_fn import g_table, r_vector

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-8
EIGENVALUE_TOL = 1e-8


# ----------------------------------------------------------------- data tables


@dataclass(frozen=True)
class ProjectedQTable:
    """Q function summed over each weight-triple fiber."""

    n_qubits: int
    values: dict = field(repr=False)

    def as_array(self) -> np.ndarray:
        return np.array([self.values[t] for t in enumerate_triples(self.n_qubits)])


@dataclass(frozen=True)
class CollectiveExpectations:
    """``<F_mnk>`` for every admissible triple."""

    n_qubits: int
    values: dict = field(repr=False)

    def as_array(self) -> np.ndarray:
        return np.array([self.values[t] for t in enumerate_triples(self.n_qubits)])


def _complete(n_qubits: int, values: dict) -> np.ndarray:
    triples = enumerate_triples(n_qubits)
    missing = [tuple(t) for t in triples if t not in values]
    if missing:
        raise IncompleteDataError(missing)
    return np.array([values[t] for t in triples])


def _real_if_close(x: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    if np.iscomplexobj(x) and np.all(np.abs(x.imag) <= tol * max(1.0, np.abs(x).max())):
        return x.real
    return x


def project_q(symbol: PhaseSpaceSymbol) -> ProjectedQTable:
    if symbol.kind != "Q":
        raise DomainError(f"projection needs a Q symbol, got {symbol.kind}")
    n = symbol.n_qubits
    ids = pair_triple_ids(n).ravel()
    vals = np.asarray(symbol.values).ravel()
    size = len(enumerate_triples(n))
    binned = np.bincount(ids, weights=vals.real, minlength=size).astype(complex)
    binned += 1j * np.bincount(ids, weights=vals.imag, minlength=size)
    binned = _real_if_close(binned)
    return ProjectedQTable(n, {t: binned[i].item() for i, t in enumerate(enumerate_triples(n))})


def lift_q(table: ProjectedQTable) -> PhaseSpaceSymbol:
    """Spread each fiber total uniformly over the fiber (division by R inside the sum)."""
    n = table.n_qubits
    per_point = _complete(n, table.values) / r_vector(n)
    return PhaseSpaceSymbol("Q", per_point[pair_triple_ids(n)])


# ---------------------------------------------------------------- F operators


def build_F(n_qubits: int, triple) -> np.ndarray:
    """``F_mnk = sum (-i)^{mu.lambda} Z_mu X_lambda`` over the fiber of ``triple``."""
    t = require_admissible(n_qubits, triple)
    return all_F(n_qubits)[triple_index(n_qubits)[t]].copy()


@lru_cache(maxsize=8)
def all_F(n_qubits: int) -> np.ndarray:
    """Stack of every ``F_t`` in triple order."""
    check_capacity(n_qubits)
    dim = 1 << n_qubits
    ids = pair_triple_ids(n_qubits)
    idx = np.arange(dim)
    phases = (-1j) ** popcount(idx[:, None] & idx[None, :])
    out = np.empty((len(enumerate_triples(n_qubits)), dim, dim), dtype=complex)
    for i in range(out.shape[0]):
        out[i] = pauli_sum(np.where(ids == i, phases, 0))
    out.setflags(write=False)
    return out


def total_spin(n_qubits: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``S_j = sum_i sigma_j^(i)`` for j = x, y, z."""
    paulis = (
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, -1j], [1j, 0]]),
        np.array([[1, 0], [0, -1]], dtype=complex),
    )
    out = []
    for p in paulis:
        s = np.zeros((1 << n_qubits,) * 2, dtype=complex)
        for i in range(n_qubits):
            s += np.kron(np.kron(np.eye(1 << i), p), np.eye(1 << (n_qubits - i - 1)))
        out.append(s)
    return tuple(out)


def total_spin_projectors(n_qubits: int, tol: float = 1e-8) -> dict[float, np.ndarray]:
    """Projectors onto the eigenspaces of ``S^2``, keyed by spin j."""
    sx, sy, sz = total_spin(n_qubits)
    s2 = (sx @ sx + sy @ sy + sz @ sz) / 4
    vals, vecs = np.linalg.eigh(s2)
    out: dict[float, np.ndarray] = {}
    start = 0
    while start < len(vals):
        stop = start
        while stop < len(vals) and abs(vals[stop] - vals[start]) < tol:
            stop += 1
        j = round((-1 + math.sqrt(1 + 4 * vals[start:stop].mean())) / 2 * 2) / 2
        v = vecs[:, start:stop]
        out[j] = v @ v.conj().T
        start = stop
    return out


# ------------------------------------------------------------ reconstruction


def validate_density(rho: np.ndarray, strict: bool = True) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density matrix must be square, got {rho.shape}")
    problems = []
    if np.abs(rho - rho.conj().T).max() > HERMITICITY_TOL:
        problems.append("not Hermitian")
    if abs(np.trace(rho) - 1) > TRACE_TOL:
        problems.append(f"trace {np.trace(rho).real:.3g} != 1")
    elif np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() < -EIGENVALUE_TOL:
        problems.append("negative eigenvalue")
    if problems:
        msg = "invalid density matrix: " + ", ".join(problems)
        if strict:
            raise ValidationError(msg)
        warnings.warn(msg, stacklevel=2)
    return rho


def _n_from_dim(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim != 1 << n or n < 1:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def collective_expectations(rho: np.ndarray, strict: bool = True) -> CollectiveExpectations:
    rho = validate_density(rho, strict=strict)
    n = _n_from_dim(rho.shape[0])
    exps = np.einsum("ij,tji->t", rho, all_F(n))
    exps = _real_if_close(exps)
    return CollectiveExpectations(n, {t: exps[i].item() for i, t in enumerate(enumerate_triples(n))})


def reconstruct_collective(exps: CollectiveExpectations) -> np.ndarray:
    """``2^-N sum_t <F_t> F_t / R_t``."""
    n = exps.n_qubits
    coeffs = _complete(n, exps.values) / r_vector(n) / 2.0 ** n
    return np.tensordot(coeffs, all_F(n), axes=1)


def reconstruct_lifted(rho: np.ndarray, fid: FiducialState) -> np.ndarray:
    """Same estimate through the phase-space route: project Q, lift, expand."""
    return expand(lift_q(project_q(q_symbol(rho, fid))), fid)


def fiber_kernel_sum(s: int, triple, fid: FiducialState) -> np.ndarray:
    """Direct sum of ``Delta^(s)(alpha, beta)`` over the fiber of ``triple``."""
    t = require_admissible(fid.n_qubits, triple)
    mask = pair_triple_ids(fid.n_qubits) == triple_index(fid.n_qubits)[t]
    return all_kernels(s, fid)[mask].sum(axis=0)


def kernel_symmetric(s: int, triple, n_qubits: int, xi: complex = DEFAULT_XI) -> np.ndarray:
    """Fiber-summed kernel through its expansion in the F operators.

    The powers of 3 are the moduli of the fiducial overlaps of the default
    fiducial, so no other fiducial is accepted.
    """
    if s not in (1, -1):
        raise DomainError(f"s must be +1 or -1, got {s}")
    if complex(xi) != DEFAULT_XI:
        raise UnsupportedFiducialError("the F-expansion of the fiber kernels is only known for the default xi")
    t = require_admissible(n_qubits, triple)
    row = g_table(n_qubits)[triple_index(n_qubits)[t]]
    weights = np.array([3.0 ** (s * sum(u) / 4) for u in enumerate_triples(n_qubits)])
    return np.tensordot(row * weights, all_F(n_qubits), axes=1) / 2.0 ** ((3 + s) * n_qubits / 2)


def fidelity(rho_rec: np.ndarray, psi: np.ndarray) -> float:
    """``<psi| rho |psi>``, clamped to [0, 1] against rounding."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if rho_rec.shape != (psi.size, psi.size):
        raise DimensionError(f"state of size {psi.size} does not match operator {rho_rec.shape}")
    value = float(np.real(psi.conj() @ rho_rec @ psi))
    if value < -1e-12 or value > 1 + 1e-12:
        return value
    return min(max(value, 0.0), 1.0)


# ----------------------------------------------------------- worked examples


def _ket(bits: str) -> np.ndarray:
    out = np.zeros(1 << len(bits), dtype=complex)
    out[int(bits, 2)] = 1
    return out


@dataclass(frozen=True)
class ParamState2Q:
    """``sin(theta)|anti> + e^{i beta} cos(theta)|sym>``."""

    theta: float
    beta: float = 0.0
    alpha1: float = 0.0
    alpha2: float = 0.0
    gamma1: float = 0.0
    gamma2: float = 0.0

    @property
    def psi_anti(self) -> np.ndarray:
        return (_ket("01") - _ket("10")) / math.sqrt(2)

    @property
    def psi_sym(self) -> np.ndarray:
        a1, a2 = self.alpha1, self.alpha2
        return (
            math.sin(a1) * _ket("00")
            + np.exp(1j * self.gamma1) * math.cos(a1) * math.sin(a2) * (_ket("01") + _ket("10")) / math.sqrt(2)
            + np.exp(1j * self.gamma2) * math.cos(a1) * math.cos(a2) * _ket("11")
        )

    def vector(self) -> np.ndarray:
        return math.sin(self.theta) * self.psi_anti + np.exp(1j * self.beta) * math.cos(self.theta) * self.psi_sym

    def expected_reconstruction(self) -> np.ndarray:
        a, s = self.psi_anti, self.psi_sym
        return math.sin(self.theta) ** 2 * np.outer(a, a.conj()) + math.cos(self.theta) ** 2 * np.outer(s, s.conj())


def fidelity_2q_formula(theta):
    return (3 + np.cos(4 * np.asarray(theta))) / 4


# bases of the two spin-1/2 subspaces of three qubits; a -> b under the collective raising operator
S1_BASIS = np.array([
    (2 * _ket("100") - _ket("010") - _ket("001")) / math.sqrt(6),
    (_ket("101") - 2 * _ket("011") + _ket("110")) / math.sqrt(6),
])
S2_BASIS = np.array([
    (_ket("001") - _ket("010")) / math.sqrt(2),
    (_ket("101") - _ket("110")) / math.sqrt(2),
])
SYM3_BASIS = np.array([
    _ket("000"),
    (_ket("100") + _ket("010") + _ket("001")) / math.sqrt(3),
    (_ket("110") + _ket("101") + _ket("011")) / math.sqrt(3),
    _ket("111"),
])


@dataclass(frozen=True)
class ParamState3Q:
    """``sin(theta)|sym> + e^{i beta} cos(theta) sin(alpha)|psi1> + e^{i gamma} cos(theta) cos(alpha)|psi2>``."""

    theta: float
    alpha: float
    beta: float = 0.0
    gamma: float = 0.0
    theta1: float = 0.3
    alpha1: float = 0.7
    alpha2: float = 1.1
    beta1: float = 0.4
    gamma1: float = 1.9
    gamma2: float = 2.6
    theta2: float = 0.0
    beta2: float = 0.0
    theta3: float = 0.0
    beta3: float = 0.0

    @property
    def psi_sym(self) -> np.ndarray:
        # these amplitudes are not normalized for every parameter choice
        c1 = math.cos(self.theta1)
        amps = np.array([
            math.sin(self.theta1),
            np.exp(1j * self.beta1) * c1 * math.sin(self.alpha1),
            np.exp(1j * self.gamma1) * c1 * math.sin(self.alpha1) * math.sin(self.alpha2),
            np.exp(1j * self.gamma2) * c1 * math.cos(self.alpha1) * math.cos(self.alpha2),
        ])
        v = amps @ SYM3_BASIS
        return v / np.linalg.norm(v)

    @property
    def psi1(self) -> np.ndarray:
        return math.sin(self.theta2) * S1_BASIS[0] + np.exp(1j * self.beta2) * math.cos(self.theta2) * S1_BASIS[1]

    @property
    def psi2(self) -> np.ndarray:
        return math.sin(self.theta3) * S2_BASIS[0] + np.exp(1j * self.beta3) * math.cos(self.theta3) * S2_BASIS[1]

    def vector(self) -> np.ndarray:
        ct = math.cos(self.theta)
        return (
            math.sin(self.theta) * self.psi_sym
            + np.exp(1j * self.beta) * ct * math.sin(self.alpha) * self.psi1
            + np.exp(1j * self.gamma) * ct * math.cos(self.alpha) * self.psi2
        )

    def expected_block(self) -> np.ndarray:
        """The common 2x2 spin-1/2 block (before the ``cos^2(theta)/2`` weight)."""
        sa2, ca2 = math.sin(self.alpha) ** 2, math.cos(self.alpha) ** 2
        t2, t3 = self.theta2, self.theta3
        c2 = 0.5 * (np.exp(-1j * self.beta2) * sa2 * math.sin(2 * t2) + np.exp(-1j * self.beta3) * ca2 * math.sin(2 * t3))
        return np.array([
            [sa2 * math.sin(t2) ** 2 + ca2 * math.sin(t3) ** 2, c2],
            [np.conj(c2), ca2 * math.cos(t3) ** 2 + math.cos(t2) ** 2 * sa2],
        ])


def blocks_3q(rho: np.ndarray) -> dict[str, np.ndarray]:
    """Matrix of ``rho`` in the symmetric subspace and in both spin-1/2 subspaces."""
    return {
        name: basis.conj() @ rho @ basis.T
        for name, basis in (("sym", SYM3_BASIS), ("s1", S1_BASIS), ("s2", S2_BASIS))
    }


def avg_fidelity_3q_formula(theta, alpha):
    theta, alpha = np.asarray(theta), np.asarray(alpha)
    return np.sin(theta) ** 2 + (0.75 + 0.25 * np.cos(2 * alpha) ** 2) * np.cos(theta) ** 2


def avg_overlap_fidelity_3q_formula(theta, alpha):
    """Average of plain ``<psi|rho_rec|psi>`` over the same grid."""
    theta, alpha = np.asarray(theta), np.asarray(alpha)
    return np.sin(theta) ** 4 + 0.5 * np.cos(theta) ** 4 * (0.75 + 0.25 * np.cos(2 * alpha) ** 2)


def _phase_grid(resolution: int) -> tuple[np.ndarray, np.ndarray]:
    # midpoints on [0, pi/2] and a periodic grid on [0, 2 pi): both average sin^2 exactly
    thetas = (np.arange(resolution) + 0.5) * (math.pi / 2) / resolution
    phases = np.arange(resolution) * 2 * math.pi / resolution
    return thetas, phases


def avg_fidelity_3q(theta: float, alpha: float, resolution: int = 16, measure: str = "block",
                    base: ParamState3Q | None = None) -> float:
    """Average reconstruction fidelity over the parameters of psi1 and psi2.

    ``measure="block"`` weights each irreducible block (symmetric, S1, S2) by
    the population of the state in it and scores the block by the overlap of
    the normalized projected state with the normalized reconstructed block.
    ``measure="overlap"`` averages the plain ``<psi|rho_rec|psi>``.
    The reconstruction goes through the collective expectation values.
    """
    if resolution < 16:
        raise DomainError(f"need at least 16 grid points per phase, got {resolution}")
    if measure not in ("block", "overlap"):
        raise DomainError(f"unknown fidelity measure {measure!r}")
    base = base or ParamState3Q(theta, alpha)
    thetas, phases = _phase_grid(resolution)
    t2, b2, t3, b3 = (x.ravel() for x in np.meshgrid(thetas, phases, thetas, phases, indexing="ij"))
    psi1 = np.sin(t2)[:, None] * S1_BASIS[0] + np.exp(1j * b2)[:, None] * np.cos(t2)[:, None] * S1_BASIS[1]
    psi2 = np.sin(t3)[:, None] * S2_BASIS[0] + np.exp(1j * b3)[:, None] * np.cos(t3)[:, None] * S2_BASIS[1]
    ct = math.cos(theta)
    psi = (
        math.sin(theta) * base.psi_sym[None, :]
        + np.exp(1j * base.beta) * ct * math.sin(alpha) * psi1
        + np.exp(1j * base.gamma) * ct * math.cos(alpha) * psi2
    )
    fs = all_F(3)
    coeffs = 1.0 / r_vector(3) / 8.0

    stacked = fs.transpose(2, 0, 1).reshape(8, -1)

    def quad(u, v):
        # <u| F_t |v> for every state in the batch and every triple
        fv = (v @ stacked).reshape(v.shape[0], fs.shape[0], 8)
        return np.einsum("si,sti->st", u.conj(), fv)

    exps = quad(psi, psi)  # collective data of each state
    if measure == "overlap":
        return float(np.real((exps * coeffs * exps).sum(axis=1)).mean())
    total = np.zeros(psi.shape[0])
    for basis in (SYM3_BASIS, S1_BASIS, S2_BASIS):
        proj = (psi @ basis.conj().T) @ basis
        weight = np.real(np.einsum("si,si->s", proj.conj(), proj))
        # weight * <psi_B|rho_B|psi_B> with both normalized = <P psi|rho|P psi> / Tr(P rho)
        num = np.real((quad(proj, proj) * coeffs * exps).sum(axis=1))
        rho_trace = np.real(exps @ (coeffs * np.einsum("ai,tij,aj->t", basis.conj(), fs, basis)))
        ok = (weight > 1e-14) & (rho_trace > 1e-14)
        total[ok] += num[ok] / rho_trace[ok]
    return float(total.mean())


def diagonal_F_forms(n_qubits: int) -> dict[HammingTriple, np.ndarray]:
    """Closed forms of the diagonal ``F_{m0m}`` as polynomials in ``S_z`` (m <= 3)."""
    sz = total_spin(n_qubits)[2]
    eye = np.eye(1 << n_qubits)
    forms = {
        HammingTriple(0, 0, 0): eye.astype(complex),
        HammingTriple(1, 0, 1): sz,
        HammingTriple(2, 0, 2): (sz @ sz - n_qubits * eye) / 2,
        HammingTriple(3, 0, 3): (sz @ sz @ sz - (3 * n_qubits - 2) * sz) / 6,
    }
    return {t: f for t, f in forms.items() if t.m <= n_qubits}
