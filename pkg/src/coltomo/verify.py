"""Invariant checks driven by ``coltomo verify``.

Each check returns the largest deviation it saw; a check passes when that
deviation is at most the tolerance it is bound to.  Integer identities use
the ``exact`` tolerance (zero by default).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import binary_pauli as bp
from . import collective_recon as cr
from . import dicke_tomo as dt
from . import phase_space as ps
from . import special_fn as sf
from .sampling import random_density, random_symmetric_density

DEFAULT_TOLERANCES = {
    "exact": 0.0,
    "identity": 1e-10,
    "roundtrip": 1e-9,
    "relative": 1e-12,
    "rank": 1e-8,
}

# exhaustive phase-space checks build 4^N dense kernels
MAX_PHASE_SPACE_QUBITS = 5
MAX_SPECIAL_FN_QUBITS = 4
PROFILES = ("full", "dicke")


@dataclass(frozen=True)
class CheckResult:
    check_name: str
    n_qubits: int
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tolerance)

    def to_json(self) -> dict:
        return {
            "check_name": self.check_name,
            "N": self.n_qubits,
            "max_error": float(self.max_error),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
        }


def _maxabs(x) -> float:
    return float(np.max(np.abs(x), initial=0.0))


# ---------------------------------------------------------------- binary_pauli


def triple_count_error(n: int) -> float:
    return abs(len(bp.enumerate_triples(n)) - (n + 1) * (n + 2) * (n + 3) // 6)


def weight_sum_error(n: int) -> float:
    return abs(sum(bp.r_mnk(n, t) for t in bp.enumerate_triples(n)) - 4 ** n)


def weight_census_error(n: int) -> float:
    counts = np.bincount(bp.pair_triple_ids(n).ravel(), minlength=len(bp.enumerate_triples(n)))
    return _maxabs(counts - sf.r_vector(n))


# ----------------------------------------------------------------- phase_space


def biorthogonality_error(fid: ps.FiducialState) -> float:
    dim = fid.dim
    dual = ps.all_kernels(1, fid).reshape(dim * dim, -1)
    rank_one = ps.all_kernels(-1, fid).reshape(dim * dim, dim, dim)
    # Tr(A B) = sum_ij A_ij B_ji
    gram = dual @ rank_one.transpose(0, 2, 1).reshape(dim * dim, -1).T
    return _maxabs(gram - np.eye(dim * dim))


def rank_one_error(fid: ps.FiducialState) -> float:
    states = ps.coherent_states(fid)
    proj = np.einsum("abi,abj->abij", states, states.conj())
    return _maxabs(ps.all_kernels(-1, fid) - proj)


def full_roundtrip_error(fid: ps.FiducialState, rng: np.random.Generator, samples: int) -> float:
    return max(_maxabs(ps.reconstruct_full(rho, fid) - rho)
               for rho in (random_density(rng, fid.dim) for _ in range(samples)))


# ------------------------------------------------------------------ special_fn


def g_closedform_error(n: int) -> float:
    table = sf.g_table(n)
    triples = bp.enumerate_triples(n)
    return max(abs(sf.g_closedform(n, t, u) - table[i, j])
               for i, t in enumerate(triples) for j, u in enumerate(triples))


def g_dual_orthogonality_error(n: int) -> float:
    return float(max(sf.dual_orthogonality_residuals(n)))


def f_closedform_error(n: int) -> float:
    table = sf.f_table(n)
    triples = bp.enumerate_triples(n)
    return max(abs(sf.f_closedform(n, m, k, w) - table[m, k, j])
               for m in range(n + 1) for k in range(n + 1) for j, w in enumerate(triples))


def psi_closedform_error(n: int, xi: complex) -> float:
    table = sf.psi_table(n, xi)
    worst = 0.0
    for i, t in enumerate(bp.enumerate_triples(n)):
        for l in range(n + 1):
            ref = table[i, l]
            worst = max(worst, abs(sf.psi_closedform(n, l, t, xi) - ref) / max(abs(ref), 1.0))
    return worst


# ------------------------------------------------------------ collective_recon


def f_orthogonality_error(n: int) -> float:
    fs = cr.all_F(n)
    gram = np.einsum("tij,uji->tu", fs, fs)
    return _maxabs(gram - np.diag(2.0 ** n * sf.r_vector(n)))


def f_diagonal_forms_error(n: int) -> float:
    return max(_maxabs(cr.build_F(n, t) - form) for t, form in cr.diagonal_F_forms(n).items())


def symmetric_recovery_error(n: int, rng: np.random.Generator, samples: int) -> float:
    """``1 - F(rho_rec, psi)`` for random pure symmetric states."""
    e = dt.dicke_embedding(n)
    worst = 0.0
    for _ in range(samples):
        c = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        psi = e @ (c / np.linalg.norm(c))
        rec = cr.reconstruct_collective(cr.collective_expectations(np.outer(psi, psi.conj())))
        worst = max(worst, abs(1 - cr.fidelity(rec, psi)))
    return worst


def permutation_invariance_error(n: int, rng: np.random.Generator) -> float:
    rec = cr.reconstruct_collective(cr.collective_expectations(random_density(rng, 1 << n)))
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            p = bp.swap_matrix(n, i, j)
            worst = max(worst, _maxabs(p @ rec @ p.T - rec))
    return worst


def idempotence_error(n: int, rng: np.random.Generator) -> float:
    rec = cr.reconstruct_collective(cr.collective_expectations(random_density(rng, 1 << n)))
    again = cr.reconstruct_collective(cr.collective_expectations(rec, strict=False))
    return _maxabs(again - rec)


def kernel_expansion_error(n: int, fid: ps.FiducialState) -> float:
    return max(
        _maxabs(cr.kernel_symmetric(s, t, n) - cr.fiber_kernel_sum(s, t, fid))
        for s in (1, -1) for t in bp.enumerate_triples(n)
    )


def fidelity_2q_error(points: int = 50) -> float:
    thetas = np.linspace(0, math.pi / 2, points)
    numeric = [
        cr.fidelity(cr.reconstruct_collective(cr.collective_expectations(np.outer(v, v.conj()))), v)
        for v in (cr.ParamState2Q(t, beta=0.3, alpha1=0.4, alpha2=1.2, gamma1=0.5, gamma2=2.0).vector()
                  for t in thetas)
    ]
    return _maxabs(np.array(numeric) - cr.fidelity_2q_formula(thetas))


def block_3q_error(rng: np.random.Generator, samples: int) -> float:
    worst = 0.0
    for _ in range(samples):
        theta, alpha, t2, t3 = rng.uniform(0, math.pi / 2, size=4)
        beta, gamma, b2, b3 = rng.uniform(0, 2 * math.pi, size=4)
        state = cr.ParamState3Q(theta, alpha, beta=beta, gamma=gamma, theta2=t2, beta2=b2, theta3=t3, beta3=b3)
        v = state.vector()
        blocks = cr.blocks_3q(cr.reconstruct_collective(cr.collective_expectations(np.outer(v, v.conj()))))
        expected = math.cos(theta) ** 2 / 2 * state.expected_block()
        worst = max(worst, _maxabs(blocks["s1"] - expected), _maxabs(blocks["s2"] - expected))
    return worst


# ------------------------------------------------------------------ dicke_tomo


def dicke_rank_one_error(fid: ps.FiducialState) -> float:
    n = fid.n_qubits
    e = dt.dicke_embedding(n)
    sym = e @ e.T
    povm = dt.build_povm(n, fid.xi)
    embedded = povm.states @ e.T  # Psi_t in the computational basis
    ids = bp.pair_triple_ids(n)
    states = ps.coherent_states(fid)
    projected = np.einsum("ij,abj->abi", sym, states)
    return _maxabs(projected - embedded[ids])


def povm_completeness_error(n: int, xi: complex) -> float:
    return _maxabs(dt.build_povm(n, xi).completeness() - 2.0 ** n * np.eye(n + 1))


def symmetric_roundtrip_error(n: int, xi: complex, rng: np.random.Generator, samples: int) -> float:
    povm = dt.build_povm(n, xi)
    worst = 0.0
    for _ in range(samples):
        rho = dt.SymmetricDensity(n, random_symmetric_density(rng, n))
        rec = dt.reconstruct_symmetric(dt.measure_probabilities(rho, povm), n, xi)
        worst = max(worst, _maxabs(rec.matrix - rho.matrix))
    return worst


def omega_fixed_point_error(n: int, xi: complex, rng: np.random.Generator, samples: int) -> float:
    povm = dt.build_povm(n, xi)
    omega = dt.build_omega(n, xi).matrix
    worst = 0.0
    for _ in range(samples):
        p = dt.measure_probabilities(dt.SymmetricDensity(n, random_symmetric_density(rng, n)), povm)
        vec = np.array([p[t] for t in bp.enumerate_triples(n)])
        worst = max(worst, _maxabs(omega @ vec - vec))
    return worst


def rank_report(n: int, xi: complex, rel_tol: float) -> dict:
    omega = dt.build_omega(n, xi)
    return {
        "N": n,
        "T": len(omega.matrix),
        "rank": omega.rank(rel_tol),
        "independent_count": omega.independent_count(rel_tol),
    }


# ----------------------------------------------------------------------- suite


def run_suite(n: int, xi: complex, seed: int, tolerances: dict[str, float] | None = None,
              profile: str = "full", samples: int = 5) -> tuple[list[CheckResult], dict | None]:
    """Run every check that applies at ``n`` and return the results and the Omega rank report.

    Checks that are tied to the default fiducial are skipped for other
    values of xi; the 2- and 3-qubit family checks run only at their N.
    """
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; choose from {PROFILES}")
    tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    rng = np.random.default_rng(seed)
    fid = ps.FiducialState(n, xi)
    default = fid.is_default
    results: list[CheckResult] = []
    checks: list[tuple[str, str, Callable[[], float]]] = []

    if profile == "full":
        checks += [
            ("triple_count", "exact", lambda: triple_count_error(n)),
            ("weight_sum", "exact", lambda: weight_sum_error(n)),
            ("weight_census", "exact", lambda: weight_census_error(n)),
        ]
        if n <= MAX_PHASE_SPACE_QUBITS:
            checks += [
                ("kernel_biorthogonality", "identity", lambda: biorthogonality_error(fid)),
                ("kernel_rank_one", "identity", lambda: rank_one_error(fid)),
                ("full_roundtrip", "roundtrip", lambda: full_roundtrip_error(fid, rng, samples)),
            ]
        if n <= MAX_SPECIAL_FN_QUBITS:
            checks += [
                ("g_closedform", "exact", lambda: g_closedform_error(n)),
                ("g_dual_orthogonality", "exact", lambda: g_dual_orthogonality_error(n)),
                ("f_closedform", "exact", lambda: f_closedform_error(n)),
                ("psi_closedform", "relative", lambda: psi_closedform_error(n, xi)),
            ]
        checks += [
            ("F_orthogonality", "identity", lambda: f_orthogonality_error(n)),
            ("F_diagonal_forms", "identity", lambda: f_diagonal_forms_error(n)),
            ("collective_symmetric_recovery", "roundtrip", lambda: symmetric_recovery_error(n, rng, samples)),
            ("collective_permutation_invariance", "identity", lambda: permutation_invariance_error(n, rng)),
            ("collective_idempotence", "roundtrip", lambda: idempotence_error(n, rng)),
        ]
        if default and n <= MAX_PHASE_SPACE_QUBITS:
            checks.append(("kernel_symmetric_expansion", "roundtrip", lambda: kernel_expansion_error(n, fid)))
        if n == 2:
            checks.append(("fidelity_2q_formula", "identity", fidelity_2q_error))
        if n == 3:
            checks.append(("block_3q_closed_form", "identity", lambda: block_3q_error(rng, samples)))

    if n <= MAX_PHASE_SPACE_QUBITS:
        checks.append(("dicke_rank_one", "identity", lambda: dicke_rank_one_error(fid)))
    checks.append(("povm_completeness", "identity", lambda: povm_completeness_error(n, xi)))
    report = None
    if default:
        checks += [
            ("symmetric_roundtrip", "roundtrip", lambda: symmetric_roundtrip_error(n, xi, rng, samples)),
            ("omega_fixed_point", "roundtrip", lambda: omega_fixed_point_error(n, xi, rng, samples)),
        ]
        report = rank_report(n, xi, tol["rank"])
        checks.append(("omega_rank", "exact",
                       lambda: float(abs(report["rank"] - dt.expected_constraint_rank(n)))))

    for name, tol_name, fn in checks:
        results.append(CheckResult(name, n, float(fn()), tol[tol_name]))
    return results, report
