"""Seeded random states used by the CLI and the test-suite oracles."""
from __future__ import annotations

import numpy as np


def ginibre(rng: np.random.Generator, rows: int, cols: int | None = None) -> np.ndarray:
    cols = rows if cols is None else cols
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Normalized ``G G^dagger`` with G complex Ginibre."""
    g = ginibre(rng, dim)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = ginibre(rng, dim)
    return (g + g.conj().T) / 2


def random_pure_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = ginibre(rng, dim, 1).ravel()
    return v / np.linalg.norm(v)


def random_symmetric_density(rng: np.random.Generator, n_qubits: int) -> np.ndarray:
    """Random density matrix on the Dicke space, in the Dicke basis."""
    return random_density(rng, n_qubits + 1)
