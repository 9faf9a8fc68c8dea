"""Independent reference implementations used only by the tests.

Everything here is built from Kronecker products of 2x2 matrices and
explicit loops, sharing no code with the package beyond plain integers.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.array([[1, 0], [0, -1]], dtype=complex)
XI_DEFAULT = (math.sqrt(3) - 1) / math.sqrt(2) * complex(math.cos(math.pi / 4), math.sin(math.pi / 4))


def bits(value: int, n: int) -> list[int]:
    return [(value >> (n - 1 - i)) & 1 for i in range(n)]


def kron_all(mats) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def monomial(n: int, z: int, x: int) -> np.ndarray:
    """``Z_z X_x`` as a Kronecker product of single-qubit ``Z^z_i X^x_i``."""
    return kron_all(
        np.linalg.matrix_power(Z, zi) @ np.linalg.matrix_power(X, xi)
        for zi, xi in zip(bits(z, n), bits(x, n))
    )


def weight(v: int) -> int:
    return bin(v).count("1")


def fiducial(n: int, xi: complex = XI_DEFAULT) -> np.ndarray:
    single = np.array([1, xi], dtype=complex) / math.sqrt(1 + abs(xi) ** 2)
    return kron_all([single[:, None]] * n).ravel()


def coherent(n: int, a: int, b: int, xi: complex = XI_DEFAULT) -> np.ndarray:
    return monomial(n, a, b) @ fiducial(n, xi)


def kernel(s: int, n: int, a: int, b: int, xi: complex = XI_DEFAULT) -> np.ndarray:
    """Direct double sum over all monomials."""
    f = fiducial(n, xi)
    out = np.zeros((1 << n, 1 << n), dtype=complex)
    for g in range(1 << n):
        for d in range(1 << n):
            mono = monomial(n, g, d)
            ov = np.vdot(f, mono @ f)
            expo = weight(a & d) + weight(b & g)
            if s == -1:
                expo += weight(g & d)
            out += (-1) ** expo * ov ** (-s) * mono
    return out / 2 ** (n * (s + 3) / 2)


def triple_of(a: int, b: int) -> tuple[int, int, int]:
    return weight(a), weight(b), weight(a ^ b)


def F(n: int, triple) -> np.ndarray:
    out = np.zeros((1 << n, 1 << n), dtype=complex)
    for mu in range(1 << n):
        for lam in range(1 << n):
            if triple_of(mu, lam) == tuple(triple):
                out += (-1j) ** weight(mu & lam) * monomial(n, mu, lam)
    return out


def spin(n: int, pauli: np.ndarray) -> np.ndarray:
    return sum(kron_all([pauli if j == i else I2 for j in range(n)]) for i in range(n))


def dicke(n: int, l: int) -> np.ndarray:
    v = np.array([1.0 if weight(k) == l else 0.0 for k in range(1 << n)])
    return v / math.sqrt(math.comb(n, l))


def permutation_unitary(n: int, perm) -> np.ndarray:
    out = np.zeros((1 << n, 1 << n))
    for col in range(1 << n):
        b = bits(col, n)
        moved = [0] * n
        for i, bit in enumerate(b):
            moved[perm[i]] = bit
        out[int("".join(map(str, moved)), 2), col] = 1
    return out


def symmetrizer_by_averaging(n: int) -> np.ndarray:
    perms = list(itertools.permutations(range(n)))
    return sum(permutation_unitary(n, p) for p in perms) / len(perms)


def twirl(rho: np.ndarray, n: int) -> np.ndarray:
    """Average of ``U_pi rho U_pi^T`` over all qubit permutations."""
    perms = list(itertools.permutations(range(n)))
    return sum(u @ rho @ u.T for u in (permutation_unitary(n, p) for p in perms)) / len(perms)


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_symmetric_state(rng: np.random.Generator, n: int) -> np.ndarray:
    c = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    c /= np.linalg.norm(c)
    return sum(c[l] * dicke(n, l) for l in range(n + 1))
