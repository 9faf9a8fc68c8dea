"""
Binary N-tuples, Hamming-weight triples and Pauli monomials.

Conventions
-----------
* Bit order: component 1 of a tuple is the most significant bit of the
  integer that labels the computational basis state, so ``(1, 0, 0)`` is
  ``|100>`` = basis index 4.
* ``Z_a X_b`` is an ordinary operator product: ``X_b`` acts on the ket
  first, hence ``Z_a X_b |k> = (-1)^{a.(k+b)} |k+b>``.  Equivalently
  ``<k| Z_a X_b |k'> = (-1)^{a.k} delta(k, k'+b)``: the sign is carried by
  the *row* index.
* Exponents of -1 use the dot product mod 2, exponents of +-i use the
  integer dot product.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, NamedTuple

import numpy as np

from .errors import CapacityError, DimensionError, DomainError

DEFAULT_MAX_QUBITS = 10


@dataclass(frozen=True)
class BinaryTuple:
    """Element of Z_2^N."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if not bits:
            raise DomainError("a binary tuple needs at least one component")
        if any(b not in (0, 1) for b in bits):
            raise DomainError(f"components must be 0 or 1, got {bits}")
        object.__setattr__(self, "bits", bits)

    @property
    def n_qubits(self) -> int:
        return len(self.bits)

    @classmethod
    def from_int(cls, value: int, n_qubits: int) -> "BinaryTuple":
        if not 0 <= value < (1 << n_qubits):
            raise DomainError(f"{value} does not fit in {n_qubits} bits")
        return cls(tuple((value >> (n_qubits - 1 - i)) & 1 for i in range(n_qubits)))

    @classmethod
    def zeros(cls, n_qubits: int) -> "BinaryTuple":
        return cls((0,) * n_qubits)

    def to_int(self) -> int:
        out = 0
        for b in self.bits:
            out = (out << 1) | b
        return out

    def __add__(self, other: "BinaryTuple") -> "BinaryTuple":
        _check_same_length(self, other)
        return BinaryTuple(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)


class HammingTriple(NamedTuple):
    """Weights ``(h(a), h(b), h(a+b))`` of a pair of tuples."""

    m: int
    n: int
    k: int


@dataclass(frozen=True)
class PauliMonomial:
    """The operator ``Z_alpha X_beta``."""

    z_part: BinaryTuple
    x_part: BinaryTuple

    def __post_init__(self):
        _check_same_length(self.z_part, self.x_part)

    @property
    def n_qubits(self) -> int:
        return self.z_part.n_qubits

    def matrix(self, cap: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
        return monomial_matrix(self, cap=cap)


def _check_same_length(a: BinaryTuple, b: BinaryTuple) -> None:
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"tuple lengths differ: {a.n_qubits} vs {b.n_qubits}")


def check_capacity(n_qubits: int, cap: int = DEFAULT_MAX_QUBITS) -> None:
    if n_qubits < 1:
        raise DomainError(f"need at least one qubit, got N={n_qubits}")
    if n_qubits > cap:
        raise CapacityError(f"N={n_qubits} exceeds the dense cap of {cap} qubits")


def hamming_weight(t: BinaryTuple) -> int:
    return sum(t.bits)


def dot_mod2(a: BinaryTuple, b: BinaryTuple) -> int:
    return dot_integer(a, b) & 1


def dot_integer(a: BinaryTuple, b: BinaryTuple) -> int:
    _check_same_length(a, b)
    return sum(x & y for x, y in zip(a.bits, b.bits))


def popcount(x):
    """Hamming weight of an int or an integer array."""
    if isinstance(x, (int, np.integer)):
        return int(x).bit_count()
    return np.bitwise_count(np.asarray(x)).astype(np.int64)


def weight_triple(a: int, b: int) -> HammingTriple:
    """Weight triple of a pair given as integer bit masks."""
    return HammingTriple(popcount(a), popcount(b), popcount(a ^ b))


def monomial_matrix_int(n_qubits: int, z_mask: int, x_mask: int,
                        cap: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """Dense ``Z_z X_x`` for integer masks; entries are exactly 0 or +-1."""
    check_capacity(n_qubits, cap)
    dim = 1 << n_qubits
    cols = np.arange(dim)
    rows = cols ^ x_mask
    signs = 1 - 2 * (popcount(rows & z_mask) & 1)
    out = np.zeros((dim, dim), dtype=complex)
    out[rows, cols] = signs
    return out


def monomial_matrix(p: PauliMonomial, cap: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    return monomial_matrix_int(p.n_qubits, p.z_part.to_int(), p.x_part.to_int(), cap=cap)


def is_admissible(n_qubits: int, t: Iterable[int]) -> bool:
    m, n, k = t
    if min(m, n, k) < 0 or max(m, n) > n_qubits:
        return False
    return (m + n + k) % 2 == 0 and abs(m - n) <= k <= min(m + n, n_qubits, 2 * n_qubits - m - n)


def require_admissible(n_qubits: int, t: Iterable[int]) -> HammingTriple:
    t = HammingTriple(*t)
    if not is_admissible(n_qubits, t):
        raise DomainError(f"triple {tuple(t)} is not admissible for N={n_qubits}")
    return t


@lru_cache(maxsize=None)
def _triples(n_qubits: int) -> tuple[HammingTriple, ...]:
    out = []
    for m in range(n_qubits + 1):
        for n in range(n_qubits + 1):
            lo = abs(m - n)
            hi = min(m + n, n_qubits, 2 * n_qubits - m - n)
            out.extend(HammingTriple(m, n, k) for k in range(lo, hi + 1, 2))
    return tuple(out)


def enumerate_triples(n_qubits: int) -> list[HammingTriple]:
    """All admissible weight triples in lexicographic order."""
    if n_qubits < 1:
        raise DomainError(f"need at least one qubit, got N={n_qubits}")
    return list(_triples(n_qubits))


@lru_cache(maxsize=None)
def triple_index(n_qubits: int) -> dict[HammingTriple, int]:
    return {t: i for i, t in enumerate(_triples(n_qubits))}


def r_mnk(n_qubits: int, t: Iterable[int]) -> int:
    """Number of pairs (mu, lambda) whose weight triple is ``t``."""
    m, n, k = require_admissible(n_qubits, t)
    return factorial(n_qubits) // (
        factorial((m + n - k) // 2)
        * factorial((2 * n_qubits - m - n - k) // 2)
        * factorial((n - m + k) // 2)
        * factorial((m - n + k) // 2)
    )


def canonical_pair(n_qubits: int, t: Iterable[int]) -> tuple[int, int]:
    """Deterministic representative (a, b), as bit masks, of a weight triple.

    ``a`` has its ``m`` ones in the leading positions; ``b`` overlaps ``a`` in
    the first ``(m+n-k)/2`` positions and puts its remaining ones right after
    the block of ``a``.
    """
    m, n, k = require_admissible(n_qubits, t)
    overlap = (m + n - k) // 2
    a_bits = [1] * m + [0] * (n_qubits - m)
    b_bits = [1] * overlap + [0] * (m - overlap) + [1] * (n - overlap)
    b_bits += [0] * (n_qubits - len(b_bits))
    return BinaryTuple(a_bits).to_int(), BinaryTuple(b_bits).to_int()


@lru_cache(maxsize=None)
def pair_triple_ids(n_qubits: int) -> np.ndarray:
    """Triple index of every pair, as a (2^N, 2^N) array indexed [a, b]."""
    dim = 1 << n_qubits
    a = np.arange(dim)[:, None]
    b = np.arange(dim)[None, :]
    ha, hb, hab = popcount(a), popcount(b), popcount(a ^ b)
    lookup = np.full((n_qubits + 1,) * 3, -1, dtype=np.int64)
    for i, t in enumerate(_triples(n_qubits)):
        lookup[t] = i
    ids = lookup[ha, hb, hab]
    ids.setflags(write=False)
    return ids


def binom_int(n: int, k: int) -> int:
    """Binomial coefficient that is zero outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def qubit_permutation_matrix(n_qubits: int, perm) -> np.ndarray:
    """Unitary that moves qubit ``i`` to position ``perm[i]`` (0-based)."""
    perm = list(perm)
    if sorted(perm) != list(range(n_qubits)):
        raise DomainError(f"{perm} is not a permutation of {n_qubits} qubits")
    dim = 1 << n_qubits
    out = np.zeros((dim, dim))
    for col in range(dim):
        bits = BinaryTuple.from_int(col, n_qubits).bits
        moved = [0] * n_qubits
        for i, b in enumerate(bits):
            moved[perm[i]] = b
        out[BinaryTuple(moved).to_int(), col] = 1.0
    return out


def swap_matrix(n_qubits: int, i: int, j: int) -> np.ndarray:
    perm = list(range(n_qubits))
    perm[i], perm[j] = perm[j], perm[i]
    return qubit_permutation_matrix(n_qubits, perm)


@lru_cache(maxsize=None)
def sign_matrix(n_qubits: int) -> np.ndarray:
    """``H[a, b] = (-1)^{a.b mod 2}`` (unnormalized Walsh-Hadamard matrix)."""
    idx = np.arange(1 << n_qubits)
    out = (1 - 2 * (popcount(idx[:, None] & idx[None, :]) & 1)).astype(float)
    out.setflags(write=False)
    return out


def pauli_sum(coeffs: np.ndarray) -> np.ndarray:
    """Operator ``sum_{g,d} coeffs[g, d] Z_g X_d``."""
    dim = coeffs.shape[0]
    n_qubits = dim.bit_length() - 1
    h = sign_matrix(n_qubits)
    # <r| Z_g X_d |c> = (-1)^{g.r} delta(d, r+c)
    mixed = h.T @ coeffs
    r = np.arange(dim)[:, None]
    c = np.arange(dim)[None, :]
    return mixed[r, r ^ c]


def pauli_coefficients(a: np.ndarray) -> np.ndarray:
    """``t[g, d] = Tr(A Z_g X_d)`` for all monomials."""
    dim = a.shape[0]
    n_qubits = dim.bit_length() - 1
    r = np.arange(dim)[:, None]
    d = np.arange(dim)[None, :]
    return sign_matrix(n_qubits) @ a[r ^ d, r]
