"""
Discrete special functions g_mnk, f_mk and psi_l.

Each function has a brute-force evaluator, which is the reference
semantics, and a finite-sum evaluator derived from the generating
functions.  Both are exact for g and f (Python integers); psi is complex.

Position classes
----------------
Every finite sum below comes from splitting the N positions of a pair of
tuples ``(x, y)`` into four classes by the bit pair ``(x_i, y_i)``.  For a
pair with weight triple ``(a, b, c)`` the class sizes are::

    (0,0): N - (a+b+c)/2     (1,0): (a-b+c)/2
    (0,1): (b-a+c)/2         (1,1): (a+b-c)/2
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .binary_pauli import (
    HammingTriple,
    binom_int,
    canonical_pair,
    enumerate_triples,
    pair_triple_ids,
    popcount,
    r_mnk,
    require_admissible,
    weight_triple,
)
from .errors import ConsistencyError, DomainError


def class_sizes(n_qubits: int, weights) -> tuple[int, int, int, int]:
    """Sizes of the position classes (0,0), (1,0), (0,1), (1,1)."""
    a, b, c = require_admissible(n_qubits, weights)
    return (n_qubits - (a + b + c) // 2, (a - b + c) // 2, (b - a + c) // 2, (a + b - c) // 2)


def _representative(n_qubits: int, weights, representative):
    if representative is None:
        return canonical_pair(n_qubits, weights)
    x, y = (int(v) for v in representative)
    if weight_triple(x, y) != HammingTriple(*weights):
        raise DomainError(f"representative {representative} does not have weights {tuple(weights)}")
    return x, y


# --------------------------------------------------------------------------- g


def g_bruteforce(n_qubits: int, triple, args, representative=None) -> int:
    """``sum_{g,d} (-1)^{alpha.d + beta.g}`` over pairs (g, d) of weight ``triple``.

    ``(alpha, beta)`` is any pair with weight triple ``args``.
    """
    triple = require_admissible(n_qubits, triple)
    require_admissible(n_qubits, args)
    alpha, beta = _representative(n_qubits, args, representative)
    dim = 1 << n_qubits
    g = np.arange(dim)[:, None]
    d = np.arange(dim)[None, :]
    in_fiber = pair_triple_ids(n_qubits) == _index(n_qubits, triple)
    signs = 1 - 2 * ((popcount(alpha & d) + popcount(beta & g)) & 1)
    return int(signs[in_fiber].sum())


def _index(n_qubits: int, triple) -> int:
    return enumerate_triples(n_qubits).index(HammingTriple(*triple))


@lru_cache(maxsize=None)
def g_table(n_qubits: int) -> np.ndarray:
    """Integer matrix ``G[t, u] = g_t(u)`` over admissible triples (brute force)."""
    triples = enumerate_triples(n_qubits)
    ids = pair_triple_ids(n_qubits).ravel()
    dim = 1 << n_qubits
    g = np.repeat(np.arange(dim), dim)
    d = np.tile(np.arange(dim), dim)
    out = np.zeros((len(triples), len(triples)), dtype=np.int64)
    for col, u in enumerate(triples):
        alpha, beta = canonical_pair(n_qubits, u)
        signs = 1 - 2 * ((popcount(alpha & d) + popcount(beta & g)) & 1)
        out[:, col] = np.bincount(ids, weights=signs, minlength=len(triples)).round().astype(np.int64)
    out.setflags(write=False)
    return out


# (alpha_i, beta_i) options in the order 00, 10, 01, 11
_OPTIONS = ((0, 0), (1, 0), (0, 1), (1, 1))


def g_closedform(n_qubits: int, triple, args) -> int:
    """Finite-sum form of ``g_triple(args)``.

    Coefficient extraction from the product of four class polynomials
    reduces to a sum over 4x4 contingency tables: row r distributes the
    positions of class r over the four (alpha_i, beta_i) options, columns
    must add up to the option counts fixed by ``triple``.
    """
    m, n, k = require_admissible(n_qubits, triple)
    rows = class_sizes(n_qubits, args)
    both = (m + n - k) // 2
    cols = [n_qubits - (m + n + k) // 2, m - both, n - both, both]
    # class (mu_i, lambda_i) with option (alpha_i, beta_i) carries (-1)^{mu beta + lambda alpha}
    signs = [[(-1) ** (mu * beta + lam * alpha) for alpha, beta in _OPTIONS] for mu, lam in _OPTIONS]

    def walk(r: int, remaining: tuple[int, ...]) -> int:
        if r == 3:
            # last row is forced by the column budget
            if sum(remaining) != rows[3]:
                return 0
            return _multinomial(rows[3], remaining) * _sign_power(signs[3], remaining)
        total = 0
        for cell in _compositions(rows[r], remaining):
            rest = tuple(x - y for x, y in zip(remaining, cell))
            total += _multinomial(rows[r], cell) * _sign_power(signs[r], cell) * walk(r + 1, rest)
        return total

    return walk(0, tuple(cols))


def _compositions(total: int, bounds: tuple[int, ...]):
    """4-part compositions of ``total`` with part i at most ``bounds[i]``."""
    for x0 in range(min(total, bounds[0]) + 1):
        for x1 in range(min(total - x0, bounds[1]) + 1):
            for x2 in range(min(total - x0 - x1, bounds[2]) + 1):
                x3 = total - x0 - x1 - x2
                if x3 <= bounds[3]:
                    yield (x0, x1, x2, x3)


def _multinomial(total: int, parts) -> int:
    out = factorial(total)
    for p in parts:
        out //= factorial(p)
    return out


def _sign_power(signs, counts) -> int:
    return -1 if sum(c for s, c in zip(signs, counts) if s < 0) % 2 else 1


# --------------------------------------------------------------------------- f


def _check_mk(n_qubits: int, m: int, k: int) -> None:
    if not (0 <= m <= n_qubits and 0 <= k <= n_qubits):
        raise DomainError(f"m={m}, k={k} must lie in [0, {n_qubits}]")


def f_bruteforce(n_qubits: int, m: int, k: int, weights, representative=None) -> int:
    """``sum_mu [h(mu)=m] [h(mu+g+d)=k] (-1)^{mu.d}``.

    ``weights`` is ``(h(d), h(g), h(g+d))``; ``representative`` is ``(d, g)``.
    """
    _check_mk(n_qubits, m, k)
    require_admissible(n_qubits, weights)
    d, g = _representative(n_qubits, weights, representative)
    mu = np.arange(1 << n_qubits)
    mask = (popcount(mu) == m) & (popcount(mu ^ g ^ d) == k)
    signs = 1 - 2 * (popcount(mu & d) & 1)
    return int(signs[mask].sum())


def hyp2f1_terminating(a, b, c, z) -> Fraction:
    """Exact ``2F1(a, b; c; z)`` when ``a`` or ``b`` is a non-positive integer."""
    a, b, c, z = (Fraction(x) for x in (a, b, c, z))
    orders = [-int(x) for x in (a, b) if x.denominator == 1 and x <= 0]
    if not orders:
        raise ConsistencyError(f"2F1({a}, {b}; {c}; z) does not terminate")
    order = min(orders)
    total = Fraction(0)
    term = Fraction(1)
    for j in range(order + 1):
        total += term
        if j == order:
            break
        denom = (c + j) * (j + 1)
        if denom == 0:
            raise ConsistencyError(f"2F1 lower parameter {c} hits a pole before termination")
        term *= (a + j) * (b + j) * z / denom
    return total


def _binom_2f1(p: int, s: int, q: int) -> int:
    """``C(p, s) * 2F1(-q, -s; 1+p-s; -1)`` = ``sum_i C(q, i) C(p, s-i) (-1)^i``.

    For ``s > p`` the binomial vanishes while the 2F1 has a pole; the product
    is then taken as its limit, which is the alternating convolution.
    """
    if s < 0:
        return 0
    if s <= p:
        value = binom_int(p, s) * hyp2f1_terminating(-q, -s, 1 + p - s, -1)
        if value.denominator != 1:
            raise ConsistencyError(f"non-integer hypergeometric product {value}")
        return int(value)
    return sum(binom_int(q, i) * binom_int(p, s - i) * (-1) ** i for i in range(s + 1))


def f_closedform(n_qubits: int, m: int, k: int, weights) -> int:
    """Hypergeometric form of ``f_mk(h(d), h(g), h(g+d))``.

    The two position-class pairs decouple: classes with ``d_i = 1`` and
    ``(g+d)_i = 0`` or ``(g+d)_i = 1`` each contribute one alternating
    Vandermonde sum.  The index written ``n`` in the usual presentation is
    ``h(g+d)``; with that binding the second 2F1 needs a *negative* first
    upper parameter, ``-(h(g)+n-h(d))/2``.  A positive sign there disagrees
    with the brute force.
    """
    _check_mk(n_qubits, m, k)
    a, b, c = require_admissible(n_qubits, weights)
    n = c
    if (m + n - k) % 2:
        return 0
    s1 = (m - n + k) // 2
    s2 = (m + n - k) // 2
    if s1 < 0 or s2 < 0:
        return 0
    p00 = n_qubits - (a + b + c) // 2
    p10 = (a + b - c) // 2  # d_i = 1, (g+d)_i = 0
    p11 = (a - b + c) // 2  # d_i = 1, (g+d)_i = 1
    p01 = (b - a + c) // 2  # d_i = 0, (g+d)_i = 1
    sign = -1 if m % 2 else 1
    return sign * _binom_2f1(p10, s1, p00) * _binom_2f1(p11, s2, p01)


@lru_cache(maxsize=None)
def f_table(n_qubits: int) -> np.ndarray:
    """``F[m, k, t] = f_mk(t)`` for all m, k and admissible weight triples t (brute force)."""
    triples = enumerate_triples(n_qubits)
    out = np.zeros((n_qubits + 1, n_qubits + 1, len(triples)), dtype=np.int64)
    mu = np.arange(1 << n_qubits)
    hmu = popcount(mu)
    for i, t in enumerate(triples):
        d, g = canonical_pair(n_qubits, t)
        signs = 1 - 2 * (popcount(mu & d) & 1)
        hk = popcount(mu ^ g ^ d)
        np.add.at(out[:, :, i], (hmu, hk), signs)
    out.setflags(write=False)
    return out


# ------------------------------------------------------------------------- psi


def _check_l(n_qubits: int, l: int) -> None:
    if not 0 <= l <= n_qubits:
        raise DomainError(f"l={l} must lie in [0, {n_qubits}]")


def psi_bruteforce(n_qubits: int, l: int, triple, xi: complex, representative=None) -> complex:
    """``sum_{h(kappa)=l} xi^{h(kappa+beta)} (-1)^{alpha.kappa}``."""
    _check_l(n_qubits, l)
    require_admissible(n_qubits, triple)
    alpha, beta = _representative(n_qubits, triple, representative)
    kappa = np.arange(1 << n_qubits)
    kappa = kappa[popcount(kappa) == l]
    signs = 1 - 2 * (popcount(alpha & kappa) & 1)
    powers = np.power(complex(xi), popcount(kappa ^ beta))
    return complex(np.sum(signs * powers))


def psi_closedform(n_qubits: int, l: int, triple, xi: complex) -> complex:
    """Finite-sum form of ``psi_l``.

    Per class, a position contributes ``1 + xi w`` (00), ``1 - xi w`` (10),
    ``1 + w/xi`` (01) or ``1 - w/xi`` (11); the overall ``xi^{h(beta)}``
    comes from ``h(kappa+beta) = h(kappa) + h(beta) - 2 kappa.beta``.
    """
    _check_l(n_qubits, l)
    q00, q10, q01, q11 = class_sizes(n_qubits, triple)
    xi = complex(xi)
    if xi == 0:
        raise DomainError("the finite-sum form of psi divides by xi; use psi_bruteforce at xi = 0")
    total = 0j
    for j2 in range(q01 + 1):
        for j3 in range(q10 + 1):
            for j4 in range(q11 + 1):
                j1 = l - j2 - j3 - j4
                if j1 < 0 or j1 > q00:
                    continue
                coeff = binom_int(q00, j1) * binom_int(q01, j2) * binom_int(q10, j3) * binom_int(q11, j4)
                total += (-1) ** (j3 + j4) * coeff * xi ** (-2 * (j2 + j4))
    return xi ** (l + triple[1]) * total


@lru_cache(maxsize=32)
def psi_table(n_qubits: int, xi: complex) -> np.ndarray:
    """``Psi[t, l] = psi_l(t; xi)`` (brute force)."""
    triples = enumerate_triples(n_qubits)
    out = np.array(
        [[psi_bruteforce(n_qubits, l, t, xi) for l in range(n_qubits + 1)] for t in triples]
    )
    out.setflags(write=False)
    return out


def r_vector(n_qubits: int) -> np.ndarray:
    return np.array([r_mnk(n_qubits, t) for t in enumerate_triples(n_qubits)], dtype=np.int64)


def dual_orthogonality_residuals(n_qubits: int) -> tuple[Fraction, Fraction]:
    """Largest deviation from each dual orthogonality relation of g, in exact arithmetic.

    First: ``sum_u g_t(u) g_t'(u) R_u = 4^N R_t delta``.
    Second: ``sum_t g_t(u) g_t(u') / R_t = 4^N delta / R_u``.
    """
    g = [[int(v) for v in row] for row in g_table(n_qubits)]
    r = [int(v) for v in r_vector(n_qubits)]
    size = len(r)
    scale = 4 ** n_qubits
    first = second = Fraction(0)
    for a in range(size):
        for b in range(a, size):
            lhs1 = sum(g[a][u] * g[b][u] * r[u] for u in range(size))
            lhs2 = sum(Fraction(g[t][a] * g[t][b], r[t]) for t in range(size))
            rhs1 = scale * r[a] if a == b else 0
            rhs2 = Fraction(scale, r[a]) if a == b else 0
            first = max(first, abs(lhs1 - rhs1))
            second = max(second, abs(lhs2 - rhs2))
    return first, second
