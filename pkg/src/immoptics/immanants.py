"""Immanants, permanents, determinants and quadratic forms in immanants.

The generic kernel sums ``chi(sigma) * prod_i M[i, sigma(i)]`` over all of
``S_n`` in lexicographic order; it accepts numeric arrays as well as object
arrays (e.g. sympy symbols) so that expansions can be inspected exactly.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .characters import MAX_N, Partition, character
from .errors import DimensionError, SizeLimitError
from .permutations import Permutation, all_permutations, permutation_array, permute_columns, permute_rows

MAX_PERMANENT_N = 24
_RYSER_BLOCK = 12


def _square(M) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    if M.dtype != object and not np.issubdtype(M.dtype, np.complexfloating):
        M = M.astype(complex)
    return M


@lru_cache(maxsize=None)
def character_vector(lam) -> np.ndarray:
    """Characters of ``lam`` on ``all_permutations(n)``, in the same order."""
    lam = Partition(lam)
    by_class = {}
    out = np.empty(math.factorial(lam.n), dtype=np.int64)
    for k, perm in enumerate(all_permutations(lam.n)):
        mu = perm.cycle_type()
        if mu not in by_class:
            by_class[mu] = character(lam, mu)
        out[k] = by_class[mu]
    out.setflags(write=False)
    return out


def _monomials(M: np.ndarray) -> np.ndarray:
    n = M.shape[0]
    return np.prod(M[np.arange(n), permutation_array(n)], axis=1)


def immanant(M, lam):
    """The ``lam``-immanant of a square matrix.

    Parameters
    ----------
    M : (n, n) array_like
        Numeric or object (symbolic) entries.
    lam : Partition or sequence of int
        Partition of ``n``.
    """
    M = _square(M)
    lam = Partition(lam)
    n = M.shape[0]
    if lam.n != n:
        raise DimensionError(f"partition {lam} does not match a {n}x{n} matrix")
    if n > MAX_N:
        raise SizeLimitError(f"naive immanant limited to n <= {MAX_N}, got {n}")
    chi = character_vector(lam)
    terms = _monomials(M)
    if M.dtype == object:
        return sum((int(c) * t for c, t in zip(chi, terms) if c), 0)
    return complex(np.sum(chi * terms))


def permanent(M) -> complex:
    """Permanent by Ryser's formula with Gray-code ordered subsets.

    Subsets of the first ``min(n, 12)`` columns are tabulated once (each
    row-sum vector differs from the previous by one column); the remaining
    columns are walked in Gray-code order on top of that table.
    """
    M = _square(M)
    n = M.shape[0]
    if n > MAX_PERMANENT_N:
        raise SizeLimitError(f"permanent limited to n <= {MAX_PERMANENT_N}, got {n}")
    if n == 0:
        return 1.0 + 0j
    low = min(n, _RYSER_BLOCK)
    high = n - low

    size = 1 << low
    sums = np.zeros((size, n), dtype=complex)
    parity = np.zeros(size, dtype=np.int64)
    masks = np.zeros(size, dtype=np.int64)
    row = np.zeros(n, dtype=complex)
    mask = 0
    for k in range(1, size):
        bit = (k & -k).bit_length() - 1
        mask ^= 1 << bit
        if mask >> bit & 1:
            row = row + M[:, bit]
        else:
            row = row - M[:, bit]
        sums[k] = row
        masks[k] = mask
        parity[k] = bin(mask).count("1")
    low_signs = np.where(parity % 2, -1.0, 1.0)

    total = 0j
    offset = np.zeros(n, dtype=complex)
    hmask = 0
    for k in range(1 << high):
        if k:
            bit = (k & -k).bit_length() - 1
            hmask ^= 1 << bit
            col = M[:, low + bit]
            offset = offset + col if hmask >> bit & 1 else offset - col
        hsign = -1.0 if bin(hmask).count("1") % 2 else 1.0
        total += hsign * np.sum(low_signs * np.prod(sums + offset, axis=1))
    return complex((-1) ** n * total)


def determinant(M) -> complex:
    """Determinant via LU factorization (LAPACK)."""
    M = _square(M)
    return complex(np.linalg.det(M))


def row_permuted_immanants(M, lam, perms=None) -> dict[Permutation, complex]:
    """``{p: immanant(permute_rows(M, p), lam)}`` for every ``p`` in ``perms``.

    ``perms`` defaults to all of ``S_n``.
    """
    M = _square(M)
    if perms is None:
        perms = all_permutations(M.shape[0])
    return {p: immanant(permute_rows(M, p), lam) for p in perms}


def quadratic_form(M, lam, coeffs) -> complex:
    """Evaluate ``sum a[s, t] * imm(M_s) * conj(imm(M_t))``.

    ``coeffs`` maps ordered pairs of permutations ``(s, t)`` to complex
    coefficients, and ``M_s = permute_rows(M, s)``. The result is real up to
    rounding when ``coeffs`` is Hermitian.
    """
    M = _square(M)
    n = M.shape[0]
    cache: dict[Permutation, complex] = {}

    def imm(p):
        if p.n != n:
            raise DimensionError(f"coefficient key {p} acts on {p.n} symbols, matrix is {n}x{n}")
        if p not in cache:
            cache[p] = immanant(permute_rows(M, p), lam)
        return cache[p]

    total = 0j
    for (s, t), a in sorted(coeffs.items()):
        total += a * imm(s) * np.conj(imm(t))
    return complex(total)


def column_permuted_immanant_sum(M, lam) -> complex:
    """Sum of ``lam``-immanants of ``M`` over all column permutations."""
    M = _square(M)
    return complex(sum(immanant(permute_columns(M, p), lam) for p in all_permutations(M.shape[0])))


def is_hermitian_map(coeffs, atol: float = 1e-12) -> bool:
    for (s, t), a in coeffs.items():
        if abs(a - np.conj(coeffs.get((t, s), 0.0))) > atol:
            return False
    return True
