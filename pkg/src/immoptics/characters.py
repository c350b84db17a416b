"""Integer partitions and irreducible characters of the symmetric group.

Characters are evaluated with the Murnaghan-Nakayama rule on beta-sets
(first-column hook lengths), memoized per ``(shape, cycle type)``.
"""

from __future__ import annotations

import math
from collections import Counter
from functools import lru_cache

import numpy as np

from .errors import DimensionError, SizeLimitError

MAX_N = 8


class Partition(tuple):
    """A weakly decreasing tuple of positive integers.

    Used both for irrep labels and for cycle types. Tuples compare
    lexicographically, so sorting in reverse gives ``[n]`` first.
    """

    def __new__(cls, parts=()):
        if isinstance(parts, str):
            parts = parse_parts(parts)
        parts = tuple(int(p) for p in parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def n(self) -> int:
        return sum(self)

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    def __repr__(self):
        return f"Partition({list(self)})"

    def __str__(self):
        return "[" + ",".join(str(p) for p in self) + "]"


def parse_parts(text: str) -> tuple[int, ...]:
    """Parse ``"3,1"``, ``"[3, 1]"`` or ``"3 1"`` into a tuple of ints."""
    cleaned = text.strip().strip("[](){}").replace(",", " ")
    if not cleaned:
        raise ValueError(f"empty partition string: {text!r}")
    return tuple(int(tok) for tok in cleaned.split())


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise SizeLimitError(f"n must be in 1..{MAX_N}, got {n}")


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of ``n`` in reverse-lexicographic order."""
    _check_n(n)

    def gen(remaining, largest):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, largest), 0, -1):
            for rest in gen(remaining - first, first):
                yield (first,) + rest

    return tuple(Partition(p) for p in gen(n, n))


def _beta_set(shape: tuple[int, ...]) -> frozenset[int]:
    k = len(shape)
    return frozenset(shape[i] + (k - 1 - i) for i in range(k))


def _shape_from_beta(beta: frozenset[int]) -> tuple[int, ...]:
    ordered = sorted(beta, reverse=True)
    k = len(ordered)
    shape = tuple(b - (k - 1 - i) for i, b in enumerate(ordered))
    return tuple(p for p in shape if p > 0)


@lru_cache(maxsize=None)
def _mn(shape: tuple[int, ...], cycles: tuple[int, ...]) -> int:
    if not cycles:
        return 1 if not shape else 0
    r, rest = cycles[0], cycles[1:]
    beta = _beta_set(shape)
    total = 0
    for b in beta:
        target = b - r
        if target < 0 or target in beta:
            continue
        # each bead jumped over flips the sign (one per row of the border strip minus one)
        height = sum(1 for c in beta if target < c < b)
        moved = (beta - {b}) | {target}
        total += (-1) ** height * _mn(_shape_from_beta(moved), rest)
    return total


def character(lam, mu) -> int:
    """Irreducible character of shape ``lam`` on the class of cycle type ``mu``."""
    lam, mu = Partition(lam), Partition(mu)
    if lam.n != mu.n:
        raise DimensionError(f"{lam} and {mu} partition different integers")
    return _mn(tuple(lam), tuple(mu))


def dimension(lam) -> int:
    """Degree of the irrep ``lam`` (its character at the identity)."""
    lam = Partition(lam)
    return character(lam, (1,) * lam.n)


def hook_length_dimension(lam) -> int:
    """Degree of the irrep ``lam`` by the hook length formula."""
    lam = Partition(lam)
    conj = lam.conjugate()
    hooks = 1
    for i, row in enumerate(lam):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(lam.n) // hooks


def class_size(mu) -> int:
    """Number of permutations with cycle type ``mu``."""
    mu = Partition(mu)
    denom = 1
    for length, mult in Counter(mu).items():
        denom *= length**mult * math.factorial(mult)
    return math.factorial(mu.n) // denom


def character_table(n: int) -> tuple[tuple[Partition, ...], tuple[Partition, ...], np.ndarray]:
    """Character table of S_n.

    Returns
    -------
    irreps, classes, table
        Rows are irreps in reverse-lexicographic order (``[n]`` first);
        columns are cycle types ordered from ``[1^n]`` to ``[n]``.
        ``table[r, c]`` is the character of ``irreps[r]`` on ``classes[c]``.
    """
    irreps = partitions(n)
    classes = tuple(reversed(irreps))
    table = np.array([[character(lam, mu) for mu in classes] for lam in irreps], dtype=np.int64)
    return irreps, classes, table
