"""Permutations of ``{0, ..., n-1}`` and their action on matrices.

Internally a permutation is stored as its 0-based image tuple, so
``p(i) == p.image[i]``. Cycle notation is 1-based, with ``(i j k)``
meaning ``i -> j -> k -> i``.

Composition applies the right factor first: ``compose(p, q)(i) == p(q(i))``.
With this convention ``compose((12), (132)) == (13)``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .characters import MAX_N, Partition
from .errors import DimensionError, SizeLimitError


@dataclass(frozen=True, order=True)
class Permutation:
    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(i) for i in self.image)
        if sorted(image) != list(range(len(image))):
            raise ValueError(f"not a permutation of 0..{len(image) - 1}: {image}")
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles, n: int) -> "Permutation":
        """Build from cycle notation, either a string or a list of 1-based cycles.

        >>> Permutation.from_cycles("(1 3 2)", 3).image
        (2, 0, 1)
        """
        if isinstance(cycles, str):
            cycles = parse_cycles(cycles)
        image = list(range(n))
        seen = set()
        for cycle in cycles:
            cycle = [c - 1 for c in cycle]
            for c in cycle:
                if not 0 <= c < n:
                    raise ValueError(f"cycle entry {c + 1} outside 1..{n}")
                if c in seen:
                    raise ValueError(f"cycle entry {c + 1} repeated")
                seen.add(c)
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                image[a] = b
        return cls(tuple(image))

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles (0-based), each starting at its smallest element."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cycle = []
            i = start
            while not seen[i]:
                seen[i] = True
                cycle.append(i)
                i = self.image[i]
            out.append(tuple(cycle))
        return out

    def cycle_type(self) -> Partition:
        return Partition(sorted((len(c) for c in self.cycles()), reverse=True))

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    parity = sign

    def to_cycle_string(self, include_fixed: bool = False) -> str:
        cycles = [c for c in self.cycles() if include_fixed or len(c) > 1]
        if not cycles:
            return "()"
        return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cycles)

    def __str__(self):
        return self.to_cycle_string()


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> list[list[int]]:
    """Parse ``"(1 3 2)(4)"`` or compact ``"(132)"`` into 1-based cycles."""
    text = text.strip()
    if _CYCLE_RE.sub("", text).strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        body = body.strip()
        if not body:
            continue
        if re.search(r"[\s,]", body):
            entries = [int(tok) for tok in re.split(r"[\s,]+", body) if tok]
        else:
            entries = [int(ch) for ch in body]
        cycles.append(entries)
    return cycles


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return ``p o q``, i.e. ``i -> p(q(i))``."""
    if p.n != q.n:
        raise DimensionError(f"cannot compose permutations on {p.n} and {q.n} symbols")
    return Permutation(tuple(p.image[j] for j in q.image))


def cycle_type(p: Permutation) -> Partition:
    return p.cycle_type()


def parity(p: Permutation) -> int:
    return p.sign()


@lru_cache(maxsize=None)
def all_permutations(n: int) -> tuple[Permutation, ...]:
    """All ``n!`` permutations in lexicographic order of their images."""
    if not 1 <= n <= MAX_N:
        raise SizeLimitError(f"n must be in 1..{MAX_N}, got {n}")
    return tuple(Permutation(p) for p in itertools.permutations(range(n)))


enumerate_permutations = all_permutations


@lru_cache(maxsize=None)
def permutation_array(n: int) -> np.ndarray:
    """``(n!, n)`` integer array whose rows are the images of ``all_permutations(n)``."""
    arr = np.array([p.image for p in all_permutations(n)], dtype=np.intp)
    arr.setflags(write=False)
    return arr


def permute_rows(M, p: Permutation) -> np.ndarray:
    """``result[i, j] = M[p(i), j]``."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != p.n:
        raise DimensionError(f"matrix with shape {M.shape} cannot be row-permuted by a permutation on {p.n} symbols")
    return M[list(p.image), :]


def permute_columns(M, p: Permutation) -> np.ndarray:
    """``result[i, j] = M[i, p(j)]``."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[1] != p.n:
        raise DimensionError(f"matrix with shape {M.shape} cannot be column-permuted by a permutation on {p.n} symbols")
    return M[:, list(p.image)]
