"""Unitary utilities: Haar sampling, submatrices and a triangular
beamsplitter/phase-shifter decomposition.

Each layer mixes channels ``i < j`` (0-based) with the 2x2 block::

    T(theta, phi) = [[exp(i phi) cos(theta), -sin(theta)],
                     [exp(i phi) sin(theta),  cos(theta)]]

i.e. a phase shift on channel ``i`` followed by a real rotation. Layers are
stored in application order and a final diagonal phase screen is applied
last::

    U = diag(exp(i * phases)) @ T_K @ ... @ T_2 @ T_1
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, UnitarityError

MAX_HAAR_M = 16
UNITARITY_TOL = 1e-8


@dataclass(frozen=True)
class BeamsplitterLayer:
    i: int
    j: int
    theta: float
    phi: float

    def block(self) -> np.ndarray:
        c, s = math.cos(self.theta), math.sin(self.theta)
        e = np.exp(1j * self.phi)
        return np.array([[e * c, -s], [e * s, c]])

    def matrix(self, m: int) -> np.ndarray:
        T = np.eye(m, dtype=complex)
        T[np.ix_([self.i, self.j], [self.i, self.j])] = self.block()
        return T

    def to_dict(self) -> dict:
        return {"i": self.i, "j": self.j, "theta": self.theta, "phi": self.phi}


@dataclass(frozen=True)
class Decomposition:
    m: int
    layers: tuple[BeamsplitterLayer, ...]
    phases: np.ndarray

    def to_dict(self, one_based: bool = False) -> dict:
        shift = 1 if one_based else 0
        return {
            "m": self.m,
            "layers": [
                {"i": l.i + shift, "j": l.j + shift, "theta": l.theta, "phi": l.phi} for l in self.layers
            ],
            "phases": [float(p) for p in self.phases],
        }

    @classmethod
    def from_dict(cls, data: dict, one_based: bool = False) -> "Decomposition":
        shift = 1 if one_based else 0
        layers = tuple(
            BeamsplitterLayer(int(d["i"]) - shift, int(d["j"]) - shift, float(d["theta"]), float(d["phi"]))
            for d in data["layers"]
        )
        phases = np.asarray(data["phases"], dtype=float)
        return cls(int(data.get("m", len(phases))), layers, phases)


def haar_random_unitary(m: int, seed=None) -> np.ndarray:
    """Haar-distributed ``m x m`` unitary (QR of a Ginibre matrix with phase fix)."""
    if not 1 <= m <= MAX_HAAR_M:
        raise ValueError(f"m must be in 1..{MAX_HAAR_M}, got {m}")
    rng = np.random.default_rng(seed)
    z = (rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def unitarity_deviation(U) -> float:
    U = np.asarray(U)
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))


def is_unitary(U, atol: float = UNITARITY_TOL) -> bool:
    U = np.asarray(U)
    return U.ndim == 2 and U.shape[0] == U.shape[1] and unitarity_deviation(U) <= atol


def submatrix(U, input_rows, output_cols) -> np.ndarray:
    """Scattering submatrix for occupied inputs and monitored outputs (0-based).

    The result is generally not unitary and is not checked.
    """
    U = np.asarray(U)
    rows, cols = list(input_rows), list(output_cols)
    if len(rows) != len(cols):
        raise DimensionError(f"{len(rows)} input rows but {len(cols)} output columns")
    for name, idx, bound in (("row", rows, U.shape[0]), ("column", cols, U.shape[1])):
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"{name} indices must be strictly increasing: {idx}")
        if idx and not (0 <= idx[0] and idx[-1] < bound):
            raise ValueError(f"{name} indices out of range 0..{bound - 1}: {idx}")
    return U[np.ix_(rows, cols)]


def decompose(U, atol: float = UNITARITY_TOL) -> Decomposition:
    """Triangular (Reck-style) factorization into at most ``m(m-1)/2`` layers.

    Rows are cleared from the bottom up: entry ``(r, k)`` is moved into
    column ``k + 1`` by right-multiplying with the inverse of a layer on
    channels ``(k, k+1)``.
    """
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {U.shape}")
    dev = unitarity_deviation(U)
    if dev > atol:
        raise UnitarityError(f"matrix is not unitary (max |U^H U - I| = {dev:.3e})", dev)
    m = U.shape[0]
    V = U.copy()
    layers = []
    for r in range(m - 1, 0, -1):
        for k in range(r):
            x, y = V[r, k], V[r, k + 1]
            phi = (np.angle(x) - np.angle(y)) % (2 * math.pi) if abs(x) > 0 and abs(y) > 0 else 0.0
            theta = math.atan2(abs(x), abs(y))
            layer = BeamsplitterLayer(k, k + 1, theta, float(phi))
            V = V @ layer.matrix(m).conj().T
            layers.append(layer)
    phases = np.angle(np.diag(V)) % (2 * math.pi)
    return Decomposition(m, tuple(layers), phases)


def reconstruct(decomposition: Decomposition) -> np.ndarray:
    """Ordered product of the layers followed by the phase screen."""
    m = decomposition.m
    W = np.eye(m, dtype=complex)
    for layer in decomposition.layers:
        if not 0 <= layer.i < layer.j < m:
            raise DimensionError(f"layer channels ({layer.i}, {layer.j}) invalid for m={m}")
        W = layer.matrix(m) @ W
    phases = np.asarray(decomposition.phases, dtype=float)
    if phases.shape != (m,):
        raise DimensionError(f"expected {m} phases, got {phases.shape}")
    return np.exp(1j * phases)[:, None] * W
