"""JSON file formats.

Matrices are stored as ``{"rows": [[[re, im], ...], ...]}`` so that no
complex-literal parsing is involved.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .interferometer import Decomposition


def matrix_to_json(M) -> dict:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {M.shape}")
    return {"rows": [[[float(z.real), float(z.imag)] for z in row] for row in M]}


def matrix_from_json(data: dict) -> np.ndarray:
    try:
        rows = data["rows"]
    except (KeyError, TypeError):
        raise ValueError('matrix JSON must be an object with a "rows" key') from None
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("matrix rows must be non-empty and of equal length")
    out = np.empty((len(rows), len(rows[0])), dtype=complex)
    for i, row in enumerate(rows):
        for j, entry in enumerate(row):
            if len(entry) != 2:
                raise ValueError(f"entry ({i}, {j}) must be a [re, im] pair")
            out[i, j] = complex(float(entry[0]), float(entry[1]))
    return out


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(json.loads(Path(path).read_text()))


def save_matrix(path, M) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(M), indent=1) + "\n")


def save_decomposition(path, decomposition: Decomposition) -> None:
    Path(path).write_text(json.dumps(decomposition.to_dict(), indent=1) + "\n")


def load_decomposition(path) -> Decomposition:
    return Decomposition.from_dict(json.loads(Path(path).read_text()))
