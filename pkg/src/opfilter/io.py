"""JSON encodings for matrices and CP maps.

Hermitian matrices: ``{"dim": n, "entries": [[[re, im], ...], ...]}``, row
major, symmetrized before writing. Rectangular matrices (Kraus factors,
contractions) use ``{"rows": r, "cols": c, "entries": ...}``. A CP map is
``{"dim_in": n, "dim_out": m, "kraus": [matrix, ...]}``.
"""
from __future__ import annotations

import numpy as np

from .cpmaps import CPMap
from .errors import ShapeError
from .hermitian import as_matrix, herm


def _entries(M: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def matrix_to_json(M, hermitian: bool | None = None) -> dict:
    """Encode a matrix; square Hermitian input is written in the ``dim`` form."""
    M = as_matrix(M)
    square = M.shape[0] == M.shape[1]
    if hermitian is None:
        hermitian = square and np.allclose(M, M.conj().T, rtol=0, atol=1e-12 * max(1.0, np.abs(M).max()))
    if hermitian:
        if not square:
            raise ShapeError("a Hermitian payload must be square")
        return {"dim": M.shape[0], "entries": _entries(herm(M))}
    return {"rows": M.shape[0], "cols": M.shape[1], "entries": _entries(M)}


def matrix_from_json(obj: dict) -> np.ndarray:
    arr = np.asarray(obj["entries"], dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ShapeError("entries must be a rows x cols x 2 array of [re, im] pairs")
    M = arr[..., 0] + 1j * arr[..., 1]
    if "dim" in obj:
        if M.shape != (obj["dim"], obj["dim"]):
            raise ShapeError(f"declared dim {obj['dim']} does not match entries {M.shape}")
    elif M.shape != (obj["rows"], obj["cols"]):
        raise ShapeError(f"declared shape does not match entries {M.shape}")
    return M


def cpmap_to_json(phi: CPMap) -> dict:
    return {
        "dim_in": phi.dim_in,
        "dim_out": phi.dim_out,
        "kraus": [matrix_to_json(C, hermitian=False) for C in phi.kraus],
    }


def cpmap_from_json(obj: dict) -> CPMap:
    phi = CPMap(tuple(matrix_from_json(C) for C in obj["kraus"]))
    if (phi.dim_in, phi.dim_out) != (obj["dim_in"], obj["dim_out"]):
        raise ShapeError("declared CP map dimensions do not match the Kraus factors")
    return phi
