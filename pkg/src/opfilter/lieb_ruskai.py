"""Lieb-Ruskai maps, their multivariable generalizations and the block embedding."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ConfigError, ShapeError
from .hermitian import (
    apply_spectral,
    as_matrix,
    herm,
    inv,
    require_pd,
    sqrt_and_inv_sqrt,
)
from .means import MeanSpec, format_number, geometric_mean
from .regular_maps import OperatorMapDescriptor, _mean_with_arity


def _same_shape(*mats) -> None:
    if len({np.shape(M) for M in mats}) != 1:
        raise ShapeError("operands must have the same shape")


def lr_basic(A, K) -> np.ndarray:
    """``K^* A^{-1} K`` for PD ``A`` and arbitrary square ``K``."""
    A = require_pd(A, "A")
    K = as_matrix(K)
    _same_shape(A, K)
    return herm(K.conj().T @ inv(A) @ K)


def lr_n(mean: MeanSpec, mats: Sequence, C) -> np.ndarray:
    """``C G_n(A_1, ..., A_n)^{-1} C`` with ``C`` positive definite.

    Errors from the mean (including Karcher non-convergence) propagate.
    """
    C = require_pd(C, "C")
    _same_shape(C, *mats)
    G = geometric_mean(mean, mats)
    return herm(C @ inv(G) @ C)


def lr_weighted(alpha: float, A, B, C) -> np.ndarray:
    """``C^* B^{-1/2} (B^{1/2} A^{-1} B^{1/2})^alpha B^{-1/2} C``.

    This is ``C^* G_2(alpha; A, B)^{-1} C``; ``C`` may be any square matrix.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ConfigError(f"alpha must lie in [0, 1], got {alpha}")
    A = require_pd(A, "A")
    B = require_pd(B, "B")
    C = as_matrix(C)
    _same_shape(A, B, C)
    b, bi = sqrt_and_inv_sqrt(B)
    middle = apply_spectral(("power", alpha), herm(b @ inv(A) @ b))
    return herm(C.conj().T @ bi @ middle @ bi @ C)


def lr_n_commuting(diag_args: Sequence, c) -> np.ndarray:
    """Closed form ``C^* A_1^{-1/n} ... A_n^{-1/n} C`` for diagonal operands.

    ``diag_args`` holds the diagonals of the ``A_i``; ``c`` is a matrix.
    """
    d = np.asarray(diag_args, dtype=float)
    n = d.shape[0]
    core = np.prod(d ** (-1.0 / n), axis=0)
    c = as_matrix(c)
    return herm(c.conj().T @ np.diag(core) @ c)


def lr_weighted_commuting(alpha: float, a_diag, b_diag, c) -> np.ndarray:
    """Closed form ``C^* A^{-alpha} B^{-(1-alpha)} C`` for diagonal ``A``, ``B``."""
    a = np.asarray(a_diag, dtype=float)
    b = np.asarray(b_diag, dtype=float)
    c = as_matrix(c)
    return herm(c.conj().T @ np.diag(a ** -alpha * b ** -(1.0 - alpha)) @ c)


def block_embed(A, K) -> np.ndarray:
    """The block matrix ``[[A, K^*], [K, A]]``.

    It is affine in ``(A, K)`` and positive definite when ``A >= 1`` and
    ``||K|| < 1``.
    """
    A = as_matrix(A)
    K = as_matrix(K)
    if A.shape != K.shape or A.shape[0] != A.shape[1]:
        raise ShapeError(f"A {A.shape} and K {K.shape} must be square of one size")
    return herm(np.block([[A, K.conj().T], [K, A]]))


def schur_block(A, C, B) -> np.ndarray:
    """``[[A, C], [C^*, B]]``; PSD iff ``B >= C^* A^{-1} C`` when ``A`` is PD."""
    A, C, B = as_matrix(A), as_matrix(C), as_matrix(B)
    return herm(np.block([[A, C], [C.conj().T, B]]))


def lr_map(spec: str) -> OperatorMapDescriptor:
    """Descriptor for ``"basic"``, ``"n:<mean>[:<n>]"`` or ``"weighted:<alpha>"``."""
    head, _, rest = spec.partition(":")
    if head == "basic" and not rest:
        return OperatorMapDescriptor(
            name="lr:basic", arity=2, evaluate=lr_basic, curvature="convex",
            homogeneous=True, domain="PD", arbitrary_last=True,
        )
    if head == "n":
        mean, n = _mean_with_arity(rest)
        label = mean.name if mean.kind == "binary" else f"{mean.kind}:{n}"
        return OperatorMapDescriptor(
            name=f"lr:n:{label}", arity=n + 1,
            evaluate=lambda *mats: lr_n(mean, mats[:-1], mats[-1]),
            curvature="convex", homogeneous=True, domain="PD",
            tol_per_dim=mean.widened_tol(1),
        )
    if head == "weighted":
        try:
            alpha = float(rest)
        except ValueError as exc:
            raise ConfigError(f"bad weight in lr:weighted:{rest}") from exc
        if not 0.0 <= alpha <= 1.0:
            raise ConfigError(f"alpha must lie in [0, 1], got {alpha}")
        return OperatorMapDescriptor(
            name=f"lr:weighted:{format_number(alpha)}", arity=3,
            evaluate=lambda A, B, C: lr_weighted(alpha, A, B, C),
            curvature="convex", homogeneous=True, domain="PD", arbitrary_last=True,
        )
    raise ConfigError(f"unknown Lieb-Ruskai specifier lr:{spec}")
