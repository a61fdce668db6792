"""Geometric means of positive definite matrices.

Weight convention: ``binary_geometric(alpha, A, B)`` is
``B^{1/2} (B^{-1/2} A B^{-1/2})^alpha B^{1/2}``, whose value on commuting
operands is ``A^alpha B^(1-alpha)``. The common ``A #_t B`` therefore equals
``binary_geometric(t, B, A)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, DomainViolation, EmptyInput, NonConvergence, ShapeError
from .hermitian import apply_spectral, eigh, herm, require_pd, sqrt_and_inv_sqrt

KARCHER_TOL = 1e-10
KARCHER_MAX_ITER = 200


@dataclass(frozen=True)
class MeanSpec:
    """Which geometric mean to evaluate.

    ``kind`` is ``"binary"`` (two operands, weight ``alpha``), ``"inductive"``
    (Sagae-Tanabe folding) or ``"karcher"``.
    """

    kind: str
    alpha: float = 0.5
    karcher_tol: float = KARCHER_TOL
    karcher_max_iter: int = KARCHER_MAX_ITER
    karcher_step: str = "adaptive"

    def __post_init__(self):
        if self.kind not in ("binary", "inductive", "karcher"):
            raise ConfigError(f"unknown mean kind {self.kind!r}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.karcher_tol <= 0 or self.karcher_max_iter < 1:
            raise ConfigError("karcher_tol must be > 0 and karcher_max_iter >= 1")
        if self.karcher_step not in ("adaptive", "fixed"):
            raise ConfigError(f"unknown Karcher step rule {self.karcher_step!r}")

    @classmethod
    def parse(cls, text: str) -> "MeanSpec":
        """Parse ``"binary:0.5"``, ``"inductive"`` or ``"karcher"``."""
        head, _, rest = text.strip().partition(":")
        if head == "binary":
            try:
                alpha = float(rest) if rest else 0.5
            except ValueError as exc:
                raise ConfigError(f"bad binary weight in {text!r}") from exc
            return cls("binary", alpha=alpha)
        if head in ("inductive", "karcher") and not rest:
            return cls(head)
        raise ConfigError(f"unknown mean specifier {text!r}")

    @property
    def name(self) -> str:
        return f"binary:{format_number(self.alpha)}" if self.kind == "binary" else self.kind

    def widened_tol(self, dim: int) -> float:
        """Extra slack allowed for inequalities involving this mean."""
        return 10.0 * self.karcher_tol * dim if self.kind == "karcher" else 0.0

    def __call__(self, *mats) -> np.ndarray:
        return geometric_mean(self, mats)


def format_number(x: float) -> str:
    """Short round-trippable text for a parameter, e.g. ``0.5`` or ``0.3333333333333333``."""
    short = f"{x:g}"
    return short if float(short) == x else repr(float(x))


def _check_same_dim(mats) -> None:
    shapes = {np.shape(M) for M in mats}
    if len(shapes) != 1:
        raise ShapeError(f"operands have different shapes: {sorted(shapes)}")


def binary_geometric(alpha: float, A, B) -> np.ndarray:
    """Weighted geometric mean ``B^{1/2} (B^{-1/2} A B^{-1/2})^alpha B^{1/2}``."""
    if not 0.0 <= alpha <= 1.0:
        raise DomainViolation(f"alpha must lie in [0, 1], got {alpha}")
    A = require_pd(A, "A")
    B = require_pd(B, "B")
    _check_same_dim((A, B))
    if alpha == 0.0:
        return B
    if alpha == 1.0:
        return A
    b, bi = sqrt_and_inv_sqrt(B)
    M = apply_spectral(("power", alpha), herm(bi @ A @ bi))
    return herm(b @ M @ b)


def inductive_mean(mats: Sequence) -> np.ndarray:
    """Sagae-Tanabe mean: ``S_1 = A_1``, ``S_k = binary_geometric(1/k, A_k, S_{k-1})``.

    Operands are folded in the given order, so the result depends on it for
    non-commuting inputs.
    """
    if len(mats) == 0:
        raise EmptyInput("inductive mean of an empty list")
    _check_same_dim(mats)
    S = require_pd(mats[0], "A_1")
    for k, A in enumerate(mats[1:], start=2):
        S = binary_geometric(1.0 / k, A, S)
    return S


def karcher_residual(X, mats) -> float:
    """Frobenius norm of ``sum_i log(X^{-1/2} A_i X^{-1/2})``."""
    _, xi = sqrt_and_inv_sqrt(X)
    S = sum(apply_spectral("log", herm(xi @ A @ xi)) for A in mats)
    return float(np.linalg.norm(S))


def _adaptive_step(spectra) -> float:
    # Bini-Iannazzo step from the condition numbers of X^{-1/2} A_i X^{-1/2}
    total = 0.0
    for w in spectra:
        c = w[-1] / w[0]
        # (c+1)/(c-1) log c tends to 2 as c -> 1
        total += 2.0 if c - 1.0 < 1e-8 else (c + 1.0) / (c - 1.0) * np.log(c)
    return 2.0 / total


def karcher_mean(mats: Sequence, spec: MeanSpec | None = None) -> np.ndarray:
    """Karcher mean by the Riemannian fixed-point iteration.

    ``X <- X^{1/2} exp(theta * sum_i log(X^{-1/2} A_i X^{-1/2})) X^{1/2}``,
    started from the arithmetic mean. ``theta`` is ``1/n`` for the ``fixed``
    step rule and the condition-number step for ``adaptive``. Returns once the
    residual :func:`karcher_residual` is at most ``spec.karcher_tol``.

    Raises
    ------
    NonConvergence
        After ``spec.karcher_max_iter`` iterations, carrying the last residual.
    """
    spec = spec or MeanSpec("karcher")
    if len(mats) == 0:
        raise EmptyInput("Karcher mean of an empty list")
    _check_same_dim(mats)
    mats = [require_pd(A, f"A_{i + 1}") for i, A in enumerate(mats)]
    n = len(mats)
    if n == 1:
        return mats[0]
    X = herm(sum(mats) / n)
    residual = np.inf
    for it in range(spec.karcher_max_iter + 1):
        xs, xi = sqrt_and_inv_sqrt(X)
        decs = [eigh(herm(xi @ A @ xi)) for A in mats]
        S = herm(sum(apply_spectral("log", None, d) for d in decs))
        residual = float(np.linalg.norm(S))
        if residual <= spec.karcher_tol:
            return X
        if it == spec.karcher_max_iter:
            break
        if spec.karcher_step == "fixed":
            theta = 1.0 / n
        else:
            theta = _adaptive_step([d.eigenvalues for d in decs])
        X = herm(xs @ apply_spectral("exp", theta * S) @ xs)
    raise NonConvergence(
        f"Karcher iteration stopped after {spec.karcher_max_iter} iterations "
        f"with residual {residual:.3e}",
        residual=residual,
        iterations=spec.karcher_max_iter,
    )


def geometric_mean(spec: MeanSpec, mats: Sequence) -> np.ndarray:
    if spec.kind == "binary":
        if len(mats) != 2:
            raise ShapeError(f"binary mean takes two operands, got {len(mats)}")
        return binary_geometric(spec.alpha, mats[0], mats[1])
    if spec.kind == "inductive":
        return inductive_mean(mats)
    return karcher_mean(mats, spec)
