"""Perspectives of regular operator maps and their restriction inverse."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import FlagViolation, ShapeError
from .hermitian import herm, require_pd, sqrt_and_inv_sqrt
from .regular_maps import OperatorMapDescriptor


def perspective(F: OperatorMapDescriptor, mats: Sequence, B) -> np.ndarray:
    """``B^{1/2} F(B^{-1/2} A_1 B^{-1/2}, ..., B^{-1/2} A_k B^{-1/2}) B^{1/2}``.

    ``B`` comes last, matching the operand order ``P_F(A_1, ..., A_k, B)``.
    All operands must be positive definite.
    """
    if len(mats) != F.arity:
        raise ShapeError(f"{F.name} takes {F.arity} operands, got {len(mats)}")
    B = require_pd(B, "B")
    mats = [require_pd(A, f"A_{i + 1}") for i, A in enumerate(mats)]
    b, bi = sqrt_and_inv_sqrt(B)
    inner = [herm(bi @ A @ bi) for A in mats]
    return herm(b @ F(*inner) @ b)


def perspective_map(F: OperatorMapDescriptor) -> OperatorMapDescriptor:
    """The (k+1)-ary perspective of ``F`` as a descriptor.

    It is positively homogeneous and inherits the curvature of ``F``; its
    domain is always PD.
    """
    k = F.arity
    return OperatorMapDescriptor(
        name=f"persp:{F.name}",
        arity=k + 1,
        evaluate=lambda *mats: perspective(F, mats[:k], mats[k]),
        curvature=F.curvature,
        homogeneous=True,
        domain="PD",
        tol_per_dim=F.tol_per_dim,
    )


def restrict(F: OperatorMapDescriptor) -> OperatorMapDescriptor:
    """``G(A_1, ..., A_k) = F(A_1, ..., A_k, I)`` for a homogeneous ``F``.

    ``F`` is then the perspective of ``G``.

    Raises
    ------
    FlagViolation
        If ``F`` is not flagged homogeneous.
    """
    if not F.homogeneous:
        raise FlagViolation(f"{F.name} is not flagged positively homogeneous")
    if F.arity < 2:
        raise ShapeError("restriction needs a map of at least two variables")

    def evaluate(*mats):
        return F(*mats, np.eye(np.shape(mats[0])[0], dtype=complex))

    return OperatorMapDescriptor(
        name=f"restrict:{F.name}",
        arity=F.arity - 1,
        evaluate=evaluate,
        curvature=F.curvature,
        homogeneous=False,
        domain="PD",
        tol_per_dim=F.tol_per_dim,
    )


def _ando_map(phi, B):
    """Unital CP map ``X -> Phi(B)^{-1/2} Phi(B^{1/2} X B^{1/2}) Phi(B)^{-1/2}``.

    Cross-check oracle for the perspective filtering inequality: its Kraus
    factors are ``B^{1/2} C_i Phi(B)^{-1/2}``.
    """
    from .cpmaps import CPMap

    b, _ = sqrt_and_inv_sqrt(require_pd(B, "B"))
    _, pbi = sqrt_and_inv_sqrt(phi(B))
    return CPMap(tuple(b @ C @ pbi for C in phi.kraus))
