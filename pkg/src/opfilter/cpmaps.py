"""Completely positive maps in Kraus form.

Convention: ``Phi(A) = sum_i C_i^* A C_i`` with each ``C_i`` of shape
``(dim_in, dim_out)``. This is the adjoint of the usual quantum-information
form ``sum_i K_i rho K_i^*``; a channel given by ``K_i`` corresponds to
``C_i = K_i^*`` here. So ``Phi`` is unital when ``sum C_i^* C_i = I_out`` and
trace preserving when ``sum C_i C_i^* = I_in``.

Choi matrices use ``J = sum_ij E_ij (x) Phi(E_ij)`` with row-major matrix
units and the Kronecker convention of :func:`opfilter.hermitian.tensor`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotCP, ShapeError, SingularNormalization
from .hermitian import as_matrix, eigh_arrays, eigvalsh, ginibre, herm, spectral_norm

FLAG_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CPMap:
    kraus: tuple

    def __post_init__(self):
        if len(self.kraus) == 0:
            raise ShapeError("a CP map needs at least one Kraus factor")
        factors = tuple(np.asarray(C, dtype=complex) for C in self.kraus)
        if len({C.shape for C in factors}) != 1:
            raise ShapeError("Kraus factors must share one shape")
        stack = np.stack(factors)
        if stack.ndim != 3:
            raise ShapeError("Kraus factors must be 2-d matrices")
        if not np.isfinite(stack).all():
            raise ShapeError("Kraus factors have non-finite entries")
        object.__setattr__(self, "kraus", factors)
        object.__setattr__(self, "_stack", stack)
        object.__setattr__(self, "_stack_h", stack.conj().transpose(0, 2, 1))

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[0]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def rank(self) -> int:
        return len(self.kraus)

    def unital_defect(self) -> float:
        T = np.einsum("kia,kib->ab", self._stack.conj(), self._stack)
        return float(np.linalg.norm(T - np.eye(self.dim_out)))

    def trace_defect(self) -> float:
        S = np.einsum("kia,kja->ij", self._stack, self._stack.conj())
        return float(np.linalg.norm(S - np.eye(self.dim_in)))

    @property
    def is_unital(self) -> bool:
        return self.unital_defect() <= FLAG_TOL

    @property
    def is_trace_preserving(self) -> bool:
        return self.trace_defect() <= FLAG_TOL

    def __call__(self, A) -> np.ndarray:
        return apply(self, A)


def apply(phi: CPMap, A) -> np.ndarray:
    """``sum_i C_i^* A C_i``; Hermitian inputs give symmetrized outputs.

    Any square ``A`` of size ``dim_in`` is accepted since the map is linear.
    """
    A = as_matrix(A)
    if A.shape != (phi.dim_in, phi.dim_in):
        raise ShapeError(f"map acts on {phi.dim_in}x{phi.dim_in} matrices, got {A.shape}")
    out = (phi._stack_h @ A @ phi._stack).sum(axis=0)
    if np.array_equal(A, A.conj().T):
        return herm(out)
    return out


@dataclass(frozen=True)
class ChoiMatrix:
    matrix: np.ndarray
    dim_in: int
    dim_out: int

    def min_eigenvalue(self) -> float:
        return float(eigvalsh(self.matrix)[0])


def choi(phi: CPMap) -> ChoiMatrix:
    """``J = sum_ij E_ij (x) Phi(E_ij)``.

    Entry ``((i, a), (j, b))`` is ``sum_k conj(C_k[i, a]) C_k[j, b]``, so
    ``J = sum_k v_k v_k^*`` with ``v_k`` the row-major flattening of
    ``conj(C_k)``.
    """
    V = phi._stack.conj().reshape(phi.rank, -1)
    J = herm(V.T @ V.conj())
    return ChoiMatrix(J, phi.dim_in, phi.dim_out)


def choi_by_units(phi: CPMap) -> ChoiMatrix:
    """Choi matrix assembled literally from the matrix units (reference path)."""
    d = phi.dim_in
    J = np.zeros((d * phi.dim_out, d * phi.dim_out), dtype=complex)
    for i in range(d):
        for j in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = 1.0
            J += np.kron(E, apply(phi, E))
    return ChoiMatrix(herm(J), d, phi.dim_out)


def kraus_from_choi(J: ChoiMatrix, drop: float = 1e-12) -> CPMap:
    """Kraus factors from the eigendecomposition of a Choi matrix.

    Eigenvalues below ``drop * trace(J)`` are discarded.

    Raises
    ------
    NotCP
        If ``J`` has an eigenvalue below ``-1e-8 * ||J||``.
    """
    M = herm(J.matrix)
    w, U = eigh_arrays(M)
    norm = spectral_norm(M)
    if w[0] < -1e-8 * norm:
        raise NotCP(f"Choi matrix has eigenvalue {w[0]:.3e}; map is not completely positive")
    keep = w > drop * float(np.trace(M).real)
    if not np.any(keep):
        keep = w >= w[-1]
    factors = []
    for lam, u in zip(w[keep][::-1], U[:, keep].T[::-1]):
        v = np.sqrt(lam) * u
        factors.append(v.reshape(J.dim_in, J.dim_out).conj())
    return CPMap(tuple(factors))


def identity_channel(dim: int) -> CPMap:
    return CPMap((np.eye(dim, dtype=complex),))


def trace_channel(dim: int) -> CPMap:
    """``X -> Tr X`` as a map into 1x1 matrices; trace preserving, not unital."""
    return CPMap(tuple(np.eye(dim, dtype=complex)[:, [i]] for i in range(dim)))


def expectation_channel(weights) -> CPMap:
    """``X -> sum_i p_i X_ii`` into 1x1 matrices; unital when the weights sum to 1."""
    p = np.asarray(weights, dtype=float)
    if p.ndim != 1 or np.any(p < 0):
        raise ShapeError("weights must be a nonnegative vector")
    d = p.size
    return CPMap(tuple(np.sqrt(p[i]) * np.eye(d, dtype=complex)[:, [i]] for i in range(d)))


def partial_trace_map(d1: int, d2: int, traced_factor: int = 2) -> CPMap:
    """Partial trace over factor 1 or 2 of ``C^{d1} (x) C^{d2}``."""
    if d1 < 1 or d2 < 1:
        raise ShapeError("factor dimensions must be positive")
    if traced_factor == 2:
        factors = [np.kron(np.eye(d1), np.eye(d2)[:, [i]]) for i in range(d2)]
    elif traced_factor == 1:
        factors = [np.kron(np.eye(d1)[:, [i]], np.eye(d2)) for i in range(d1)]
    else:
        raise ShapeError(f"traced_factor must be 1 or 2, got {traced_factor}")
    return CPMap(tuple(F.astype(complex) for F in factors))


def tensor_with_identity(phi: CPMap, m: int) -> CPMap:
    """``Phi (x) 1_m`` with Kraus factors ``C_i (x) I_m``."""
    if m < 1:
        raise ShapeError("m must be positive")
    if m == 1:
        return phi
    I = np.eye(m)
    return CPMap(tuple(np.kron(C, I) for C in phi.kraus))


def _inv_sqrt_checked(T: np.ndarray, what: str) -> np.ndarray:
    w, U = eigh_arrays(herm(T))
    if w[-1] <= 0.0 or w[0] < 1e-12 * w[-1]:
        raise SingularNormalization(f"{what} is singular (min eigenvalue {w[0]:.3e})")
    return (U / np.sqrt(w)) @ U.conj().T


def normalize(phi: CPMap, normalization: str) -> CPMap:
    """Rescale Kraus factors to make ``phi`` unital or trace preserving.

    Unital: ``C_i <- C_i T^{-1/2}`` with ``T = sum C_i^* C_i``.
    Trace preserving: ``C_i <- S^{-1/2} C_i`` with ``S = sum C_i C_i^*``.
    """
    if normalization == "none":
        return phi
    K = phi._stack
    if normalization == "unital":
        T = np.einsum("kia,kib->ab", K.conj(), K)
        R = _inv_sqrt_checked(T, "sum C_i^* C_i")
        return CPMap(tuple(C @ R for C in phi.kraus))
    if normalization in ("trace_preserving", "tp"):
        S = np.einsum("kia,kja->ij", K, K.conj())
        L = _inv_sqrt_checked(S, "sum C_i C_i^*")
        return CPMap(tuple(L @ C for C in phi.kraus))
    raise ValueError(f"unknown normalization {normalization!r}")


def random_cp(dim_in: int, dim_out: int, rank: int, normalization: str,
              rng: np.random.Generator) -> CPMap:
    """Random CP map with Ginibre Kraus factors, optionally normalized.

    Raises
    ------
    SingularNormalization
        If normalization is impossible for these dimensions, e.g. a unital
        map with ``rank * dim_in < dim_out``.
    """
    if rank < 1:
        raise ValueError("rank must be >= 1")
    if normalization == "unital" and rank * dim_in < dim_out:
        raise SingularNormalization("unital map needs rank * dim_in >= dim_out")
    if normalization in ("trace_preserving", "tp") and rank * dim_out < dim_in:
        raise SingularNormalization("trace-preserving map needs rank * dim_out >= dim_in")
    for _ in range(10):
        phi = CPMap(tuple(ginibre(dim_in, dim_out, rng) for _ in range(rank)))
        try:
            return normalize(phi, normalization)
        except SingularNormalization:
            continue
    raise SingularNormalization("could not draw a normalizable map in 10 attempts")


def channel_action_error(phi: CPMap, psi: CPMap) -> float:
    """Largest entrywise difference of ``phi`` and ``psi`` over all matrix units."""
    if (phi.dim_in, phi.dim_out) != (psi.dim_in, psi.dim_out):
        raise ShapeError("maps have different dimensions")
    d = phi.dim_in
    worst = 0.0
    for i in range(d):
        for j in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = 1.0
            worst = max(worst, float(np.max(np.abs(apply(phi, E) - apply(psi, E)))))
    return worst
