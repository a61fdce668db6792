"""Complex Hermitian linear algebra.

Matrices are plain complex ``numpy`` arrays. Functions that promise a
Hermitian result symmetrize before returning, so ``X == X.conj().T``
holds exactly on every output.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import lapack

from .errors import DomainViolation, NumericalFailure, ShapeError

TOL_ABS = 1e-10
TOL_REL = 1e-9

# spectra of PD-only functions must clear this fraction of the spectral norm
PD_FLOOR = 1e-12
# eigenvalues this small (relative) are roundoff around an exact zero
ZERO_FLOOR = 1e-13


# --------------------------------------------------------------------------
# basic coercions


def herm(X) -> np.ndarray:
    """Return the Hermitian part ``(X + X^*)/2`` as a complex array."""
    X = np.asarray(X, dtype=complex)
    return 0.5 * (X + X.conj().T)


def as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    if X.ndim == 0:
        X = X.reshape(1, 1)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise ShapeError(f"expected a 2-d matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise NumericalFailure("matrix has non-finite entries")
    return X


def as_hermitian(X, atol: float = 1e-10) -> np.ndarray:
    """Validate that ``X`` is square and Hermitian, then symmetrize it."""
    X = np.asarray(X, dtype=complex)
    if X.ndim == 0:
        X = X.reshape(1, 1)
    if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape[0] < 1:
        raise ShapeError(f"expected a square matrix, got shape {X.shape}")
    Xh = X.conj().T
    if (X == Xh).all():
        return X
    scale = float(abs(X).max())
    if not np.isfinite(scale):
        raise NumericalFailure("matrix has non-finite entries")
    if float(abs(X - Xh).max()) > atol * max(1.0, scale):
        raise ShapeError("matrix is not Hermitian")
    return 0.5 * (X + Xh)


def spectral_norm(X) -> float:
    X = np.asarray(X)
    if X.ndim == 2 and X.shape[0] == X.shape[1] and np.array_equal(X, X.conj().T):
        return float(abs(eigvalsh(X)).max())
    return float(np.linalg.norm(X, 2))


def dagger(X) -> np.ndarray:
    return np.asarray(X).conj().T


# --------------------------------------------------------------------------
# eigensolvers


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    unitary: np.ndarray

    def reconstruct(self) -> np.ndarray:
        U = self.unitary
        return herm((U * self.eigenvalues) @ U.conj().T)

    def apply(self, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        U = self.unitary
        return herm((U * f(self.eigenvalues)) @ U.conj().T)


def _off_norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(A - np.diag(np.diag(A))))


def jacobi_eigh(H, tol: float = 1e-14, max_sweeps: int = 100) -> SpectralDecomposition:
    """Cyclic complex Jacobi eigensolver.

    Each 2x2 pivot block ``[[a, b], [conj(b), d]]`` is first rotated to a
    real block by the phase of ``b`` and then annihilated by a real Givens
    rotation. Sweeps stop once the off-diagonal Frobenius mass drops to
    ``tol * ||H||_F``.

    Raises
    ------
    NumericalFailure
        If ``max_sweeps`` cyclic sweeps do not reach the tolerance.
    """
    A = as_hermitian(H).copy()
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    target = tol * np.linalg.norm(A)
    negligible = 1e-20 * np.linalg.norm(A)
    for _ in range(max_sweeps):
        off = _off_norm(A)
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = A[p, q]
                r = abs(b)
                if r <= negligible:
                    continue
                a, d = A[p, p].real, A[q, q].real
                theta = (d - a) / (2.0 * r)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta == 0.0:
                        t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ph = np.conj(b) / r
                G = np.array([[c, s], [-s * ph, c * ph]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                A[idx, :] = G.conj().T @ A[idx, :]
                V[:, idx] = V[:, idx] @ G
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
    else:
        off = _off_norm(A)
        if off > target:
            raise NumericalFailure(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(A).real
    order = np.argsort(w, kind="stable")
    return SpectralDecomposition(w[order].copy(), V[:, order].copy())


def eigh_arrays(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(eigenvalues, eigenvectors)`` of a Hermitian matrix, no symmetrization."""
    w, U, info = lapack.zheevd(A)
    if info != 0:
        raise NumericalFailure(f"LAPACK zheevd failed with info={info}")
    return w, U


def eigvalsh(H) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix."""
    w, _, info = lapack.zheevd(as_hermitian(H), compute_v=0)
    if info != 0:
        raise NumericalFailure(f"LAPACK zheevd failed with info={info}")
    return w


def eigh(H, method: str = "lapack") -> SpectralDecomposition:
    """Eigendecomposition with ascending eigenvalues.

    ``method="lapack"`` (default) calls LAPACK ``zheevd``;
    ``method="jacobi"`` runs :func:`jacobi_eigh`.
    """
    if method == "jacobi":
        return jacobi_eigh(H)
    if method != "lapack":
        raise ValueError(f"unknown eigensolver {method!r}")
    w, U = eigh_arrays(as_hermitian(H))
    return SpectralDecomposition(w, U)


# --------------------------------------------------------------------------
# functional calculus

# name -> (scalar function, domain); domain is "all", "psd" or "pd"
_SPECTRAL = {
    "sqrt": (np.sqrt, "psd"),
    "inv_sqrt": (lambda w: 1.0 / np.sqrt(w), "pd"),
    "inverse": (lambda w: 1.0 / w, "pd"),
    "log": (np.log, "pd"),
    "exp": (np.exp, "all"),
    "xlogx": (lambda w: w * np.log(w), "pd"),
    "identity": (lambda w: w, "all"),
}


def _resolve_function(f):
    if callable(f):
        return f, "all"
    if isinstance(f, tuple) and f[0] == "power":
        p = float(f[1])
    elif isinstance(f, str) and f.startswith("power:"):
        p = float(f.split(":", 1)[1])
    elif f in _SPECTRAL:
        return _SPECTRAL[f]
    else:
        raise ValueError(f"unknown spectral function {f!r}")
    if p == 1.0:
        return (lambda w: w), "all"
    if p == 2.0:
        return (lambda w: w * w), "all"
    if p > 0:
        return (lambda w: np.power(w, p)), "psd"
    return (lambda w: np.power(w, p)), "pd"


def _check_domain(w: np.ndarray, domain: str, norm: float) -> np.ndarray:
    if domain == "all":
        return w
    if domain == "pd":
        if norm == 0.0 or w[0] < PD_FLOOR * norm:
            raise DomainViolation(
                f"smallest eigenvalue {w[0]:.3e} below PD floor {PD_FLOOR * norm:.3e}"
            )
        return w
    if w[0] < -PD_FLOOR * max(norm, 1e-300):
        raise DomainViolation(f"matrix is not PSD: smallest eigenvalue {w[0]:.3e}")
    return np.where(w <= ZERO_FLOOR * norm, 0.0, w)


def apply_spectral(f, H, decomposition: Optional[SpectralDecomposition] = None) -> np.ndarray:
    """Return ``U diag(f(lambda)) U^*`` for Hermitian ``H``.

    ``f`` is one of ``"sqrt"``, ``"inv_sqrt"``, ``"inverse"``, ``"log"``,
    ``"exp"``, ``"xlogx"``, ``"power:<p>"`` / ``("power", p)``, or an
    arbitrary vectorized callable (treated as defined everywhere).

    Raises
    ------
    DomainViolation
        If the spectrum is not PD for inverse, log and negative powers, or
        not PSD for square roots and positive fractional powers.
    """
    fn, domain = _resolve_function(f)
    dec = decomposition if decomposition is not None else eigh(H)
    w = dec.eigenvalues
    norm = float(np.max(np.abs(w))) if w.size else 0.0
    w = _check_domain(w, domain, norm)
    return dec.apply(lambda _: fn(w))


def sqrtm(H) -> np.ndarray:
    return apply_spectral("sqrt", H)


def inv(H) -> np.ndarray:
    return apply_spectral("inverse", H)


def sqrt_and_inv_sqrt(H) -> tuple[np.ndarray, np.ndarray]:
    """``(H^{1/2}, H^{-1/2})`` from one eigendecomposition; ``H`` must be PD."""
    dec = eigh(H)
    w = dec.eigenvalues
    _check_domain(w, "pd", float(np.max(np.abs(w))))
    r = np.sqrt(w)
    return dec.apply(lambda _: r), dec.apply(lambda _: 1.0 / r)


def require_pd(H, name: str = "operand") -> np.ndarray:
    """Validate that ``H`` is Hermitian PD and return its symmetrized copy."""
    H = as_hermitian(H)
    w = eigvalsh(H)
    norm = float(np.max(np.abs(w)))
    if norm == 0.0 or w[0] < PD_FLOOR * norm:
        raise DomainViolation(f"{name} is not positive definite (min eigenvalue {w[0]:.3e})")
    return H


# --------------------------------------------------------------------------
# products and order


def congruence(X, C) -> np.ndarray:
    """Return ``C^* X C``; requires ``C.rows == X.dim``."""
    X = as_matrix(X)
    C = as_matrix(C)
    if X.shape[0] != X.shape[1] or C.shape[0] != X.shape[0]:
        raise ShapeError(f"cannot form C^* X C with X {X.shape} and C {C.shape}")
    return herm(C.conj().T @ X @ C)


def tensor(A, B) -> np.ndarray:
    """Kronecker product, row index ``i1 * rows(B) + i2``."""
    return np.kron(as_matrix(A), as_matrix(B))


def effective_tol(*mats, tol_abs: float = TOL_ABS, tol_rel: float = TOL_REL) -> float:
    scale = max((spectral_norm(M) for M in mats), default=0.0)
    return tol_abs + tol_rel * scale


@dataclass(frozen=True)
class LoewnerVerdict:
    holds: bool
    min_slack: float
    tol: float
    witness_vector: Optional[np.ndarray] = None


def loewner_geq(A, B, tol: Optional[float] = None, *, tol_abs: float = TOL_ABS,
                tol_rel: float = TOL_REL) -> LoewnerVerdict:
    """Decide ``A >= B`` in the Loewner order.

    ``min_slack`` is the smallest eigenvalue of ``A - B``. Without an explicit
    ``tol`` the relative-scaled tolerance ``tol_abs + tol_rel*max(||A||, ||B||)``
    is used. When the check fails the eigenvector of the most negative
    eigenvalue is attached as a witness.
    """
    A = as_hermitian(A)
    B = as_hermitian(B)
    if A.shape != B.shape:
        raise ShapeError(f"shape mismatch {A.shape} vs {B.shape}")
    if tol is None:
        tol = effective_tol(A, B, tol_abs=tol_abs, tol_rel=tol_rel)
    w, U = eigh_arrays(herm(A - B))
    slack = float(w[0])
    holds = slack >= -tol
    return LoewnerVerdict(holds, slack, float(tol), None if holds else U[:, 0].copy())


# --------------------------------------------------------------------------
# seeded random generation


def substream(seed: int, index: int) -> tuple[int, np.random.Generator]:
    """Derive the independent stream for trial ``index`` of master ``seed``.

    Returns the 64-bit substream seed (recorded in reports) and a PCG64
    generator seeded from it.
    """
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=(int(index),))
    sub = int(ss.generate_state(1, dtype=np.uint64)[0])
    return sub, np.random.default_rng(sub)


def ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary: QR of a Ginibre matrix with the phases of ``diag(R)`` divided out."""
    qr, tau, _, info = lapack.zgeqrf(ginibre(dim, dim, rng))
    Q, _, info2 = lapack.zungqr(qr, tau)
    if info or info2:
        raise NumericalFailure("QR factorization failed")
    d = np.diag(qr)
    return Q * (d / np.abs(d))


def random_pd(dim: int, cond_cap: float, rng: np.random.Generator) -> np.ndarray:
    """Random PD matrix ``Q diag(lambda) Q^*`` with ``lambda`` log-uniform in ``[1/cond_cap, 1]``."""
    if cond_cap < 1:
        raise ValueError("cond_cap must be >= 1")
    Q = random_unitary(dim, rng)
    lam = np.exp(rng.uniform(-np.log(cond_cap), 0.0, size=dim))
    if cond_cap == 1:
        return np.eye(dim, dtype=complex)
    return herm((Q * lam) @ Q.conj().T)


def random_contraction(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Random matrix with operator norm in ``(0, 1 - 1e-6]``."""
    G = ginibre(rows, cols, rng)
    target = rng.uniform(0.05, 1.0 - 1e-6)
    return G * (target / spectral_norm(G))


def random_invertible(dim: int, spread: float, rng: np.random.Generator) -> np.ndarray:
    """Random non-normal invertible matrix with singular values in ``[1/spread, spread]``."""
    s = np.exp(rng.uniform(-np.log(spread), np.log(spread), size=dim))
    return (random_unitary(dim, rng) * s) @ random_unitary(dim, rng)
