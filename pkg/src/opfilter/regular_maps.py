"""Catalog of concrete regular operator maps.

A map is an :class:`OperatorMapDescriptor`: a k-ary function on same-size
Hermitian matrices plus the metadata the inequality suites filter on.
Maps are addressable by name, e.g. ``"lift:power:1.5"``, ``"neg:karcher:3"``,
``"lr:weighted:0.5"`` or ``"persp:lift:inverse"``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConfigError, ShapeError
from .hermitian import (
    LoewnerVerdict,
    TOL_ABS,
    TOL_REL,
    apply_spectral,
    as_hermitian,
    effective_tol,
    eigh_arrays,
    ginibre,
    herm,
    random_pd,
)
from .means import MeanSpec, geometric_mean

POWER_GRID = (1.0, 1.5, 2.0)
ALPHA_GRID = (0.25, 0.5, 0.75)


@dataclass(frozen=True)
class OperatorMapDescriptor:
    """A k-ary matrix map with curvature, homogeneity and domain metadata.

    ``arbitrary_last`` marks maps whose last operand may be any square
    matrix (the ``K``/``C`` slot of the Lieb-Ruskai maps); every other
    operand is Hermitian. ``tol_per_dim`` is extra inequality slack per unit
    of dimension, nonzero only for maps built on the iterative Karcher mean.
    """

    name: str
    arity: int
    evaluate: Callable[..., np.ndarray] = field(repr=False, compare=False)
    curvature: str = "convex"
    homogeneous: bool = False
    domain: str = "PD"
    zero_value_nonpositive: bool = False
    arbitrary_last: bool = False
    tol_per_dim: float = 0.0

    def __post_init__(self):
        if self.curvature not in ("convex", "concave"):
            raise ValueError(f"bad curvature {self.curvature!r}")
        if self.domain not in ("PSD", "PD"):
            raise ValueError(f"bad domain {self.domain!r}")
        if self.arity < 1:
            raise ValueError("arity must be positive")

    def __call__(self, *mats) -> np.ndarray:
        if len(mats) != self.arity:
            raise ShapeError(f"{self.name} takes {self.arity} operands, got {len(mats)}")
        shapes = {np.shape(M) for M in mats}
        if len(shapes) != 1:
            raise ShapeError(f"{self.name}: operands have different shapes {sorted(shapes)}")
        return self.evaluate(*mats)

    @property
    def sign(self) -> float:
        """+1 for convex maps, -1 for concave ones."""
        return 1.0 if self.curvature == "convex" else -1.0


# --------------------------------------------------------------------------
# one-variable lifts

def _square(A):
    A = as_hermitian(A)
    return herm(A @ A)


def _identity(A):
    return as_hermitian(A)


# returns (matrix function, curvature, domain, F(0) <= 0, homogeneous)
def _lift_table(key: str):
    head, _, arg = key.partition(":")
    if head == "square":
        return _square, "convex", "PSD", True, False
    if head == "power":
        p = float(arg)
        if not 1.0 <= p <= 2.0:
            raise ConfigError(f"t^p is operator convex only for p in [1, 2], got {p}")
        if p == 1.0:
            return _identity, "convex", "PSD", True, True
        if p == 2.0:
            return _square, "convex", "PSD", True, False
        return (lambda A: apply_spectral(("power", p), A)), "convex", "PSD", True, False
    if head == "neg_power":
        a = float(arg)
        if not 0.0 < a < 1.0:
            raise ConfigError(f"-t^a needs a in (0, 1), got {a}")
        return (lambda A: -apply_spectral(("power", a), A)), "convex", "PSD", True, False
    if head == "inverse":
        return (lambda A: apply_spectral("inverse", A)), "convex", "PD", False, False
    if head == "xlogx":
        return (lambda A: apply_spectral("xlogx", A)), "convex", "PD", False, False
    raise ConfigError(f"unknown lift {key!r}")


def lift(key: str) -> OperatorMapDescriptor:
    """One-variable map ``A -> f(A)`` for ``key`` in ``square``,
    ``power:<p>``, ``neg_power:<a>``, ``inverse``, ``xlogx``."""
    key = key.removeprefix("lift:")
    fn, curv, dom, zero, hom = _lift_table(key)
    return OperatorMapDescriptor(
        name=f"lift:{key}", arity=1, evaluate=fn, curvature=curv,
        homogeneous=hom, domain=dom, zero_value_nonpositive=zero,
    )


def sum_of_lifts(keys: Sequence[str]) -> OperatorMapDescriptor:
    """``F(A_1, ..., A_k) = f_1(A_1) + ... + f_k(A_k)``."""
    parts = [lift(k) for k in keys]
    if not parts:
        raise ConfigError("sum of lifts needs at least one term")

    def evaluate(*mats):
        return herm(sum(p.evaluate(A) for p, A in zip(parts, mats)))

    return OperatorMapDescriptor(
        name="sum:" + "+".join(p.name.removeprefix("lift:") for p in parts),
        arity=len(parts),
        evaluate=evaluate,
        curvature="convex",
        homogeneous=all(p.homogeneous for p in parts),
        domain="PD" if any(p.domain == "PD" for p in parts) else "PSD",
        zero_value_nonpositive=all(p.zero_value_nonpositive for p in parts),
    )


# --------------------------------------------------------------------------
# means as maps


def _mean_with_arity(text: str) -> tuple[MeanSpec, int]:
    """``binary:0.5`` -> arity 2; ``inductive:4`` / ``karcher:3`` -> given arity (default 3)."""
    head, _, rest = text.partition(":")
    if head == "binary":
        return MeanSpec.parse(text), 2
    if head in ("inductive", "karcher"):
        try:
            n = int(rest) if rest else 3
        except ValueError as exc:
            raise ConfigError(f"bad arity in {text!r}") from exc
        if n < 1:
            raise ConfigError("mean arity must be positive")
        return MeanSpec(head), n
    raise ConfigError(f"unknown mean {text!r}")


def mean_map(spec: MeanSpec, n: int) -> OperatorMapDescriptor:
    """The (concave, homogeneous) geometric mean as an n-ary map."""
    name = spec.name if spec.kind == "binary" else f"{spec.kind}:{n}"
    return OperatorMapDescriptor(
        name=f"mean:{name}", arity=n,
        evaluate=lambda *mats: geometric_mean(spec, mats),
        curvature="concave", homogeneous=True, domain="PD",
        tol_per_dim=spec.widened_tol(1),
    )


def negated_mean(spec: MeanSpec, n: int) -> OperatorMapDescriptor:
    base = mean_map(spec, n)
    return OperatorMapDescriptor(
        name="neg:" + base.name.removeprefix("mean:"), arity=n,
        evaluate=lambda *mats: -geometric_mean(spec, mats),
        curvature="convex", homogeneous=True, domain="PD",
        tol_per_dim=base.tol_per_dim,
    )


# --------------------------------------------------------------------------
# name resolution


@lru_cache(maxsize=None)
def get_map(name: str) -> OperatorMapDescriptor:
    """Resolve a map specifier string to its descriptor."""
    name = name.strip()
    head, _, rest = name.partition(":")
    if head == "lift":
        return lift(rest)
    if head == "sum":
        return sum_of_lifts(rest.split("+"))
    if head == "neg":
        return negated_mean(*_mean_with_arity(rest))
    if head == "mean":
        return mean_map(*_mean_with_arity(rest))
    if head == "lr":
        from .lieb_ruskai import lr_map

        return lr_map(rest)
    if head == "persp":
        from .perspectives import perspective_map

        return perspective_map(get_map(rest))
    raise ConfigError(f"unknown map specifier {name!r}")


CATALOG_NAMES = (
    "lift:square",
    *(f"lift:power:{p:g}" for p in POWER_GRID),
    *(f"lift:neg_power:{a:g}" for a in ALPHA_GRID),
    "lift:inverse",
    "lift:xlogx",
    "sum:square+neg_power:0.5",
    "sum:power:1.5+neg_power:0.25",
    "sum:inverse+xlogx",
    *(f"neg:binary:{a:g}" for a in ALPHA_GRID),
    "neg:inductive:3",
    "neg:karcher:3",
    "lr:basic",
    "lr:n:binary:0.5",
    "lr:n:inductive:3",
    "lr:n:karcher:3",
    *(f"lr:weighted:{a:g}" for a in ALPHA_GRID),
)


def catalog() -> list[OperatorMapDescriptor]:
    """All cataloged convex maps with their default parameters."""
    return [get_map(n) for n in CATALOG_NAMES]


# --------------------------------------------------------------------------
# curvature probing


def sample_operands(F: OperatorMapDescriptor, dim: int, rng: np.random.Generator,
                    cond_cap: float = 1e3) -> list[np.ndarray]:
    """Random operand tuple in the domain of ``F`` (PD Hermitian operands)."""
    mats = [random_pd(dim, cond_cap, rng) for _ in range(F.arity)]
    if F.arbitrary_last:
        mats[-1] = ginibre(dim, dim, rng)
    return mats


def convexity_slack(F: OperatorMapDescriptor, X: Sequence, Y: Sequence, lam: float,
                    *, tol_abs: float = TOL_ABS, tol_rel: float = TOL_REL) -> LoewnerVerdict:
    """Loewner verdict for ``lam F(X) + (1-lam) F(Y)`` vs ``F(lam X + (1-lam) Y)``.

    The comparison is ``>=`` for convex maps and ``<=`` for concave ones, so
    a nonnegative slack always means the curvature flag is respected.
    """
    mid = [lam * x + (1.0 - lam) * y for x, y in zip(X, Y)]
    chord = lam * F(*X) + (1.0 - lam) * F(*Y)
    at_mid = F(*mid)
    dim = np.shape(chord)[0]
    tol = effective_tol(chord, at_mid, tol_abs=tol_abs, tol_rel=tol_rel) + F.tol_per_dim * dim
    diff = herm(F.sign * (chord - at_mid))
    w, U = eigh_arrays(diff)
    slack = float(w[0])
    holds = slack >= -tol
    return LoewnerVerdict(holds, slack, tol, None if holds else U[:, 0].copy())


@dataclass(frozen=True)
class ProbeSummary:
    map_name: str
    slacks: tuple
    worst: LoewnerVerdict

    @property
    def holds(self) -> bool:
        return self.failures == 0

    @property
    def failures(self) -> int:
        return sum(1 for s, t in self.slacks if s < -t)

    @property
    def worst_slack(self) -> float:
        return self.worst.min_slack


def probe_curvature(F: OperatorMapDescriptor, dim: int, trials: int,
                    rng: np.random.Generator, tol_abs: float = TOL_ABS,
                    tol_rel: float = TOL_REL, cond_cap: float = 1e3) -> ProbeSummary:
    """Randomized check that ``F`` respects its curvature flag.

    Each trial draws two operand tuples and ``lam`` uniform in ``(0, 1)``.
    Domain violations raised by ``F`` propagate.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    slacks = []
    worst: Optional[LoewnerVerdict] = None
    for _ in range(trials):
        X = sample_operands(F, dim, rng, cond_cap)
        Y = sample_operands(F, dim, rng, cond_cap)
        lam = float(rng.uniform(0.0, 1.0))
        v = convexity_slack(F, X, Y, lam, tol_abs=tol_abs, tol_rel=tol_rel)
        slacks.append((v.min_slack, v.tol))
        if worst is None or v.min_slack + v.tol < worst.min_slack + worst.tol:
            worst = v
    return ProbeSummary(F.name, tuple(slacks), worst)
