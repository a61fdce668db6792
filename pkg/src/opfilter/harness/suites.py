"""Randomized inequality suites.

A suite is a pair of functions: ``sample(cfg, rng)`` draws one
:class:`Instance`, and ``check(instance)`` returns the Loewner verdict of
the inequality on it. Keeping the two apart is what makes failing instances
replayable: a dumped instance carries everything ``check`` needs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..cpmaps import CPMap
from ..errors import ConfigError, DomainViolation
from ..hermitian import (
    LoewnerVerdict,
    congruence,
    effective_tol,
    eigh_arrays,
    eigvalsh,
    ginibre,
    herm,
    random_contraction,
    random_pd,
    spectral_norm,
)
from ..io import cpmap_from_json, cpmap_to_json, matrix_from_json, matrix_to_json
from ..lieb_ruskai import lr_basic, lr_n, lr_weighted
from ..means import MeanSpec, geometric_mean
from ..perspectives import perspective_map
from ..regular_maps import OperatorMapDescriptor, _mean_with_arity, get_map, sample_operands
from .channels import parse_channel
from .config import SuiteConfig

# Phi(B) with smaller relative spectral gap is redrawn
SINGULAR_GAP = 1e-8
MAX_REDRAWS = 50


@dataclass
class Instance:
    """One trial's data. ``mats`` maps a role name to a list of matrices."""

    suite: str
    spec: dict
    mats: dict
    channel: Optional[CPMap] = None
    params: dict = field(default_factory=dict)
    tol_abs: float = 1e-10
    tol_rel: float = 1e-9

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "spec": self.spec,
            "params": self.params,
            "tol_abs": self.tol_abs,
            "tol_rel": self.tol_rel,
            "channel": None if self.channel is None else cpmap_to_json(self.channel),
            "mats": {k: [matrix_to_json(M) for M in v] for k, v in self.mats.items()},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Instance":
        ch = obj.get("channel")
        return cls(
            suite=obj["suite"],
            spec=obj["spec"],
            mats={k: [matrix_from_json(M) for M in v] for k, v in obj["mats"].items()},
            channel=None if ch is None else cpmap_from_json(ch),
            params=obj.get("params", {}),
            tol_abs=obj["tol_abs"],
            tol_rel=obj["tol_rel"],
        )


@dataclass(frozen=True)
class Suite:
    name: str
    summary: str
    validate: Callable[[SuiteConfig], None]
    sample: Callable[[SuiteConfig, np.random.Generator], Instance]
    check: Callable[[Instance], LoewnerVerdict]


def compare(lower, upper, inst: Instance, extra_tol: float = 0.0) -> LoewnerVerdict:
    """Verdict on ``upper >= lower`` with the instance's tolerances."""
    lower = herm(lower)
    upper = herm(upper)
    tol = effective_tol(lower, upper, tol_abs=inst.tol_abs, tol_rel=inst.tol_rel) + extra_tol
    w, U = eigh_arrays(herm(upper - lower))
    slack = float(w[0])
    holds = slack >= -tol
    return LoewnerVerdict(holds, slack, tol, None if holds else U[:, 0].copy())


def _pd_margin_ok(M) -> bool:
    w = eigvalsh(herm(M))
    return w[0] >= SINGULAR_GAP * max(abs(w[-1]), 1e-300)


def _base(cfg: SuiteConfig, rng) -> Instance:
    return Instance(cfg.suite, {}, {}, tol_abs=cfg.tol_abs, tol_rel=cfg.tol_rel)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def _resolve_map(cfg: SuiteConfig, default: str) -> OperatorMapDescriptor:
    return get_map(cfg.map or default)


def _channel(cfg: SuiteConfig, default: str):
    return parse_channel(cfg.channel or default)


def _check_channel_dims(cfg: SuiteConfig, spec) -> None:
    if spec.kind == "random":
        dim_out = cfg.out_dim
        _require(spec.rank * cfg.dim >= dim_out,
                 f"random channel of rank {spec.rank} from dim {cfg.dim} cannot have "
                 f"PD outputs in dim {dim_out}")
        if spec.normalization == "trace_preserving":
            _require(spec.rank * dim_out >= cfg.dim,
                     "trace-preserving channel needs rank * dim_out >= dim")


def _draw_filtered(cfg: SuiteConfig, rng, channel_default: str, arity: int,
                   needs_pd: tuple, last_general: bool = False):
    """Draw a channel and PD operands, redrawing while some ``Phi(A_j)`` is near-singular.

    ``needs_pd`` lists the operand indices whose images must be PD.
    """
    spec = _channel(cfg, channel_default)
    for _ in range(MAX_REDRAWS):
        phi = spec.sample(cfg.dim, cfg.out_dim, rng)
        mats = [random_pd(phi.dim_in, cfg.cond_cap, rng) for _ in range(arity)]
        if last_general:
            mats[-1] = ginibre(phi.dim_in, phi.dim_in, rng)
        if all(_pd_margin_ok(phi(mats[j])) for j in needs_pd):
            return phi, mats
    raise DomainViolation(f"no instance with PD channel outputs in {MAX_REDRAWS} draws")


# --------------------------------------------------------------------------
# Jensen suites


def _validate_jensen_contraction(cfg):
    F = _resolve_map(cfg, "lift:square")
    _require(F.curvature == "convex", f"{F.name} is not convex")
    _require(F.domain == "PSD", f"{F.name} has PD domain; contractions need PSD-domain maps")
    _require(F.zero_value_nonpositive, f"{F.name} does not satisfy F(0,...,0) <= 0")


def _sample_jensen_contraction(cfg, rng):
    F = _resolve_map(cfg, "lift:square")
    inst = _base(cfg, rng)
    inst.spec = {"map": F.name}
    inst.mats = {
        "A": [random_pd(cfg.dim, cfg.cond_cap, rng) for _ in range(F.arity)],
        "C": [random_contraction(cfg.dim, cfg.out_dim, rng)],
    }
    return inst


def _check_jensen_contraction(inst):
    F = get_map(inst.spec["map"])
    C = inst.mats["C"][0]
    A = inst.mats["A"]
    lhs = F(*[congruence(X, C) for X in A])
    rhs = congruence(F(*A), C)
    return compare(lhs, rhs, inst, F.tol_per_dim * C.shape[1])


def _validate_jensen_sum(cfg):
    F = _resolve_map(cfg, "lift:square")
    _require(F.curvature == "convex", f"{F.name} is not convex")


def _sample_jensen_sum(cfg, rng):
    F = _resolve_map(cfg, "lift:square")
    n = cfg.n or 2
    D = [ginibre(cfg.dim, cfg.out_dim, rng) for _ in range(n)]
    S = sum(d.conj().T @ d for d in D)
    w, U = eigh_arrays(herm(S))
    R = (U / np.sqrt(w)) @ U.conj().T
    inst = _base(cfg, rng)
    inst.spec = {"map": F.name}
    inst.mats = {"C": [d @ R for d in D]}
    for i in range(n):
        inst.mats[f"A{i}"] = [random_pd(cfg.dim, cfg.cond_cap, rng) for _ in range(F.arity)]
    return inst


def _check_jensen_sum(inst):
    F = get_map(inst.spec["map"])
    Cs = inst.mats["C"]
    tuples = [inst.mats[f"A{i}"] for i in range(len(Cs))]
    args = [herm(sum(congruence(t[j], C) for t, C in zip(tuples, Cs))) for j in range(F.arity)]
    lhs = F(*args)
    rhs = sum(congruence(F(*t), C) for t, C in zip(tuples, Cs))
    return compare(lhs, rhs, inst, F.tol_per_dim * Cs[0].shape[1])


def _validate_jensen_cp(cfg):
    F = _resolve_map(cfg, "lift:square")
    _require(F.curvature == "convex", f"{F.name} is not convex")
    spec = _channel(cfg, "random:unital:rank=4")
    _require(spec.unital, f"channel {spec.text!r} is not unital")
    _check_channel_dims(cfg, spec)


def _sample_jensen_cp(cfg, rng):
    F = _resolve_map(cfg, "lift:square")
    phi, mats = _draw_filtered(cfg, rng, "random:unital:rank=4", F.arity, ())
    inst = _base(cfg, rng)
    inst.spec = {"map": F.name}
    inst.mats = {"A": mats}
    inst.channel = phi
    return inst


def _check_jensen_cp(inst):
    F = get_map(inst.spec["map"])
    phi = inst.channel
    A = inst.mats["A"]
    lhs = F(*[phi(X) for X in A])
    rhs = phi(F(*A))
    return compare(lhs, rhs, inst, F.tol_per_dim * phi.dim_out)


# --------------------------------------------------------------------------
# filtering through arbitrary CP maps


def _validate_perspective(cfg):
    F = _resolve_map(cfg, "lift:inverse")
    _require(F.curvature == "convex", f"{F.name} is not convex")
    _check_channel_dims(cfg, _channel(cfg, "random:none:rank=3"))


def _sample_perspective(cfg, rng):
    F = _resolve_map(cfg, "lift:inverse")
    P = perspective_map(F)
    phi, mats = _draw_filtered(cfg, rng, "random:none:rank=3", P.arity, tuple(range(P.arity)))
    inst = _base(cfg, rng)
    inst.spec = {"map": F.name}
    inst.mats = {"A": mats}
    inst.channel = phi
    return inst


def _check_perspective(inst):
    P = perspective_map(get_map(inst.spec["map"]))
    phi = inst.channel
    A = inst.mats["A"]
    lhs = P(*[phi(X) for X in A])
    rhs = phi(P(*A))
    return compare(lhs, rhs, inst, P.tol_per_dim * phi.dim_out)


def _validate_homogeneous(cfg):
    F = _resolve_map(cfg, "lr:n:karcher:3")
    _require(F.homogeneous, f"{F.name} is not positively homogeneous")
    _require(F.curvature == "convex", f"{F.name} is concave; use the mean-filter suite")
    _check_channel_dims(cfg, _channel(cfg, "random:none:rank=3"))


def _sample_homogeneous(cfg, rng):
    F = _resolve_map(cfg, "lr:n:karcher:3")
    phi, mats = _draw_filtered(cfg, rng, "random:none:rank=3", F.arity, tuple(range(F.arity)))
    inst = _base(cfg, rng)
    inst.spec = {"map": F.name}
    inst.mats = {"A": mats}
    inst.channel = phi
    return inst


def _check_homogeneous(inst):
    F = get_map(inst.spec["map"])
    phi = inst.channel
    A = inst.mats["A"]
    lhs = F(*[phi(X) for X in A])
    rhs = phi(F(*A))
    return compare(lhs, rhs, inst, F.tol_per_dim * phi.dim_out)


def _mean_cfg(cfg) -> tuple[MeanSpec, int]:
    spec = MeanSpec.parse(cfg.mean or "karcher")
    n = 2 if spec.kind == "binary" else (cfg.n or 3)
    if spec.kind == "binary" and cfg.n not in (None, 2):
        raise ConfigError("the binary mean takes exactly two arguments")
    return spec, n


def _validate_mean(cfg):
    _mean_cfg(cfg)
    _check_channel_dims(cfg, _channel(cfg, "random:none:rank=3"))


def _sample_mean(cfg, rng):
    spec, n = _mean_cfg(cfg)
    phi, mats = _draw_filtered(cfg, rng, "random:none:rank=3", n, tuple(range(n)))
    inst = _base(cfg, rng)
    inst.spec = {"mean": spec.name}
    inst.mats = {"A": mats}
    inst.channel = phi
    return inst


def _check_mean(inst):
    spec = MeanSpec.parse(inst.spec["mean"])
    phi = inst.channel
    A = inst.mats["A"]
    upper = geometric_mean(spec, [phi(X) for X in A])
    lower = phi(geometric_mean(spec, A))
    return compare(lower, upper, inst, spec.widened_tol(phi.dim_out))


# --------------------------------------------------------------------------
# Lieb-Ruskai


def _lr_variant(cfg) -> tuple[str, str]:
    name = cfg.map or "lr:basic"
    _require(name.startswith("lr:"), f"lr suite needs an lr:* map, got {name!r}")
    get_map(name)
    return name.split(":")[1], name


def _validate_lr(cfg):
    _lr_variant(cfg)
    _check_channel_dims(cfg, _channel(cfg, "random:none:rank=3"))


def _sample_lr(cfg, rng):
    variant, name = _lr_variant(cfg)
    F = get_map(name)
    if variant == "basic":
        phi, mats = _draw_filtered(cfg, rng, "random:none:rank=3", 2, (0,), last_general=True)
    elif variant == "weighted":
        phi, mats = _draw_filtered(cfg, rng, "random:none:rank=3", 3, (0, 1), last_general=True)
    else:
        phi, mats = _draw_filtered(cfg, rng, "random:none:rank=3", F.arity, tuple(range(F.arity)))
    inst = _base(cfg, rng)
    inst.spec = {"map": F.name}
    inst.mats = {"A": mats}
    inst.channel = phi
    return inst


def _check_lr(inst):
    name = inst.spec["map"]
    phi = inst.channel
    A = inst.mats["A"]
    variant = name.split(":")[1]
    extra = 0.0
    if variant == "basic":
        lhs = lr_basic(phi(A[0]), phi(A[1]))
        rhs = phi(lr_basic(A[0], A[1]))
    elif variant == "weighted":
        alpha = float(name.split(":")[2])
        lhs = lr_weighted(alpha, phi(A[0]), phi(A[1]), phi(A[2]))
        rhs = phi(lr_weighted(alpha, A[0], A[1], A[2]))
    else:
        mean, _ = _mean_with_arity(name.split(":", 2)[2])
        lhs = lr_n(mean, [phi(X) for X in A[:-1]], phi(A[-1]))
        rhs = phi(lr_n(mean, A[:-1], A[-1]))
        extra = mean.widened_tol(phi.dim_out)
    return compare(lhs, rhs, inst, extra)


# --------------------------------------------------------------------------
# convexity probes


def _validate_convexity(cfg):
    _resolve_map(cfg, "lr:basic")


def _sample_convexity(cfg, rng):
    F = _resolve_map(cfg, "lr:basic")
    inst = _base(cfg, rng)
    inst.spec = {"map": F.name}
    inst.mats = {
        "X": sample_operands(F, cfg.dim, rng, cfg.cond_cap),
        "Y": sample_operands(F, cfg.dim, rng, cfg.cond_cap),
    }
    inst.params = {"lam": float(rng.uniform(0.0, 1.0))}
    return inst


def _check_convexity(inst):
    F = get_map(inst.spec["map"])
    lam = inst.params["lam"]
    X, Y = inst.mats["X"], inst.mats["Y"]
    mid = [lam * x + (1.0 - lam) * y for x, y in zip(X, Y)]
    chord = lam * F(*X) + (1.0 - lam) * F(*Y)
    at_mid = F(*mid)
    dim = chord.shape[0]
    if F.curvature == "convex":
        return compare(at_mid, chord, inst, F.tol_per_dim * dim)
    return compare(chord, at_mid, inst, F.tol_per_dim * dim)


SUITES = {
    s.name: s
    for s in (
        Suite("jensen-contraction", "F(C*AC) <= C*F(A)C for contractions C",
              _validate_jensen_contraction, _sample_jensen_contraction, _check_jensen_contraction),
        Suite("jensen-sum", "F(sum C_i*A_iC_i) <= sum C_i*F(A_i)C_i with sum C_i*C_i = I",
              _validate_jensen_sum, _sample_jensen_sum, _check_jensen_sum),
        Suite("jensen-cp", "F(Phi(A)) <= Phi(F(A)) for unital CP Phi",
              _validate_jensen_cp, _sample_jensen_cp, _check_jensen_cp),
        Suite("perspective-filter", "P_F(Phi(A)) <= Phi(P_F(A)) for any CP Phi",
              _validate_perspective, _sample_perspective, _check_perspective),
        Suite("homogeneous-filter", "F(Phi(A)) <= Phi(F(A)) for convex homogeneous F",
              _validate_homogeneous, _sample_homogeneous, _check_homogeneous),
        Suite("mean-filter", "Phi(G(A)) <= G(Phi(A)) for geometric means G",
              _validate_mean, _sample_mean, _check_mean),
        Suite("lr", "Lieb-Ruskai maps filtered through CP maps",
              _validate_lr, _sample_lr, _check_lr),
        Suite("convexity", "chord above graph: lam F(X) + (1-lam) F(Y) >= F(lam X + (1-lam) Y)",
              _validate_convexity, _sample_convexity, _check_convexity),
    )
}


def get_suite(name: str) -> Suite:
    try:
        return SUITES[name]
    except KeyError:
        raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
