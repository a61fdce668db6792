"""Acceptance criteria, one test each.

Every test records a ``criterion N: PASS|FAIL ...`` line that is echoed in
the pytest terminal summary. ``python tests/test_acceptance.py`` runs them
all and prints the same lines.
"""
import json
import time

import numpy as np
import pytest

from opfilter.cpmaps import channel_action_error, choi, kraus_from_choi, random_cp
from opfilter.harness import SuiteConfig, run_suite
from opfilter.hermitian import (
    apply_spectral,
    eigh,
    ginibre,
    inv,
    random_invertible,
    random_pd,
    sqrtm,
    substream,
)
from opfilter.lieb_ruskai import lr_n, lr_n_commuting, lr_weighted, lr_weighted_commuting
from opfilter.means import MeanSpec, binary_geometric, geometric_mean, karcher_mean
from opfilter.regular_maps import ALPHA_GRID, catalog

try:
    from conftest import ACCEPTANCE_LINES, rel_err
except ImportError:  # run as a script from elsewhere
    import sys
    from pathlib import Path

    sys.path.insert(0, str(Path(__file__).parent))
    from conftest import ACCEPTANCE_LINES, rel_err

DIMS = range(2, 7)
TRIALS = 200


def _sweep(configs):
    """Run suite configs; returns (total trials, list of bad runs, worst slack)."""
    total, bad, worst = 0, [], np.inf
    for cfg in configs:
        rep = run_suite(cfg)
        total += cfg.trials
        if rep.worst_slack is not None:
            worst = min(worst, rep.worst_slack)
        if rep.failures or rep.errors:
            bad.append((cfg.suite, cfg.map or cfg.mean, cfg.channel, cfg.dim, cfg.seed,
                        rep.failures, rep.errors, rep.worst_slack))
    return total, bad, worst


def _record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


# --------------------------------------------------------------------------


def criterion_1():
    psd = [F for F in catalog() if F.domain == "PSD" and F.curvature == "convex"]
    configs = []
    for seed in (1, 2, 3):
        for dim in DIMS:
            for F in psd:
                for suite in ("jensen-contraction", "jensen-sum", "jensen-cp"):
                    if suite == "jensen-contraction" and not F.zero_value_nonpositive:
                        continue
                    configs.append(SuiteConfig(suite, dim=dim, trials=TRIALS, seed=seed, map=F.name))
    start = time.perf_counter()
    total, bad, worst = _sweep(configs)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60.0
    return ok, (f"Jensen suites, {len(psd)} maps, {len(configs)} runs, {total} trials, "
                f"{len(bad)} bad runs, worst slack {worst:.3g}, {elapsed:.1f} s (limit 60 s)")


def criterion_2():
    channels = [("identity", 4), ("ptrace:2x2:factor=2", 4), ("ptrace:2x3:factor=2", 6),
                ("ptrace:2x3:factor=1", 6)]
    channels += [(f"random:{norm}:rank={r}", 4) for r in range(2, 7)
                 for norm in ("none", "unital", "tp")]
    configs = [
        SuiteConfig("perspective-filter", dim=dim, dim_out=3, trials=TRIALS, seed=11,
                    map=F, channel=ch)
        for F in ("lift:inverse", "lift:square", "neg:binary:0.5")
        for ch, dim in channels
    ]
    total, bad, worst = _sweep(configs)
    return not bad, (f"perspective filter, {len(configs)} map/channel pairs, {total} trials, "
                     f"{len(bad)} bad, worst slack {worst:.3g}")


def criterion_3():
    means = [(f"binary:{a:g}", None) for a in ALPHA_GRID]
    means += [("inductive", n) for n in (3, 4)] + [("karcher", n) for n in (2, 3, 4)]
    configs = [SuiteConfig("mean-filter", dim=dim, trials=TRIALS, seed=21, mean=m, n=n)
               for m, n in means for dim in DIMS]
    total, bad, worst = _sweep(configs)
    return not bad, (f"mean filter, {len(means)} means x dims 2-6, {total} trials, "
                     f"{len(bad)} bad, worst slack {worst:.3g}")


def criterion_4():
    # (a) CP inequality for K* A^{-1} K with arbitrary K
    configs = [SuiteConfig("lr", dim=d, trials=TRIALS, seed=31, map="lr:basic") for d in DIMS]
    configs.append(SuiteConfig("lr", dim=4, dim_out=2, trials=TRIALS, seed=32, map="lr:basic"))
    ta, bad_a, worst_a = _sweep(configs)
    # (b) convexity probes
    maps = ["lr:basic", "lr:n:binary:0.5", "lr:n:inductive:3", "lr:n:karcher:3"]
    maps += [f"lr:weighted:{a:g}" for a in ALPHA_GRID]
    probes = [SuiteConfig("convexity", dim=d, trials=TRIALS, seed=33, map=m)
              for m in maps for d in DIMS]
    tb, bad_b, worst_b = _sweep(probes)
    # (c) commuting closed forms
    worst_c = 0.0
    for i in range(TRIALS):
        _, rng = substream(34, i)
        d = 2 + i % 5
        diags = rng.uniform(0.1, 10.0, size=(3, d))
        C = ginibre(d, d, rng)
        Cp = random_pd(d, 1e3, rng)
        for spec, k in ((MeanSpec("binary"), 2), (MeanSpec("inductive"), 3), (MeanSpec("karcher"), 3)):
            got = lr_n(spec, [np.diag(x) for x in diags[:k]], Cp)
            worst_c = max(worst_c, rel_err(got, lr_n_commuting(diags[:k], Cp)))
        for a in (0.0, *ALPHA_GRID, 1.0):
            got = lr_weighted(a, np.diag(diags[0]), np.diag(diags[1]), C)
            worst_c = max(worst_c, rel_err(got, lr_weighted_commuting(a, diags[0], diags[1], C)))
    ok = not bad_a and not bad_b and worst_c <= 1e-10
    return ok, (f"(a) lr basic {ta} trials, {len(bad_a)} bad, worst {worst_a:.3g}; "
                f"(b) {len(maps)} convexity probes {tb} trials, {len(bad_b)} bad, worst {worst_b:.3g}; "
                f"(c) commuting closed forms max rel err {worst_c:.2e} (<= 1e-10)")


def criterion_5():
    specs = [MeanSpec("binary", alpha=a) for a in ALPHA_GRID]
    specs += [MeanSpec("inductive"), MeanSpec("karcher")]
    worst = {"homogeneity": 0.0, "self-duality": 0.0, "congruence": 0.0,
             "idempotence": 0.0, "commuting": 0.0}
    limits = {"homogeneity": 1e-9, "self-duality": 1e-8, "congruence": 1e-8,
              "idempotence": 1e-10, "commuting": 1e-10}
    for s_idx, spec in enumerate(specs):
        n = 2 if spec.kind == "binary" else 3
        for i in range(TRIALS):
            _, rng = substream(50 + s_idx, i)
            d = 2 + i % 5
            mats = [random_pd(d, 1e3, rng) for _ in range(n)]
            M = geometric_mean(spec, mats)
            for t in (0.5, 3.0):
                e = rel_err(geometric_mean(spec, [t * A for A in mats]), t * M) / t
                worst["homogeneity"] = max(worst["homogeneity"], e)
            dual = inv(geometric_mean(spec, [inv(A) for A in mats]))
            worst["self-duality"] = max(worst["self-duality"], rel_err(dual, M))
            C = random_invertible(d, 3.0, rng)
            cong = geometric_mean(spec, [C.conj().T @ A @ C for A in mats])
            worst["congruence"] = max(worst["congruence"], rel_err(cong, C.conj().T @ M @ C))
            worst["idempotence"] = max(worst["idempotence"],
                                       rel_err(geometric_mean(spec, [mats[0]] * n), mats[0]))
            diags = rng.uniform(0.01, 10.0, size=(n, d))
            if spec.kind == "binary":
                scalar = diags[0] ** spec.alpha * diags[1] ** (1 - spec.alpha)
            else:
                scalar = np.prod(diags, axis=0) ** (1.0 / n)
            got = geometric_mean(spec, [np.diag(x) for x in diags])
            worst["commuting"] = max(worst["commuting"], rel_err(got, np.diag(scalar)))
    ok = all(worst[k] <= limits[k] for k in worst)
    detail = ", ".join(f"{k} {worst[k]:.1e} (<= {limits[k]:g})" for k in worst)
    return ok, f"mean axioms, {len(specs)} means x {TRIALS} trials: {detail}"


def criterion_6():
    kb = lr2 = rt = 0.0
    for i in range(TRIALS):
        _, rng = substream(60, i)
        d = 2 + i % 5
        A, B, C = (random_pd(d, 1e3, rng) for _ in range(3))
        kb = max(kb, rel_err(karcher_mean([A, B]), binary_geometric(0.5, A, B)))
        b = sqrtm(B)
        bi = inv(b)
        display = C @ bi @ sqrtm(b @ inv(A) @ b) @ bi @ C
        for spec in (MeanSpec("binary"), MeanSpec("inductive"), MeanSpec("karcher")):
            lr2 = max(lr2, rel_err(lr_n(spec, [A, B], C), display))
        din, dout, rank = 1 + i % 4, 1 + (i // 4) % 4, 1 + (i // 16) % 8
        phi = random_cp(din, dout, rank, "none", rng)
        rt = max(rt, channel_action_error(phi, kraus_from_choi(choi(phi))))
    ok = kb <= 1e-8 and lr2 <= 1e-8 and rt <= 1e-9
    return ok, (f"Karcher(n=2) vs binary {kb:.1e} (<= 1e-8); lr_n(n=2) vs closed form "
                f"{lr2:.1e} (<= 1e-8); Choi/Kraus roundtrip {rt:.1e} (<= 1e-9)")


def criterion_7():
    worst = {}
    for method in ("lapack", "jacobi"):
        rec = sq = iv = 0.0
        for i in range(1000):
            _, rng = substream(70, i)
            d = 1 + i % 16
            G = ginibre(d, d, rng)
            H = G + G.conj().T
            dec = eigh(H, method=method)
            rec = max(rec, np.linalg.norm(dec.reconstruct() - H) / (1 + np.linalg.norm(H)))
            A = random_pd(d, 1e3, rng)
            decA = eigh(A, method=method)
            S = apply_spectral("sqrt", A, decA)
            sq = max(sq, float(np.max(np.abs(S @ S - A))))
            Ai = apply_spectral("inverse", A, decA)
            iv = max(iv, float(np.max(np.abs(Ai @ A - np.eye(d)))))
        worst[method] = (rec, sq, iv)
    ok = all(r <= 1e-12 and s <= 1e-10 and v <= 1e-10 for r, s, v in worst.values())
    detail = "; ".join(f"{m}: reconstruction {r:.1e}, sqrt^2 {s:.1e}, inverse {v:.1e}"
                       for m, (r, s, v) in worst.items())
    return ok, f"numerical core, 1000 trials dims 1-16, {detail}"


def criterion_8():
    configs = [
        SuiteConfig("jensen-contraction", dim=4, dim_out=3, trials=50, seed=81, map="lift:power:1.5"),
        SuiteConfig("jensen-sum", dim=3, dim_out=4, trials=50, seed=82, n=3),
        SuiteConfig("jensen-cp", dim=4, dim_out=2, trials=50, seed=83),
        SuiteConfig("perspective-filter", dim=4, trials=50, seed=84),
        SuiteConfig("homogeneous-filter", dim=3, trials=50, seed=85),
        SuiteConfig("mean-filter", dim=3, trials=50, seed=86),
        SuiteConfig("lr", dim=4, dim_out=2, trials=50, seed=87),
        SuiteConfig("convexity", dim=3, trials=50, seed=88, map="lr:n:karcher:3"),
    ]

    def text(cfg):
        d = run_suite(cfg).to_json()
        d.pop("wall_time")
        return json.dumps(d, indent=1, sort_keys=True)

    mismatched = []
    for cfg in configs:
        first = text(cfg)
        if first != text(cfg) or first != text(cfg.with_(workers=2)):
            mismatched.append(cfg.suite)
    return not mismatched, (f"{len(configs)} suites run twice and with 2 workers, "
                            f"{len(mismatched)} differing reports {mismatched or ''}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8]


@pytest.mark.slow
@pytest.mark.parametrize("n", range(1, 9))
def test_criterion(n):
    ok, detail = CRITERIA[n - 1]()
    assert _record(n, ok, detail), detail


if __name__ == "__main__":
    results = [_record(n, *crit()) for n, crit in enumerate(CRITERIA, start=1)]
    raise SystemExit(0 if all(results) else 1)
