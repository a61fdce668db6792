"""Randomized invariants driven by hypothesis-chosen seeds and sizes."""
import numpy as np
from hypothesis import given, settings, strategies as st

from opfilter.cpmaps import choi, kraus_from_choi, channel_action_error, random_cp
from opfilter.hermitian import (
    apply_spectral,
    congruence,
    eigh,
    eigvalsh,
    ginibre,
    inv,
    loewner_geq,
    random_pd,
)
from opfilter.lieb_ruskai import lr_n
from opfilter.means import MeanSpec, geometric_mean
from opfilter.perspectives import perspective
from opfilter.regular_maps import get_map
from conftest import rel_err

seeds = st.integers(min_value=0, max_value=2**63 - 1)
dims = st.integers(min_value=1, max_value=6)
SETTINGS = settings(max_examples=40, deadline=None)


def rng_of(seed):
    return np.random.default_rng(seed)


@SETTINGS
@given(seeds, st.integers(min_value=1, max_value=16), st.sampled_from(["lapack", "jacobi"]))
def test_eigh_reconstructs(seed, d, method):
    G = ginibre(d, d, rng_of(seed))
    H = G + G.conj().T
    dec = eigh(H, method=method)
    assert np.linalg.norm(dec.reconstruct() - H) <= 1e-12 * (1 + np.linalg.norm(H))


@SETTINGS
@given(seeds, dims)
def test_log_exp_and_inverse(seed, d):
    A = random_pd(d, 1e3, rng_of(seed))
    assert rel_err(apply_spectral("exp", apply_spectral("log", A)), A) <= 1e-10
    assert np.max(np.abs(apply_spectral("inverse", A) @ A - np.eye(d))) <= 1e-10


@SETTINGS
@given(seeds, dims, dims)
def test_congruence_keeps_psd(seed, d, k):
    rng = rng_of(seed)
    G = ginibre(d, max(1, d - 1), rng)
    X = G @ G.conj().T
    assert eigvalsh(congruence(X, ginibre(d, k, rng)))[0] >= -1e-12 * max(1.0, np.linalg.norm(X, 2))


@SETTINGS
@given(seeds, dims)
def test_loewner_reflexive_antisymmetric(seed, d):
    rng = rng_of(seed)
    A, B = random_pd(d, 1e2, rng), random_pd(d, 1e2, rng)
    assert loewner_geq(A, A).holds
    if loewner_geq(A, B).holds and loewner_geq(B, A).holds:
        assert np.max(np.abs(A - B)) <= 1e-8


@SETTINGS
@given(seeds, st.integers(1, 4), st.integers(1, 4), st.integers(1, 8))
def test_choi_roundtrip(seed, din, dout, rank):
    phi = random_cp(din, dout, rank, "none", rng_of(seed))
    assert choi(phi).min_eigenvalue() >= -1e-10
    assert channel_action_error(phi, kraus_from_choi(choi(phi))) <= 1e-9


@SETTINGS
@given(seeds, st.integers(1, 5), st.integers(1, 5), st.integers(1, 4))
def test_cp_linear(seed, din, dout, rank):
    rng = rng_of(seed)
    phi = random_cp(din, dout, rank, "none", rng)
    X, Y = ginibre(din, din, rng), ginibre(din, din, rng)
    a = complex(*rng.standard_normal(2))
    assert np.max(np.abs(phi(a * X + Y) - a * phi(X) - phi(Y))) <= 1e-11 * (1 + abs(a)) * 10


@SETTINGS
@given(seeds, st.integers(2, 5), st.sampled_from(["binary", "inductive", "karcher"]),
       st.floats(0.05, 0.95))
def test_mean_concave(seed, d, kind, alpha):
    rng = rng_of(seed)
    spec = MeanSpec(kind, alpha=alpha)
    n = 2 if kind == "binary" else 3
    X = [random_pd(d, 1e3, rng) for _ in range(n)]
    Y = [random_pd(d, 1e3, rng) for _ in range(n)]
    lam = float(rng.uniform())
    chord = lam * geometric_mean(spec, X) + (1 - lam) * geometric_mean(spec, Y)
    mid = geometric_mean(spec, [lam * x + (1 - lam) * y for x, y in zip(X, Y)])
    assert loewner_geq(mid, chord, tol_abs=1e-10 + spec.widened_tol(d)).holds


@SETTINGS
@given(seeds, st.integers(1, 5), st.floats(0.1, 10.0))
def test_perspective_homogeneous(seed, d, t):
    rng = rng_of(seed)
    F = get_map("sum:power:1.5+neg_power:0.25")
    mats = [random_pd(d, 1e2, rng) for _ in range(3)]
    lhs = perspective(F, [t * M for M in mats[:2]], t * mats[2])
    assert rel_err(lhs, t * perspective(F, mats[:2], mats[2])) <= 1e-9 * max(1.0, t)


@SETTINGS
@given(seeds, st.integers(1, 4), st.floats(0.1, 10.0), st.sampled_from(["inductive", "karcher"]))
def test_lr_n_homogeneous(seed, d, t, kind):
    rng = rng_of(seed)
    spec = MeanSpec(kind)
    A = [random_pd(d, 1e2, rng) for _ in range(3)]
    C = random_pd(d, 1e2, rng)
    lhs = lr_n(spec, [t * M for M in A], t * C)
    assert rel_err(lhs, t * lr_n(spec, A, C)) <= 1e-9 * max(1.0, t)


@SETTINGS
@given(seeds, st.integers(1, 5))
def test_lr_basic_inverse_identity(seed, d):
    rng = rng_of(seed)
    A = random_pd(d, 1e3, rng)
    K = ginibre(d, d, rng)
    out = get_map("lr:basic")(A, K)
    assert rel_err(out, K.conj().T @ inv(A) @ K) <= 1e-9
