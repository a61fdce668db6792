import numpy as np
import pytest

from opfilter.errors import ConfigError, ShapeError
from opfilter.hermitian import eigvalsh, random_pd
from opfilter.regular_maps import (
    CATALOG_NAMES,
    catalog,
    convexity_slack,
    get_map,
    lift,
    probe_curvature,
    sample_operands,
    sum_of_lifts,
)
from conftest import rel_err


def test_square_lift_on_diagonal():
    np.testing.assert_allclose(get_map("lift:square")(np.diag([1.0, 2.0])), np.diag([1.0, 4.0]))


def test_catalog_flags():
    F = get_map("lift:inverse")
    assert F.curvature == "convex" and F.domain == "PD"
    G = get_map("neg:binary:0.5")
    assert G.curvature == "convex" and G.homogeneous and G.domain == "PD"
    for name in ("lift:square", "lift:power:1.5", "lift:neg_power:0.25"):
        F = get_map(name)
        assert F.domain == "PSD" and F.zero_value_nonpositive
    assert get_map("lr:basic").arbitrary_last
    assert get_map("lr:n:karcher:3").tol_per_dim > 0


def test_catalog_contents():
    names = [F.name for F in catalog()]
    assert names == list(CATALOG_NAMES)
    assert len(set(names)) == len(names)
    assert all(F.curvature == "convex" for F in catalog())


def test_lift_parameter_ranges():
    with pytest.raises(ConfigError):
        lift("power:2.5")
    with pytest.raises(ConfigError):
        lift("neg_power:1")
    with pytest.raises(ConfigError):
        get_map("nonsense:1")


def test_sum_of_lifts_flags_and_value():
    F = sum_of_lifts(["square", "inverse"])
    assert F.arity == 2 and F.domain == "PD" and not F.zero_value_nonpositive
    A, B = np.diag([2.0, 3.0]), np.diag([4.0, 5.0])
    np.testing.assert_allclose(F(A, B), np.diag([4.25, 9.2]))


def test_arity_and_shape_checks():
    F = get_map("sum:square+neg_power:0.5")
    with pytest.raises(ShapeError):
        F(np.eye(2))
    with pytest.raises(ShapeError):
        F(np.eye(2), np.eye(3))


def test_scalar_convexity_examples():
    sq = get_map("lift:square")
    v = convexity_slack(sq, [np.array([[1.0]])], [np.array([[3.0]])], 0.5)
    assert v.min_slack == pytest.approx(5.0 - 4.0)
    iv = get_map("lift:inverse")
    v = convexity_slack(iv, [np.array([[1.0]])], [np.array([[3.0]])], 0.5)
    assert v.min_slack == pytest.approx(2.0 / 3.0 - 0.5)


def test_mean_probe_on_commuting_diagonals_is_am_gm_gap():
    # the concave mean has chord below graph; the slack is the per-entry gap
    G = get_map("mean:binary:0.5")
    X = [np.diag([1.0, 4.0]), np.diag([9.0, 4.0])]
    Y = [np.diag([4.0, 1.0]), np.diag([1.0, 16.0])]
    lam = 0.5
    chord = lam * np.sqrt([9.0, 16.0]) + (1 - lam) * np.sqrt([4.0, 16.0])
    mid = np.sqrt(np.array([2.5, 2.5]) * np.array([5.0, 10.0]))
    v = convexity_slack(G, X, Y, lam)
    assert v.min_slack == pytest.approx(np.min(mid - chord), abs=1e-12)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_probe_curvature_catalog(name):
    F = get_map(name)
    summary = probe_curvature(F, 3, 40, np.random.default_rng(17))
    assert summary.holds, (name, summary.worst_slack)


def test_probe_rejects_zero_trials(rng):
    with pytest.raises(ValueError):
        probe_curvature(get_map("lift:square"), 2, 0, rng)


def test_nonconvex_lift_fails_probe():
    # t^3 is not operator convex; a wrongly flagged descriptor gets caught
    from opfilter.hermitian import apply_spectral
    from opfilter.regular_maps import OperatorMapDescriptor

    cube = OperatorMapDescriptor("cube", 1, lambda A: apply_spectral(("power", 3.0), A),
                                 domain="PSD")
    summary = probe_curvature(cube, 3, 200, np.random.default_rng(0), cond_cap=1e2)
    assert not summary.holds


@pytest.mark.parametrize("name", [n for n in CATALOG_NAMES if get_map(n).homogeneous])
def test_homogeneous_flag(name, rng):
    F = get_map(name)
    mats = sample_operands(F, 3, rng)
    base = F(*mats)
    for t in (0.5, 2.0, 7.3):
        assert rel_err(F(*[t * M for M in mats]), t * base) <= 1e-10 * max(1.0, t)


@pytest.mark.parametrize("name", [n for n in CATALOG_NAMES if get_map(n).zero_value_nonpositive])
def test_zero_value_flag(name):
    F = get_map(name)
    Z = np.zeros((3, 3))
    assert eigvalsh(F(*[Z] * F.arity))[-1] <= 1e-12


def test_unitary_covariance(rng):
    from opfilter.hermitian import random_unitary

    U = random_unitary(3, rng)
    for name in ("lift:power:1.5", "lift:xlogx", "neg:karcher:3", "sum:inverse+xlogx"):
        F = get_map(name)
        mats = [random_pd(3, 1e2, rng) for _ in range(F.arity)]
        lhs = F(*[U.conj().T @ M @ U for M in mats])
        rhs = U.conj().T @ F(*mats) @ U
        assert rel_err(lhs, rhs) <= 1e-9, name
