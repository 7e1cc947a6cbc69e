"""Projection, heat and Schrodinger kernels: identities and residuals."""

import numpy as np
import pytest

from zeemanzones.kernels import (SingularTimeError, check_df_time,
                                 df_singular_times, dominant_kernel,
                                 global_kernel, global_parts,
                                 irreducible_projection_kernel, lt1_printed,
                                 mehler_kernel, pde_residual,
                                 projection_kernel, projection_parts,
                                 weighted_dist_sq, zonal0,
                                 zonal_kernel_closed, zonal_kernel_numeric,
                                 zonal_numeric_scales)
from zeemanzones.params import MagneticParams
from zeemanzones.quadrature import QuadRule, tree_sum


def _rule(params, deg=40):
    return QuadRule(deg, params.axis_lambdas())


# ---------------------------------------------------------------------------
# projection kernels
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("a", [0, 1, 2])
def test_projection_idempotent(p2, xy2, a):
    X, Y = xy2
    U, w = _rule(p2).nodes_weights()
    conv = tree_sum(w * projection_kernel(a, X[None, :], U, p2)
                    * projection_kernel(a, U, Y[None, :], p2))
    assert abs(conv - projection_kernel(a, X, Y, p2)) < 1e-10


def test_projection_orthogonal_zones(p2, xy2):
    X, Y = xy2
    U, w = _rule(p2).nodes_weights()
    conv = tree_sum(w * projection_kernel(0, X[None, :], U, p2)
                    * projection_kernel(1, U, Y[None, :], p2))
    assert abs(conv) < 1e-10


def test_projection_reproduces_holomorphic(p2):
    # delta^(0) reproduces z^m e^{-lam|z|^2/2} pointwise
    U, w = _rule(p2).nodes_weights()
    zU = U[:, 0] + 1j * U[:, 1]
    X = np.array([0.4, 0.1])
    zX = X[0] + 1j * X[1]
    for m in range(4):
        f = zU ** m * np.exp(-0.5 * (U ** 2).sum(axis=1))
        got = tree_sum(w * projection_kernel(0, X[None, :], U, p2) * f)
        ref = zX ** m * np.exp(-0.5 * (X ** 2).sum())
        assert abs(got - ref) < 1e-10


def test_irreducible_projections_sum_to_gross(p4, xy4):
    X, Y = xy4
    a = 2
    total = sum(irreducible_projection_kernel(t, X, Y, p4)
                for t in ((2, 0), (1, 1), (0, 2)))
    assert abs(total - projection_kernel(a, X, Y, p4)) < 1e-14


def test_projection_parts_consistent(p2, xy2):
    X, Y = xy2
    pref, expo = projection_parts(1, X, Y, p2)
    assert pref * np.exp(expo) == pytest.approx(
        projection_kernel(1, X, Y, p2), abs=1e-15)


def test_weighted_dist_sq_symmetry(p4, xy4):
    X, Y = xy4
    assert weighted_dist_sq(X, Y, p4) == pytest.approx(
        weighted_dist_sq(Y, X, p4))
    assert weighted_dist_sq(X, X, p4) == pytest.approx(0.0)


# ---------------------------------------------------------------------------
# global kernels
# ---------------------------------------------------------------------------

def test_mehler_kernel_chapman_kolmogorov():
    # the oscillator comparison kernel is itself a semigroup
    X = np.array([0.3, -0.2])
    Y = np.array([0.1, 0.4])
    s, t, B = 0.4, 0.3, 1.0
    U, w = QuadRule(40, (1.0, 1.0)).nodes_weights()
    conv = tree_sum(w * mehler_kernel(s, X[None, :], U, B, 2)
                    * mehler_kernel(t, U, Y[None, :], B, 2))
    assert abs(conv - mehler_kernel(s + t, X, Y, B, 2)) < 1e-9


def test_global_parts_consistency(p4, xy4):
    X, Y = xy4
    for sigma in ("wk", "df"):
        pref, expo = global_parts(sigma, 0.6, X, Y, p4)
        assert pref * np.exp(expo) == pytest.approx(
            global_kernel(sigma, 0.6, X, Y, p4), abs=1e-15)


def test_global_wk_chapman_kolmogorov(p2, xy2):
    X, Y = xy2
    s, t = 0.4, 0.3
    scales = tuple(l * (1 / np.tanh(l * s) + 1 / np.tanh(l * t)) / 2
                   for l in p2.axis_lambdas())
    U, w = QuadRule(40, scales).nodes_weights()
    conv = tree_sum(w * global_kernel("wk", s, X[None, :], U, p2)
                    * global_kernel("wk", t, U, Y[None, :], p2))
    assert abs(conv - global_kernel("wk", s + t, X, Y, p2)) < 1e-9


def test_df_singular_times_and_guard(p2b):
    ts = df_singular_times(p2b, 4.0)
    assert ts == pytest.approx([np.pi / 2, np.pi])
    with pytest.raises(SingularTimeError):
        check_df_time(np.pi / 2, p2b)
    with pytest.raises(SingularTimeError):
        global_kernel("df", np.pi / 2, np.zeros(2), np.zeros(2), p2b)
    check_df_time(0.7, p2b)  # regular time passes


@pytest.mark.parametrize("sigma", ["wk", "df"])
def test_pde_residual_small(p2, xy2, sigma):
    X, Y = xy2
    assert pde_residual(sigma, 0.6, X, Y, p2) < 1e-7


# ---------------------------------------------------------------------------
# zonal closed forms
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("sigma", ["wk", "df"])
@pytest.mark.parametrize("a", [0, 1])
def test_zonal_closed_vs_numeric(p2, xy2, sigma, a):
    X, Y = xy2
    t = 1.0
    ref = zonal_kernel_closed(sigma, a, t, X, Y, p2).value
    num = zonal_kernel_numeric(sigma, a, t, X, Y, p2, quad_degree=60)
    assert abs(num - ref) < 1e-9


def test_zonal_split_sums(p2, xy2):
    X, Y = xy2
    for sigma in ("wk", "df"):
        kv = zonal_kernel_closed(sigma, 1, 0.5, X, Y, p2)
        assert kv.value == pytest.approx(kv.dominant + kv.long_term,
                                         abs=1e-15)
        assert kv.dominant == pytest.approx(
            dominant_kernel(sigma, 1, 0.5, X, Y, p2), abs=1e-15)


def test_zonal_long_term_vanishes_at_zero(p2, xy2):
    X, Y = xy2
    for sigma in ("wk", "df"):
        assert zonal_kernel_closed(sigma, 1, 0.0, X, Y, p2).long_term == 0j


def test_lt1_printed_matches_general(p2, xy2):
    X, Y = xy2
    for sigma in ("wk", "df"):
        kv = zonal_kernel_closed(sigma, 1, 0.4, X, Y, p2)
        ref = lt1_printed(sigma, 0.4, X, Y) * zonal0(sigma, 0.4, X, Y, p2)
        assert abs(kv.long_term - ref) < 1e-14


def test_zonal_entire_at_df_caustic(p2):
    # unlike the global df kernel, the zonal closed form is finite at t = pi
    X = np.array([0.3, -0.2])
    v = zonal_kernel_closed("df", 0, np.pi, X, X, p2).value
    assert np.isfinite(v)


@pytest.mark.parametrize("sigma", ["wk", "df"])
def test_zonal_chapman_kolmogorov(p2, xy2, sigma):
    X, Y = xy2
    s, t = 0.5, 0.5
    U, w = _rule(p2).nodes_weights()
    for a in (0, 1):
        conv = tree_sum(
            w * zonal_kernel_closed(sigma, a, s, X[None, :], U, p2).value
            * zonal_kernel_closed(sigma, a, t, U, Y[None, :], p2).value)
        ref = zonal_kernel_closed(sigma, a, s + t, X, Y, p2).value
        assert abs(conv - ref) < 1e-9


@pytest.mark.parametrize("sigma", ["wk", "df"])
def test_delta_limit_monotone(p2, sigma):
    rng = np.random.default_rng(11)
    pairs = [(rng.normal(scale=0.4, size=2), rng.normal(scale=0.4, size=2))
             for _ in range(10)]
    for a in (0, 1):
        sups = []
        for t in (1e-1, 1e-2, 1e-3):
            sups.append(max(
                abs(zonal_kernel_closed(sigma, a, t, X, Y, p2).value
                    - projection_kernel(a, X, Y, p2)) for X, Y in pairs))
        assert sups[0] > sups[1] > sups[2]


def test_zonal_numeric_scales_positive(p2):
    for sigma in ("wk", "df"):
        assert all(s > 0 for s in zonal_numeric_scales(sigma, 0.5, p2))


def test_zonal_multiblock_consistency(p4, xy4):
    X, Y = xy4
    # gross zone 1 of a two-block geometry splits over the blocks
    direct = zonal_kernel_closed("wk", 1, 0.6, X, Y, p4).value
    num = zonal_kernel_numeric("wk", 1, 0.6, X, Y, p4, quad_degree=32)
    assert abs(num - direct) < 1e-9
