"""Partition functions, trace quadrature, zeta values."""

import math

import numpy as np
import mpmath as mp
import pytest

from zeemanzones.params import H_Z, HamiltonianVariant, MagneticParams
from zeemanzones.thermo import (dominant_trace, hurwitz_zeta, longterm_trace,
                                mehler_comparison_bound, partition,
                                partition_by_trace, partition_spectral,
                                riemann_zeta, zeta_zonal, _mult_tail)


# ---------------------------------------------------------------------------
# closed-form partition functions
# ---------------------------------------------------------------------------

def test_partition_k2_golden(p2):
    # [DERIVED] Z^(0)(t) = e^{-t} / (1 - e^{-2t}) for k=2, lam=1, H_Z
    for t in (0.5, 1.0, 2.0):
        ref = np.exp(-t) / (1 - np.exp(-2 * t))
        assert partition("wk", 0, t, p2) == pytest.approx(ref, abs=1e-15)


def test_partition_zone_independent_of_a_for_k2(p2):
    # k=2 zones are simple: every zone has the same partition function
    assert partition("wk", 0, 0.7, p2) == pytest.approx(
        partition("wk", 2, 0.7, p2))


def test_partition_df_unit_modulus_ratio(p2):
    # df partition is the analytic continuation t -> it of the wk one
    t = 0.8
    zdf = partition("df", 0, t, p2)
    ref = np.exp(-1j * t) / (1 - np.exp(-2j * t))
    assert zdf == pytest.approx(ref, abs=1e-14)


def test_partition_blocks_multiply(p4):
    z = partition("wk", 0, 0.9, p4)
    z1 = partition("wk", 0, 0.9, MagneticParams.make([(1.0, 2)]))
    z2 = partition("wk", 0, 0.9, MagneticParams.make([(2.0, 2)]))
    assert z == pytest.approx(z1 * z2, abs=1e-15)


def test_partition_zone_count_prefactor():
    p4s = MagneticParams.make([(1.0, 4)])
    # gross zone 1 of k=4 carries 2 irreducible zones
    assert partition("wk", 1, 0.7, p4s) == pytest.approx(
        2 * partition("wk", 0, 0.7, p4s))


# ---------------------------------------------------------------------------
# diagonal trace quadrature
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("a", [0, 1, 2])
def test_trace_matches_closed_wk(p2, a):
    for t in (0.5, 1.0):
        assert abs(partition_by_trace("wk", a, t, p2)
                   - partition("wk", a, t, p2)) < 1e-9


def test_trace_matches_closed_df(p2):
    for a in (0, 1):
        got = partition_by_trace("df", a, 0.5, p2, quad_degree=120)
        assert abs(got - partition("df", a, 0.5, p2)) < 1e-9


def test_trace_multiblock(p4):
    got = partition_by_trace("wk", 1, 0.8, p4)
    assert abs(got - partition("wk", 1, 0.8, p4)) < 1e-9


def test_dominant_trace_equals_partition(p2):
    # the long-term part has zero trace, so the dominant part carries it all
    for a in (0, 1, 2):
        assert abs(dominant_trace("wk", a, 0.6, p2)
                   - partition("wk", a, 0.6, p2)) < 1e-9


def test_longterm_trace_vanishes(p2, p4):
    for params in (p2, p4):
        for sigma in ("wk", "df"):
            deg = 120 if sigma == "df" else 40
            assert abs(longterm_trace(sigma, 0.6, params,
                                      quad_degree=deg)) < 1e-8


# ---------------------------------------------------------------------------
# spectral sums with analytic tails
# ---------------------------------------------------------------------------

def test_mult_tail_closed_form():
    # sum_{p >= L} binom(p + q - 1, q - 1) r^p against brute force
    r = 0.9
    for q in (1, 2, 3):
        brute = sum(float(math.comb(p + q - 1, q - 1)) * r ** p
                    for p in range(30, 4000))
        assert abs(_mult_tail(q, 30, r) - brute) < 1e-10


@pytest.mark.parametrize("sigma", ["wk", "df"])
@pytest.mark.parametrize("a", [0, 1, 2])
def test_spectral_sum_matches_closed(p2, sigma, a):
    for t in (0.5, 1.0):
        got = partition_spectral(sigma, a, t, p2)
        assert abs(got - partition(sigma, a, t, p2)) < 1e-10


def test_spectral_sum_k4():
    p4s = MagneticParams.make([(1.0, 4)])
    got = partition_spectral("wk", 1, 0.5, p4s)
    assert abs(got - partition("wk", 1, 0.5, p4s)) < 1e-10


# ---------------------------------------------------------------------------
# zeta functions
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("s", [2.0, 2.5, 3.0, 4.0])
def test_riemann_zeta_vs_mpmath(s):
    assert abs(riemann_zeta(s) - complex(mp.zeta(s))) < 1e-12


@pytest.mark.parametrize("s,x", [(2.0, 0.5), (3.0, 1.5), (2.5, 0.25)])
def test_hurwitz_zeta_vs_mpmath(s, x):
    assert abs(hurwitz_zeta(s, x) - complex(mp.zeta(s, x))) < 1e-12


def test_hurwitz_requires_convergent_region():
    with pytest.raises(ValueError):
        hurwitz_zeta(0.5, 1.0)


@pytest.mark.parametrize("s", [2.0, 2.5, 3.0, 4.0])
def test_zonal_zeta_riemann_relation(p2, s):
    # [PAPER] zeta_zonal(s) = (1 - 2^{-s}) zeta_R(s) for k=2, lam=1, H_Z
    zz = zeta_zonal(0, s, p2, variant=H_Z)
    ref = (1 - 2.0 ** (-s)) * riemann_zeta(s)
    assert abs(zz - ref) < 1e-10


def test_zonal_zeta_direct_sum(p2):
    # mu_p = 2p + 1 ladder: direct high-precision sum as oracle
    s = 3.0
    ref = complex(mp.nsum(lambda p: (2 * p + 1) ** (-s), [0, mp.inf]))
    assert abs(zeta_zonal(0, s, p2, variant=H_Z) - ref) < 1e-10


def test_mehler_comparison_bound_envelopes(p2, p2b):
    for params in (p2, p2b):
        for a in (0, 1):
            for t in (0.5, 1.0, 2.0):
                z = partition("wk", a, t, params).real
                assert 0.0 < z < mehler_comparison_bound(a, t, params)
