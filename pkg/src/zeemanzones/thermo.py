"""Zonal partition functions, zeta functions, and the classical zeta relations."""

from __future__ import annotations

import math

import numpy as np

from .params import MagneticParams, HamiltonianVariant, H_Z
from .kernels import (SingularTimeError, check_df_time, sigma_value,
                      zonal_kernel_closed, projection_parts, global_parts,
                      zonal_numeric_scales)
from .quadrature import QuadRule, tree_sum
from .spectrum import zone_count, _compositions


def _variant_shift(variant: HamiltonianVariant | None, params) -> float:
    if variant is None or variant.kind == "H_Z":
        return 0.0
    if variant.kind == "H_Zf":
        return variant.field_constant(params)
    raise ValueError("partition/zeta functions are defined for H_Z or H_Zf")


# ---------------------------------------------------------------------------
# closed form and oracles
# ---------------------------------------------------------------------------

def partition(sigma, a: int, t: float, params: MagneticParams,
              variant: HamiltonianVariant | None = None) -> complex:
    """Z_sigma^{(a)}(t) = binom(a + k/2 - 1, a) prod e^{-k_i lam_i t s / 2}
    / (1 - e^{-2 lam_i t s})^{k_i/2}, times e^{-s t c_f} for H_Zf."""
    if not t > 0:
        raise ValueError("partition function requires t > 0")
    s = sigma_value(sigma)
    if sigma == "df":
        check_df_time(t, params)
    out = complex(zone_count(a, params.k))
    for b in params.blocks:
        e = np.exp(-2 * b.lam * t * s)
        out *= np.exp(-0.5 * b.k * b.lam * t * s) / (1 - e) ** (b.k // 2)
    return out * np.exp(-s * t * _variant_shift(variant, params))


def _diag_scales(sigma, t: float, params: MagneticParams) -> tuple[float, ...]:
    """Per-axis decay of the zonal diagonal, Re(lam (1 - e^{-2 lam t s}))."""
    s = sigma_value(sigma)
    out = []
    for b in params.blocks:
        g = (b.lam * (1 - np.exp(-2 * b.lam * t * s))).real
        if not g > 0:
            raise SingularTimeError(f"zonal diagonal has no Gaussian decay at t={t}")
        out.extend([float(g)] * b.k)
    return tuple(out)


def _plane_trace(sigma, a: int, t: float, lam: float, quad_degree: int,
                 part: str = "value") -> complex:
    """Diagonal trace of the zone-a kernel on a single coordinate plane.

    part selects "value", "dominant" or "long_term" of the closed kernel
    for a <= 1.  For a >= 2 the convolution int P^{(a)}(X,U) d(t,U,X) dU
    is evaluated on the fly (iterated, not joint, quadrature: the joint
    integrand is not absolutely convergent) with the inner grid recentred
    at each outer node, where the Gaussian mass sits.
    """
    pp = MagneticParams.make([(lam, 2)])
    outer = QuadRule(quad_degree, _diag_scales(sigma, t, pp))
    Xo, wo = outer.nodes_weights()
    if a <= 1:
        kv = zonal_kernel_closed(sigma, a, t, Xo, Xo, pp)
        return tree_sum(wo * getattr(kv, part))
    if part != "value":
        raise ValueError("dominant/long_term plane traces are a<=1 only")
    inner = QuadRule(quad_degree, zonal_numeric_scales(sigma, t, pp))
    Vi, wi = inner.nodes_weights()
    # In V = U - X the integrand is e^{-A|V|^2 + 2 i lam <X, J V>} times a
    # polynomial; shift the contour to the stationary point (the kernels
    # are analytic in the coordinates) so accuracy is uniform in |X|.
    s = sigma_value(sigma)
    if sigma == "wk":
        A = lam * (1 + 1 / np.tanh(lam * t)) / 2
    else:
        A = lam * (1 - 1j / np.tan(lam * t)) / 2
    chunks = []
    for lo in range(0, Xo.shape[0], 256):
        Xc = Xo[lo:lo + 256]
        shift = (1j * lam / A) * np.stack([Xc[:, 1], -Xc[:, 0]], axis=-1)
        Xc = Xc[:, None, :]
        U = Xc + shift[:, None, :] + Vi[None, :, :]
        p_pref, p_expo = projection_parts(a, Xc, U, pp)
        g_pref, g_expo = global_parts(sigma, t, U, Xc, pp)
        vals = p_pref * g_pref * np.exp(p_expo + g_expo)
        chunks.append(tree_sum((vals * wi[None, :]).T))
    diag = np.concatenate(chunks)
    return tree_sum(wo * diag)


def partition_by_trace(sigma, a: int, t: float, params: MagneticParams,
                       quad_degree: int = 40,
                       variant: HamiltonianVariant | None = None) -> complex:
    """Quadrature of the diagonal, the trace-side oracle for `partition`.

    The gross kernel expands over irreducible tuples and both the
    projection and flow kernels are products over coordinate planes, so
    the diagonal integral over R^k factorizes into plane traces; each is
    a 2D quadrature at `quad_degree` nodes per axis (DF diagonals
    oscillate, so generous degrees stay cheap here).
    """
    s = sigma_value(sigma)
    if sigma == "df":
        check_df_time(t, params)
    plam = params.plane_lambdas()
    cache: dict[tuple[float, int], complex] = {}
    total = 0j
    for tup in _compositions(a, params.n_planes):
        prod = 1.0 + 0j
        for lam, aj in zip(plam, tup):
            key = (float(lam), aj)
            if key not in cache:
                cache[key] = _plane_trace(sigma, aj, t, lam, quad_degree)
            prod *= cache[key]
        total += prod
    return total * np.exp(-s * t * _variant_shift(variant, params))


def dominant_trace(sigma, a: int, t: float, params: MagneticParams,
                   quad_degree: int = 40) -> complex:
    """Diagonal quadrature of the dominant kernel alone (equals `partition`)."""
    z0 = [_plane_trace(sigma, 0, t, lam, quad_degree)
          for lam in params.plane_lambdas()]
    return zone_count(a, params.k) * complex(np.prod(z0))


def longterm_trace(sigma, t: float, params: MagneticParams,
                   quad_degree: int = 40) -> complex:
    """Diagonal quadrature of the a=1 long-term kernel; zero trace class.

    The gross long-term part is sum_j lt_j prod_{i!=j} zonal0_i over
    planes, so the trace is assembled from 2D plane integrals.
    """
    plam = params.plane_lambdas()
    z0 = [_plane_trace(sigma, 0, t, lam, quad_degree) for lam in plam]
    lt = [_plane_trace(sigma, 1, t, lam, quad_degree, part="long_term")
          for lam in plam]
    total = 0j
    for j in range(len(plam)):
        prod = lt[j]
        for i in range(len(plam)):
            if i != j:
                prod *= z0[i]
        total += prod
    return total


def _mult_tail(q: int, L: int, r: complex) -> complex:
    """sum_{p >= L} binom(p+q-1, q-1) r^p in closed form.

    Shift p = L + m; the binomial is a degree q-1 polynomial in m which is
    re-expanded in the basis binom(m+j, j), whose geometric sums are
    (1-r)^{-(j+1)}.
    """
    # ascending coefficients in m of prod_{i=1..q-1} (L + m + i) / (q-1)!
    poly = np.array([1.0])
    for i in range(1, q):
        poly = np.convolve(poly, [L + i, 1.0]) / i
    acc = 0j
    coeff = poly.astype(complex).copy()
    for j in range(q - 1, -1, -1):
        aj = coeff[j] * math.factorial(j)
        basis = np.array([1.0])
        for i in range(1, j + 1):
            basis = np.convolve(basis, [i, 1.0]) / i
        coeff[:j + 1] -= aj * basis
        acc += aj * (1 - r) ** (-(j + 1))
    return r ** L * acc


def partition_spectral(sigma, a: int, t: float, params: MagneticParams,
                       variant: HamiltonianVariant | None = None,
                       levels: int = 200) -> complex:
    """Eigenvalue sum sum mult e^{-s t mu} over gross zone a.

    Direct terms up to the level cap plus the closed geometric tail (the
    DF sum is only Abel-convergent; the tail term is its analytic value).
    The upsilon-composition binomials sum to zone_count(a, k)
    independently of the level, so the sum factorizes over blocks.
    """
    s = sigma_value(sigma)
    total = complex(zone_count(a, params.k))
    for b in params.blocks:
        q = b.k // 2
        p = np.arange(levels)
        mult = np.array([math.comb(int(pi) + q - 1, q - 1) for pi in p], dtype=float)
        r = complex(np.exp(-2 * s * t * b.lam))
        head = tree_sum(mult * r ** p)
        total *= (head + _mult_tail(q, levels, r)) * np.exp(-s * t * b.lam * q)
    return total * np.exp(-s * t * _variant_shift(variant, params))


# ---------------------------------------------------------------------------
# zeta functions
# ---------------------------------------------------------------------------

_BERNOULLI = [1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730]


def _em_sum_inverse_powers(s: complex, base: float, step: float, start: int,
                           direct: int = 40) -> complex:
    """sum_{n >= start} (base + step*n)^{-s} by direct terms + Euler-Maclaurin."""
    N = start + direct
    n = np.arange(start, N)
    acc = np.sum((base + step * n) ** (-s))
    w = base + step * N
    acc += w ** (1 - s) / (step * (s - 1)) + 0.5 * w ** (-s)
    # derivative terms: g^{(2j-1)}(N) for g(x) = (base + step x)^{-s}
    fac = -s * step * w ** (-s - 1)  # g'(N)
    order = 1
    for j, B in enumerate(_BERNOULLI, start=1):
        acc -= B / math.factorial(2 * j) * fac
        for _ in range(2):
            fac *= -(s + order) * step / w
            order += 1
    return acc


def riemann_zeta(s: complex) -> complex:
    """zeta_R(s) by direct series plus Euler-Maclaurin tail, Re(s) > 1."""
    s = complex(s)
    if not s.real > 1:
        raise ValueError("riemann_zeta implemented for Re(s) > 1 only")
    return _em_sum_inverse_powers(s, 0.0, 1.0, start=1)


def hurwitz_zeta(s: complex, x: float) -> complex:
    """zeta_Hu(s, x) = sum_{n >= 0} (n + x)^{-s}, Re(s) > 1, x > 0."""
    s = complex(s)
    if not s.real > 1:
        raise ValueError("hurwitz_zeta implemented for Re(s) > 1 only")
    if not x > 0:
        raise ValueError("hurwitz_zeta requires x > 0")
    return _em_sum_inverse_powers(s, x, 1.0, start=0)


def zeta_zonal(a: int, s: complex, params: MagneticParams,
               variant: HamiltonianVariant | None = None,
               truncation: int = 100_000, tail: bool = True) -> complex:
    """Zonal zeta sum mult(p) mu_p^{-s} on gross zone a, Re(s) > 1.

    Single-block parameters only (the acceptance scope); the per-level
    multiplicity is binom(p+q-1, q-1) binom(a+q-1, q-1) with q = k/2 and
    mu_p = lam (2p + q) + c_f.  With tail=True the remainder past the
    truncation is summed by Euler-Maclaurin after expanding the binomial
    multiplicity in powers of mu_p (requires Re(s) > q).
    """
    s = complex(s)
    if not s.real > 1:
        raise ValueError("zeta_zonal implemented for Re(s) > 1 only "
                         "(no analytic continuation)")
    if len(params.blocks) != 1:
        raise ValueError("zeta_zonal supports single-block parameters")
    b = params.blocks[0]
    q = b.k // 2
    c = _variant_shift(variant, params)
    alpha, beta = b.lam * q + c, 2 * b.lam
    zone_mult = math.comb(a + q - 1, q - 1)

    p = np.arange(truncation)
    mult = np.array([math.comb(int(pi) + q - 1, q - 1) for pi in p], dtype=float)
    acc = complex(np.sum(mult * (alpha + beta * p) ** (-s)))
    if tail:
        if not s.real > q:
            raise ValueError("Euler-Maclaurin tail requires Re(s) > k/2")
        # binom(p+q-1, q-1) as a polynomial in w = alpha + beta p
        poly_p = np.array([1.0])  # coefficients in p, ascending
        for i in range(1, q):
            poly_p = np.convolve(poly_p, [i, 1.0]) / i
        coeff_w = np.zeros(len(poly_p))
        for d, cd in enumerate(poly_p):
            for j in range(d + 1):
                coeff_w[j] += cd * math.comb(d, j) * (-alpha) ** (d - j) / beta ** d
        for j, cj in enumerate(coeff_w):
            if cj:
                acc += cj * _em_sum_inverse_powers(s - j, alpha, beta,
                                                   start=truncation)
    return zone_mult * acc


def mehler_comparison_bound(a: int, t: float, params: MagneticParams) -> float:
    """Upper envelope e^{(4a + k) lam t} / (B (cosh 2Bt - 1))^{k/2}, B = lam.

    With B = lam the envelope stays above the zone partition function for
    all t > 0: as t -> infinity it flattens to 1/B^{k/2} while the zone
    trace decays, and for t -> 0 it blows up one order faster.
    """
    b = params.blocks[0]
    if len(params.blocks) != 1:
        raise ValueError("comparison bound implemented for single-block parameters")
    B = b.lam
    return float(np.exp((4 * a + b.k) * b.lam * t) /
                 (B * (np.cosh(2 * B * t) - 1)) ** (b.k / 2))
