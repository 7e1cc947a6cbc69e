"""Closed-form projection, global, zonal, and Mehler kernels.

Flat gauge throughout: every kernel carries its Gaussian factor
internally and every convolution is a plain Lebesgue integral.

Flows are labelled by sigma: 'wk' (heat, sigma = 1) and 'df'
(Schrodinger, sigma = i).  All evaluators broadcast over leading axes of
X and Y; the last axis has length k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import MagneticParams, J_apply
from .quadrature import QuadRule, integrate
from .special import laguerre

SIGMA = {"wk": 1.0 + 0j, "df": 1j}


class SingularTimeError(ValueError):
    """DF evaluation at t within tolerance of a sin-zero n*pi/lambda_i."""


def sigma_value(sigma) -> complex:
    if sigma in SIGMA:
        return SIGMA[sigma]
    raise ValueError(f"flow must be 'wk' or 'df', got {sigma!r}")


def df_singular_times(params: MagneticParams, t_max: float) -> list[float]:
    out = set()
    for b in params.blocks:
        n = 1
        while n * np.pi / b.lam <= t_max:
            out.add(n * np.pi / b.lam)
            n += 1
    return sorted(out)


def check_df_time(t: float, params: MagneticParams, tol: float = 1e-9):
    for b in params.blocks:
        n = round(b.lam * t / np.pi)
        if n >= 1 and abs(t - n * np.pi / b.lam) < tol:
            raise SingularTimeError(
                f"t={t} is within {tol} of the singular time {n}*pi/{b.lam}")


# ---------------------------------------------------------------------------
# per-block helpers
# ---------------------------------------------------------------------------

def _blockwise(X, Y, params):
    """Yield (block, X_i, Y_i) with block slices applied on the last axis."""
    X = np.asarray(X, dtype=complex if np.iscomplexobj(X) else float)
    Y = np.asarray(Y, dtype=complex if np.iscomplexobj(Y) else float)
    if X.shape[-1] != params.k or Y.shape[-1] != params.k:
        raise ValueError(f"points must have dimension k={params.k}")
    for b, sl in zip(params.blocks, params.block_slices()):
        yield b, X[..., sl], Y[..., sl]


def _block_pair(Xi, Yi):
    """Unweighted complex pairing <X,Y> + i<X,J(Y)> on one block."""
    return np.sum(Xi * Yi, axis=-1) + 1j * np.sum(Xi * J_apply(Yi), axis=-1)


def _sq(Z):
    return np.sum(Z * Z, axis=-1)


def weighted_dist_sq(X, Y, params):
    """sum_i lambda_i |X_i - Y_i|^2."""
    out = 0.0
    for b, Xi, Yi in _blockwise(X, Y, params):
        out = out + b.lam * _sq(Xi - Yi)
    return out


# ---------------------------------------------------------------------------
# projections (point-spreads)
# ---------------------------------------------------------------------------

def _projection_gauss_parts(X, Y, params):
    """Common factor (prod lam^{k_i/2} / pi^{k/2}) e^{sum lam (Z.Wbar - ...)},
    returned as (prefactor, exponent) so callers can merge exponents with
    other kernel factors before exponentiating (avoids overflow on shifted
    contours)."""
    pref = np.prod([b.lam ** (b.k / 2) for b in params.blocks]) / np.pi ** (params.k / 2)
    expo = 0j
    for b, Xi, Yi in _blockwise(X, Y, params):
        expo = expo + b.lam * (_block_pair(Xi, Yi) - 0.5 * (_sq(Xi) + _sq(Yi)))
    return pref, expo


def _projection_gauss(X, Y, params):
    pref, expo = _projection_gauss_parts(X, Y, params)
    return pref * np.exp(expo)


def projection_parts(a: int, X, Y, params: MagneticParams):
    """delta^{(a)}(X, Y) as (polynomial-times-prefactor, exponent)."""
    if a < 0:
        raise ValueError("zone index must be nonnegative")
    lag = laguerre(params.k // 2 - 1, a, weighted_dist_sq(X, Y, params))
    pref, expo = _projection_gauss_parts(X, Y, params)
    return lag * pref, expo


def projection_kernel(a: int, X, Y, params: MagneticParams):
    """Gross-zone point-spread delta^{(a)}(X, Y)."""
    if a < 0:
        raise ValueError("zone index must be nonnegative")
    lag = laguerre(params.k // 2 - 1, a, weighted_dist_sq(X, Y, params))
    return lag * _projection_gauss(X, Y, params)


def irreducible_projection_kernel(a_tuple, X, Y, params: MagneticParams):
    """Irreducible-zone point-spread: plane-wise product of L^{(0)} factors."""
    a_tuple = tuple(int(a) for a in a_tuple)
    if len(a_tuple) != params.n_planes:
        raise ValueError(f"need one zone index per plane, k/2={params.n_planes}")
    if any(a < 0 for a in a_tuple):
        raise ValueError("zone indices must be nonnegative")
    X = np.asarray(X, dtype=complex if np.iscomplexobj(X) else float)
    Y = np.asarray(Y, dtype=complex if np.iscomplexobj(Y) else float)
    plam = params.plane_lambdas()
    lag = 1.0
    for j, aj in enumerate(a_tuple):
        d2 = ((X[..., 2 * j] - Y[..., 2 * j]) ** 2 +
              (X[..., 2 * j + 1] - Y[..., 2 * j + 1]) ** 2)
        lag = lag * laguerre(0, aj, plam[j] * d2)
    return lag * _projection_gauss(X, Y, params)


# ---------------------------------------------------------------------------
# global kernels
# ---------------------------------------------------------------------------

def global_parts(sigma, t: float, X, Y, params: MagneticParams):
    """Global WK/DF kernel as (prefactor, exponent)."""
    if not t > 0:
        raise ValueError("global kernel requires t > 0")
    if sigma == "df":
        check_df_time(t, params)
        pref, expo = 1.0 + 0j, 0j
        for b, Xi, Yi in _blockwise(X, Y, params):
            pref *= (b.lam / (2j * np.pi * np.sin(b.lam * t))) ** (b.k // 2)
            expo = expo + 1j * b.lam * (
                0.5 / np.tan(b.lam * t) * _sq(Xi - Yi)
                - np.sum(Xi * J_apply(Yi), axis=-1))
        return pref, expo
    sigma_value(sigma)
    pref, expo = 1.0, 0j
    for b, Xi, Yi in _blockwise(X, Y, params):
        pref *= (b.lam / (2 * np.pi * np.sinh(b.lam * t))) ** (b.k // 2)
        expo = expo - b.lam * (0.5 / np.tanh(b.lam * t) * _sq(Xi - Yi)
                               + 1j * np.sum(Xi * J_apply(Yi), axis=-1))
    return pref, expo


def global_kernel(sigma, t: float, X, Y, params: MagneticParams):
    """Global WK/DF kernel e^{-t sigma H_Z}(X, Y)."""
    pref, expo = global_parts(sigma, t, X, Y, params)
    return pref * np.exp(expo)


# ---------------------------------------------------------------------------
# zonal closed forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelValue:
    value: complex
    dominant: complex | None = None
    long_term: complex | None = None


def zonal0(sigma, t: float, X, Y, params: MagneticParams):
    """Holomorphic-zone kernel d_sigma^{(0)}; entire in t >= 0."""
    s = sigma_value(sigma)
    if t < 0:
        raise ValueError("zonal closed forms require t >= 0")
    pref = np.prod([b.lam ** (b.k / 2) for b in params.blocks]) / np.pi ** (params.k / 2)
    pref = pref * np.exp(-0.5 * s * t * sum(b.lam * b.k for b in params.blocks))
    expo = 0j
    for b, Xi, Yi in _blockwise(X, Y, params):
        e = np.exp(-2 * b.lam * t * s)
        expo = expo + b.lam * (-0.5 * (_sq(Xi) + _sq(Yi)) + e * _block_pair(Xi, Yi))
    return pref * np.exp(expo)


def _lambda1_factor(sigma, t, X, Y, params):
    """Lambda^{(1)} = k/2 - sum_i Q_i, the full polynomial factor of d^{(1)}.

    Obtained by first-moment Gaussian integration of the defining
    convolution int P^{(1)}(X,U) d_sigma(t,U,Y) dU; written in terms of
    e_i = exp(-2 lambda_i t sigma) it is regular down to t = 0, where it
    reduces to L_1^{((k/2)-1)}(sum lambda_i |X_i - Y_i|^2).
    """
    s = sigma_value(sigma)
    total = params.k / 2 + 0j
    for b, Xi, Yi in _blockwise(X, Y, params):
        e = np.exp(-2 * b.lam * t * s)
        u, v = (1 - e) / 2, (1 + e) / 2
        # complex mean of the convolution Gaussian
        m = (u * (Xi - 1j * J_apply(Xi)) + v * Yi - u * 1j * J_apply(Yi))
        Q = b.lam * (_sq(Xi) - 2 * np.sum(Xi * m, axis=-1) + np.sum(m * m, axis=-1)) \
            + b.k * (1 - e) / 2
        total = total - Q
    return total


def dominant_kernel(sigma, a: int, t: float, X, Y, params: MagneticParams):
    """D_sigma^{(a)} = L_a^{((k/2)-1)}(sum lam |X-Y|^2) * zonal0."""
    lag = laguerre(params.k // 2 - 1, a, weighted_dist_sq(X, Y, params))
    return lag * zonal0(sigma, t, X, Y, params)


def zonal_kernel_closed(sigma, a: int, t: float, X, Y,
                        params: MagneticParams) -> KernelValue:
    """Closed-form zonal kernel with dominant/long-term split (a <= 1)."""
    if a == 0:
        v = zonal0(sigma, t, X, Y, params)
        return KernelValue(value=v, dominant=v, long_term=np.zeros_like(v))
    if a == 1:
        z0 = zonal0(sigma, t, X, Y, params)
        lam_fac = _lambda1_factor(sigma, t, X, Y, params)
        lag = laguerre(params.k // 2 - 1, 1, weighted_dist_sq(X, Y, params))
        dom = lag * z0
        return KernelValue(value=lam_fac * z0, dominant=dom,
                           long_term=(lam_fac - lag) * z0)
    raise ValueError(f"no closed form implemented for zone a={a}; "
                     "use zonal_kernel_numeric")


def lt1_printed(sigma, t: float, X, Y):
    """The printed two-dimensional long-term factor (k=2, lambda=1 gauge).

    (1 - e^{-2ts})(|X|^2 + |Y|^2 - 1 - (1 + e^{-2ts}) <X, Y + iJ(Y)>);
    kept as a direct transcription for cross-checking the general
    derivation in _lambda1_factor.
    """
    s = sigma_value(sigma)
    X = np.asarray(X, dtype=complex if np.iscomplexobj(X) else float)
    Y = np.asarray(Y, dtype=complex if np.iscomplexobj(Y) else float)
    e = np.exp(-2 * t * s)
    pair = _block_pair(X, Y)
    return (1 - e) * (_sq(X) + _sq(Y) - 1 - (1 + e) * pair)


# ---------------------------------------------------------------------------
# numeric zonal kernels (any zone index)
# ---------------------------------------------------------------------------

def zonal_numeric_scales(sigma, t: float, params: MagneticParams) -> tuple[float, ...]:
    """Per-axis Gaussian decay of P^{(a)}(X,U) d_sigma(t,U,Y) in U."""
    out = []
    for b in params.blocks:
        if sigma == "wk":
            g = b.lam * (1.0 + 1.0 / np.tanh(b.lam * t)) / 2.0
        else:
            g = b.lam / 2.0
        out.extend([float(g)] * b.k)
    return tuple(out)


def zonal_kernel_numeric(sigma, a: int, t: float, X, Y, params: MagneticParams,
                         quad_degree: int = 40, a_tuple=None):
    """d_sigma^{(a)}(t,X,Y) = int P^{(a)}(X,U) d_sigma(t,U,Y) dU by quadrature.

    With a_tuple set, the irreducible projection is used instead of the
    gross one (and `a` is ignored).
    """
    if sigma == "df":
        check_df_time(t, params)
    X = np.asarray(X, dtype=complex if np.iscomplexobj(X) else float)
    Y = np.asarray(Y, dtype=complex if np.iscomplexobj(Y) else float)
    rule = QuadRule(quad_degree, zonal_numeric_scales(sigma, t, params))

    def f(U):
        if a_tuple is not None:
            proj = irreducible_projection_kernel(a_tuple, X, U, params)
        else:
            proj = projection_kernel(a, X, U, params)
        return proj * global_kernel(sigma, t, U, Y, params)

    return integrate(f, rule)


# ---------------------------------------------------------------------------
# Mehler (harmonic oscillator) kernel and the lifted kernels
# ---------------------------------------------------------------------------

def mehler_kernel(t: float, X, Y, B: float, k: int):
    """Heat kernel of (1/2)(-Delta + B|X|^2) on R^k."""
    if not (t > 0 and B > 0):
        raise ValueError("mehler_kernel requires t > 0 and B > 0")
    X = np.asarray(X, dtype=complex if np.iscomplexobj(X) else float)
    Y = np.asarray(Y, dtype=complex if np.iscomplexobj(Y) else float)
    sh = np.sinh(2 * B * t)
    expo = (B / sh) * (-0.5 * np.cosh(2 * B * t) * (_sq(X) + _sq(Y))
                       + np.sum(X * Y, axis=-1))
    return np.exp(expo) / (2 * np.pi * sh) ** (k / 2)


def lift_kernels(base, sigma, t: float, Z_gamma, Z_x, Z_y):
    """(p_sigma, b_sigma) from a base d_sigma value and center data.

    p = e^{-2 t sigma |Z_gamma|^2} d;  b = p e^{2i <Z_gamma, Z_x - Z_y>}.
    """
    s = sigma_value(sigma)
    Z_gamma = np.asarray(Z_gamma, dtype=float)
    Z_x = np.asarray(Z_x, dtype=float)
    Z_y = np.asarray(Z_y, dtype=float)
    p = np.exp(-2 * t * s * np.sum(Z_gamma * Z_gamma, axis=-1)) * base
    b = p * np.exp(2j * np.sum(Z_gamma * (Z_x - Z_y), axis=-1))
    return p, b


# ---------------------------------------------------------------------------
# PDE residuals for the global kernels
# ---------------------------------------------------------------------------

def _global_exponent_derivs(sigma, t, X, Y, params):
    """(grad, laplacian) of log global_kernel in X (prefactor is X-free)."""
    grad = np.zeros(np.asarray(X).shape, dtype=complex)
    lap = 0j
    off = 0
    for b, Xi, Yi in _blockwise(X, Y, params):
        if sigma == "wk":
            c = 1.0 / np.tanh(b.lam * t)
            g = -b.lam * (c * (Xi - Yi) + 1j * J_apply(Yi))
            lap = lap - b.lam * c * b.k
        else:
            c = 1.0 / np.tan(b.lam * t)
            g = 1j * b.lam * (c * (Xi - Yi) - J_apply(Yi))
            lap = lap + 1j * b.lam * c * b.k
        grad[..., off:off + b.k] = g
        off += b.k
    return grad, lap


def apply_H_Z_global(sigma, t: float, X, Y, params: MagneticParams):
    """H_Z acting on the global kernel in the X variable, analytically.

    H_Z = -(1/2)(Delta + 2i D_lam - sum lam_i^2 |X_i|^2) applied to
    K = e^{g}: H_Z K = -(1/2)(lap g + grad g . grad g
    + 2i sum lam_i grad_i g . J(X_i) - sum lam_i^2 |X_i|^2) K.
    """
    K = global_kernel(sigma, t, X, Y, params)
    grad, lap = _global_exponent_derivs(sigma, t, X, Y, params)
    acc = lap + np.sum(grad * grad, axis=-1)
    off = 0
    for b, Xi, _ in _blockwise(X, Y, params):
        gi = grad[..., off:off + b.k]
        acc = acc + 2j * b.lam * np.sum(gi * J_apply(Xi), axis=-1)
        acc = acc - b.lam ** 2 * _sq(Xi)
        off += b.k
    return -0.5 * acc * K


def pde_residual(sigma, t: float, X, Y, params: MagneticParams,
                 dt: float = 1e-4) -> float:
    """Relative residual of (d/dt + sigma H_Z) applied to the global kernel.

    Central finite difference in t, analytic spatial derivatives.
    """
    s = sigma_value(sigma)
    kp = global_kernel(sigma, t + dt, X, Y, params)
    km = global_kernel(sigma, t - dt, X, Y, params)
    dkdt = (kp - km) / (2 * dt)
    hk = s * apply_H_Z_global(sigma, t, X, Y, params)
    scale = max(abs(dkdt), abs(hk), 1e-300)
    return float(abs(dkdt + hk) / scale)
