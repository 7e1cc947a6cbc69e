"""Explicit spectra, multiplicities, zone indexing, and eigenfunction oracles.

Quantum numbers: holomorphic degree p, antiholomorphic degree upsilon,
azimuthal l = p + upsilon, magnetic m = 2p - l.  The gross zone index is
upsilon; eigenvalues depend only on the holomorphic indices.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, asdict
from fractions import Fraction

from .exact import (QC, ZonePoly, hermite_scaled_exact, laguerre_exact,
                    pderiv, pmul, psub, pscale, ptrim)
from .params import MagneticParams, HamiltonianVariant


# ---------------------------------------------------------------------------
# eigenvalues / multiplicities / zones
# ---------------------------------------------------------------------------

def eigenvalue(p_blocks, params: MagneticParams,
               variant: HamiltonianVariant) -> float:
    """Eigenvalue at per-block holomorphic degrees p_i.

    box:  -sum(lambda_i (4 p_i + k_i) + 4 lambda_i^2 k_i)  (with the default
          field constant; a configured c_f replaces the 4 lambda^2 k sum),
    H_Z:  +(1/2) sum lambda_i (4 p_i + k_i),
    H_Zf: H_Z + c_f.
    """
    p_blocks = tuple(int(p) for p in p_blocks)
    if len(p_blocks) != len(params.blocks):
        raise ValueError("one holomorphic index per block required")
    if any(p < 0 for p in p_blocks):
        raise ValueError("holomorphic indices must be nonnegative")
    base = sum(b.lam * (4 * p + b.k) for p, b in zip(p_blocks, params.blocks))
    if variant.kind == "box":
        return -(base + 2.0 * variant.field_constant(params))
    if variant.kind == "H_Z":
        return 0.5 * base
    return 0.5 * base + variant.field_constant(params)


def multiplicity(p_blocks, v_blocks, params: MagneticParams) -> int:
    """Product of binomials over blocks for fixed (p_i, upsilon_i)."""
    if len(p_blocks) != len(params.blocks) or len(v_blocks) != len(params.blocks):
        raise ValueError("one index pair per block required")
    out = 1
    for p, v, b in zip(p_blocks, v_blocks, params.blocks):
        q = b.k // 2
        out *= math.comb(p + q - 1, q - 1) * math.comb(v + q - 1, q - 1)
    return out


def zone_count(a: int, k: int) -> int:
    """Number of irreducible zones inside gross zone a."""
    if a < 0 or k <= 0 or k % 2:
        raise ValueError("need a >= 0 and even k > 0")
    return math.comb(a + k // 2 - 1, a)


def zone_of(l: int, m: int) -> int:
    """Gross zone index upsilon = (l - m) / 2."""
    if abs(m) > l:
        raise ValueError(f"|m| must not exceed l, got l={l}, m={m}")
    if (l - m) % 2:
        raise ValueError(f"l - m must be even, got l={l}, m={m}")
    return (l - m) // 2


@dataclass(frozen=True)
class SpectrumEntry:
    zone: int
    p: int
    upsilon: int
    l: int
    m: int
    eigenvalue: float
    multiplicity: int


def _compositions(total: int, parts: int):
    """All tuples of `parts` nonnegative ints summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def spectrum_table(params: MagneticParams, variant: HamiltonianVariant,
                   max_p: int, max_zone: int = 2) -> list[SpectrumEntry]:
    """Eigenvalue table grouped by gross zone, eigenvalues ascending.

    Complete through total holomorphic degree max_p: multiplicities
    aggregate all per-block decompositions of each eigenvalue; ordering
    ties between decompositions break lexicographically.
    """
    nb = len(params.blocks)
    entries = []
    for a in range(max_zone + 1):
        by_eig: dict[float, tuple[tuple[int, ...], int]] = {}
        v_comps = list(_compositions(a, nb))
        for ptup in sorted(pt for tot in range(max_p + 1)
                           for pt in _compositions(tot, nb)):
            ev = eigenvalue(ptup, params, variant)
            mult = sum(multiplicity(ptup, vtup, params) for vtup in v_comps)
            key = round(ev, 12)
            if key in by_eig:
                rep, m0 = by_eig[key]
                by_eig[key] = (min(rep, ptup), m0 + mult)
            else:
                by_eig[key] = (ptup, mult)
        for ev in sorted(by_eig):
            ptup, mult = by_eig[ev]
            p = sum(ptup)
            entries.append(SpectrumEntry(zone=a, p=p, upsilon=a, l=p + a,
                                         m=p - a, eigenvalue=float(ev),
                                         multiplicity=mult))
    return entries


def spectrum_table_csv(entries: list[SpectrumEntry]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["zone", "p", "upsilon", "l", "m", "eigenvalue", "multiplicity"])
    for e in entries:
        w.writerow([e.zone, e.p, e.upsilon, e.l, e.m, repr(e.eigenvalue),
                    e.multiplicity])
    return buf.getvalue()


def spectrum_table_json(entries: list[SpectrumEntry]) -> str:
    return json.dumps([asdict(e) for e in entries], indent=2)


# ---------------------------------------------------------------------------
# eigenfunction construction (exact, single-lambda oracle scope)
# ---------------------------------------------------------------------------

def _axis_linear(nvars: int, axis: int) -> ZonePoly:
    """Real coordinate X^axis as a polynomial in (z, zbar).

    Plane j holds axes (2j, 2j+1) with z_j = X^{2j} + i X^{2j+1}, so
    X^{2j} = (z + zbar)/2 and X^{2j+1} = (z - zbar)/(2i).
    """
    j, parity = divmod(axis, 2)
    z = ZonePoly.z(nvars, j)
    zb = ZonePoly.zbar(nvars, j)
    if parity == 0:
        return (z + zb) * QC.of(Fraction(1, 2))
    return (z - zb) * QC.of(0, Fraction(-1, 2))


def _poly_subst(coeffs, x: ZonePoly) -> ZonePoly:
    """Horner substitution of a univariate exact polynomial at a ZonePoly."""
    acc = ZonePoly.constant(x.nvars, QC.of(coeffs[-1]))
    for c in reversed(coeffs[:-1]):
        acc = acc * x + ZonePoly.constant(x.nvars, QC.of(c))
    return acc


def build_eigenfunction(l_tuple, params: MagneticParams) -> ZonePoly:
    """Hermite-product eigenfunction as an exact (z, zbar) polynomial.

    Returns prod_i lam^{-l_i/2} H_{l_i}(sqrt(lam) X^i) expanded in the
    complex coordinates (the lam^{-l/2} rescaling keeps coefficients
    rational and does not affect eigenfunction properties).
    """
    lam = Fraction(params.single_lambda).limit_denominator(10 ** 12)
    if float(lam) != params.single_lambda:
        raise ValueError("exact eigenfunction oracle needs a rational lambda")
    k = params.k
    if len(l_tuple) != k:
        raise ValueError(f"need one Hermite order per coordinate, k={k}")
    nvars = k // 2
    out = ZonePoly.constant(nvars, 1)
    for axis, l in enumerate(l_tuple):
        if l == 0:
            continue
        out = out * _poly_subst(hermite_scaled_exact(l, lam), _axis_linear(nvars, axis))
    return out


def split_by_magnetic(hp: ZonePoly) -> dict[int, ZonePoly]:
    """Group monomials by magnetic number m = |alpha| - |beta|."""
    return {m: hp.magnetic_component(m) for m in sorted(hp.magnetic_numbers())}


def _angular_operator(hp: ZonePoly, lam: Fraction) -> ZonePoly:
    """D = -lam * sum_j (z_j d_z_j - zbar_j d_zbar_j); eigenvalue -m*lam."""
    out = ZonePoly(hp.nvars)
    for j in range(hp.nvars):
        out = out + ZonePoly.z(hp.nvars, j) * hp.diff_z(j) * QC.of(-lam)
        out = out + ZonePoly.zbar(hp.nvars, j) * hp.diff_zbar(j) * QC.of(lam)
    return out


def vandermonde_split(hp: ZonePoly, l: int, params: MagneticParams) -> dict[int, ZonePoly]:
    """Recover magnetic components by inverting the Vandermonde system.

    The candidate magnetic numbers of an order-l Hermite product are
    m = 2p - l, p = 0..l.  With w_i = D^i(hp) and D-eigenvalues
    c_m = -m*lam, solving the Vandermonde system sum_m c_m^i H^{(m)} = w_i
    reproduces the components without inspecting monomial degrees.
    """
    lam = Fraction(params.single_lambda).limit_denominator(10 ** 12)
    ms = [2 * p - l for p in range(l + 1)]
    cs = [QC.of(-m * lam) for m in ms]
    assert len({(c.re, c.im) for c in cs}) == len(cs), "Vandermonde nodes must be distinct"
    r = len(ms)
    powers = [hp]
    for _ in range(r - 1):
        powers.append(_angular_operator(powers[-1], lam))
    # exact Gaussian elimination on the Vandermonde matrix V[i][j] = cs[j]^i
    mat = [[QC.of(1) for _ in range(r)]]
    for i in range(1, r):
        mat.append([mat[i - 1][j] * cs[j] for j in range(r)])
    rhs = list(powers)
    for col in range(r):
        piv = next(i for i in range(col, r) if not mat[i][col].is_zero())
        mat[col], mat[piv] = mat[piv], mat[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = mat[col][col].inv()
        mat[col] = [x * inv for x in mat[col]]
        rhs[col] = rhs[col] * inv
        for i in range(r):
            if i != col and not mat[i][col].is_zero():
                f = mat[i][col]
                mat[i] = [mat[i][j] - f * mat[col][j] for j in range(r)]
                rhs[i] = rhs[i] - rhs[col] * f
    return {m: comp for m, comp in zip(ms, rhs) if not comp.is_zero()}


# ---------------------------------------------------------------------------
# zone eigenbasis and spectral series (k=2 oracle)
# ---------------------------------------------------------------------------

def zone_eigenfunction_exact(p: int, a: int, lam) -> tuple[list[Fraction], Fraction]:
    """Level-p zone-a eigenfunction for k=2: h = sum_r c_r z^{p-r} zbar^{a-r}.

    The eigenspace at fixed (p, a) is one-dimensional; requiring
    Box h = -((4p+2) lam + c_f) h forces
        c_{r+1} = -(p-r)(a-r) c_r / (lam (r+1)),   c_0 = 1.
    Returns (coefficients, nsq) with the squared L^2(dX) norm of
    h e^{-lam |z|^2 / 2} equal to pi * nsq.
    """
    lam = Fraction(lam)
    if p < 0 or a < 0:
        raise ValueError("indices must be nonnegative")
    cs = [Fraction(1)]
    for r in range(min(p, a)):
        cs.append(-cs[-1] * Fraction((p - r) * (a - r), (r + 1)) / lam)
    # int |z|^{2N} e^{-lam |z|^2} dX = pi N! / lam^{N+1}
    nsq = Fraction(0)
    for r, cr in enumerate(cs):
        for rp, crp in enumerate(cs):
            N = p + a - r - rp
            nsq += cr * crp * Fraction(math.factorial(N)) / lam ** (N + 1)
    return cs, nsq


def zonal_series_value(sigma, a: int, t: float, X, Y, lam: float,
                       levels: int = 12, c_f: float = 0.0):
    """Truncated eigen-expansion sum_p e^{-sigma t mu_p} phi_p(X) conj(phi_p(Y))
    of the k=2 zone-a kernel under H_Z (mu_p = lam (2p+1) + c_f)."""
    import numpy as np
    s = {"wk": 1.0 + 0j, "df": 1j}[sigma] if isinstance(sigma, str) else complex(sigma)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    zx = X[..., 0] + 1j * X[..., 1]
    zy = Y[..., 0] + 1j * Y[..., 1]
    gx = np.exp(-0.5 * lam * np.abs(zx) ** 2)
    gy = np.exp(-0.5 * lam * np.abs(zy) ** 2)
    out = 0j
    for p in range(levels + 1):
        cs, nsq = zone_eigenfunction_exact(p, a, Fraction(lam).limit_denominator(10 ** 12))
        hx = sum(float(c) * zx ** (p - r) * np.conj(zx) ** (a - r)
                 for r, c in enumerate(cs))
        hy = sum(float(c) * zy ** (p - r) * np.conj(zy) ** (a - r)
                 for r, c in enumerate(cs))
        mu = lam * (2 * p + 1) + c_f
        out = out + np.exp(-s * t * mu) * hx * np.conj(hy) / (np.pi * float(nsq))
    return out * gx * gy


# ---------------------------------------------------------------------------
# radial-Laguerre cross-check
# ---------------------------------------------------------------------------

def radial_eigenpoly(n: int, l_tilde: int, k: int) -> list[Fraction]:
    """Monic polynomial eigenfunction of the radial operator, ascending coeffs.

    Coefficients a_i of t^{n-i} follow
        a_0 = 1,  a_i = -a_{i-1} (n - i + 1)(n + l_tilde + k/2 - i) / i,
    which is the recursion the radial eigen-equation actually forces (the
    printed form annihilates a_1 for n = 1 and cannot be proportional to a
    Laguerre polynomial; see the exact operator check below).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if k <= 0 or k % 2:
        raise ValueError("k must be a positive even integer")
    desc = [Fraction(1)]
    for i in range(1, n + 1):
        desc.append(-desc[-1] * Fraction((n - i + 1) * (2 * (n + l_tilde) + k - 2 * i), 2 * i))
    return ptrim(list(reversed(desc)))


def radial_operator_residual(u, l_tilde: int, k: int, n: int) -> list[Fraction]:
    """Exact residual of t u'' + (alpha + 1 - t) u' + n u, alpha = k/2 + l_tilde - 1.

    Zero iff u is the degree-n polynomial eigenfunction; equivalently the
    full radial operator 4t u'' + (2k + 4 l_tilde - 4t) u' has eigenvalue
    -4n on u.
    """
    a1 = Fraction(k, 2) + l_tilde  # alpha + 1
    du, ddu = pderiv(u), pderiv(pderiv(u))
    res = padd_list([pmul([Fraction(0), Fraction(1)], ddu),
                     pmul([a1, Fraction(-1)], du),
                     pscale(u, n)])
    return res


def radial_eigenvalue(n: int, p_tilde: int, k: int, lam: float) -> float:
    """Box eigenvalue reported by the radial method: -((4n + 4p~ + k) lam + 4k lam^2)."""
    return -((4 * n + 4 * p_tilde + k) * lam + 4 * k * lam * lam)


def padd_list(polys):
    out = polys[0]
    for p in polys[1:]:
        from .exact import padd
        out = padd(out, p)
    return out


def radial_vs_laguerre(n: int, l_tilde: int, k: int) -> bool:
    """radial_eigenpoly equals the monic rescaling of L_n^{(k/2 + l_tilde - 1)}."""
    u = radial_eigenpoly(n, l_tilde, k)
    L = laguerre_exact(k // 2 + l_tilde - 1, n)
    lead = L[-1]
    return psub(u, pscale(L, 1 / lead)) == [Fraction(0)]
