"""Exact rational special-function algebra.

This module is the oracle layer: univariate Laguerre/Hermite polynomials
with exact rational coefficients, and the multivariate polynomial ring in
the holomorphic/antiholomorphic coordinates (z_1..z_{k/2}, zbar_1..zbar_{k/2})
with complex rational coefficients.  Everything here is bit-exact; the
floating-point evaluation paths live in ``special``.

Note on the three-term recurrence: the coefficient of L_{a-1} must be
(a + alpha), which for alpha = 0 (the two-dimensional case all worked
examples use) degenerates to a.  The recurrence used here is validated
exactly against the explicit binomial form, term by term.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction


# ---------------------------------------------------------------------------
# complex rationals
# ---------------------------------------------------------------------------

def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class QC:
    """A complex number with exact rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def of(re=0, im=0) -> "QC":
        return QC(_frac(re), _frac(im))

    def __add__(self, o: "QC") -> "QC":
        return QC(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "QC") -> "QC":
        return QC(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "QC":
        return QC(-self.re, -self.im)

    def __mul__(self, o):
        if isinstance(o, QC):
            return QC(self.re * o.re - self.im * o.im,
                      self.re * o.im + self.im * o.re)
        f = _frac(o)
        return QC(self.re * f, self.im * f)

    __rmul__ = __mul__

    def conj(self) -> "QC":
        return QC(self.re, -self.im)

    def inv(self) -> "QC":
        d = self.re * self.re + self.im * self.im
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        return QC(self.re / d, -self.im / d)

    def __truediv__(self, o):
        if isinstance(o, QC):
            return self * o.inv()
        f = _frac(o)
        return QC(self.re / f, self.im / f)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self):
        return f"QC({self.re}, {self.im})"


QC_ZERO = QC()
QC_ONE = QC.of(1)
QC_I = QC.of(0, 1)


# ---------------------------------------------------------------------------
# univariate exact polynomials: list of Fraction coefficients, ascending
# ---------------------------------------------------------------------------

def ptrim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c or [Fraction(0)]


def padd(a, b):
    n = max(len(a), len(b))
    return ptrim([(a[i] if i < len(a) else Fraction(0)) +
                  (b[i] if i < len(b) else Fraction(0)) for i in range(n)])


def psub(a, b):
    return padd(a, [-x for x in b])


def pscale(a, s):
    s = _frac(s)
    return ptrim([x * s for x in a])


def pmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return ptrim(out)


def pderiv(a):
    if len(a) <= 1:
        return [Fraction(0)]
    return ptrim([a[i] * i for i in range(1, len(a))])


def peval(a, t):
    """Horner evaluation; exact if t is Fraction/int, float otherwise."""
    acc = a[-1]
    for c in reversed(a[:-1]):
        acc = acc * t + c
    return acc


def laguerre_exact(alpha: int, n: int) -> list[Fraction]:
    """L_n^{(alpha)} by the explicit binomial form, ascending coefficients."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    return ptrim([Fraction((-1) ** b * math.comb(n + alpha, n - b), math.factorial(b))
                  for b in range(n + 1)])


def laguerre_recurrence_exact(alpha: int, n: int) -> list[Fraction]:
    """L_n^{(alpha)} built from the corrected three-term recurrence.

    (a+1) L_{a+1} = (2a + 1 + alpha - t) L_a - (a + alpha) L_{a-1},
    seeded with L_0 = 1, L_1 = 1 + alpha - t.
    """
    if n == 0:
        return [Fraction(1)]
    prev, cur = [Fraction(1)], [Fraction(1 + alpha), Fraction(-1)]
    for a in range(1, n):
        nxt = psub(pmul([Fraction(2 * a + 1 + alpha), Fraction(-1)], cur),
                   pscale(prev, a + alpha))
        prev, cur = cur, pscale(nxt, Fraction(1, a + 1))
    return cur


def hermite_exact(l: int) -> list[Fraction]:
    """Physicists' Hermite H_l, ascending integer coefficients."""
    if l < 0:
        raise ValueError("l must be nonnegative")
    out = [Fraction(0)] * (l + 1)
    for j in range(l // 2 + 1):
        deg = l - 2 * j
        out[deg] = Fraction((-1) ** j * math.factorial(l) * 2 ** deg,
                            math.factorial(j) * math.factorial(deg))
    return ptrim(out)


def hermite_scaled_exact(l: int, lam: Fraction) -> list[Fraction]:
    """lam^{-l/2} H_l(sqrt(lam) x) as an exact polynomial in x.

    All monomials of H_l share the parity of l, so factoring lam^{l/2}
    out leaves rational coefficients: the x^{l-2j} term picks up lam^{-j}.
    The overall scalar does not affect eigenfunction properties.
    """
    lam = _frac(lam)
    h = hermite_exact(l)
    out = [Fraction(0)] * len(h)
    for deg, c in enumerate(h):
        if c == 0:
            continue
        j = (l - deg) // 2
        out[deg] = c / lam ** j
    return ptrim(out)


def rodrigues_check(alpha: int, a: int) -> bool:
    """e^{-t} t^alpha L_a^{(alpha)} = (1/a!) d^a/dt^a (e^{-t} t^{a+alpha}).

    Differentiating e^{-t} p(t) gives e^{-t} (p' - p), so the right side
    reduces to an exact polynomial identity.
    """
    q = [Fraction(0)] * (a + alpha) + [Fraction(1)]  # t^{a+alpha}
    for _ in range(a):
        q = psub(pderiv(q), q)
    lhs = pmul([Fraction(0)] * alpha + [Fraction(1)], laguerre_exact(alpha, a))
    return ptrim(psub(pscale(q, Fraction(1, math.factorial(a))), lhs)) == [Fraction(0)]


def _multi_compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _multi_compositions(total - first, parts - 1):
            yield (first,) + rest


def laguerre_composition_check(alpha: int, n: int) -> bool:
    """L_n^{(alpha)}(t_1 + ... + t_{alpha+1}) = sum over i_1+...+i_{alpha+1}=n
    of prod_j L_{i_j}^{(0)}(t_j), verified by exact multivariate expansion."""
    m = alpha + 1
    lhs: dict[tuple, Fraction] = {}
    for d, c in enumerate(laguerre_exact(alpha, n)):
        if c == 0:
            continue
        for comp in _multi_compositions(d, m):
            w = math.factorial(d)
            for e in comp:
                w //= math.factorial(e)
            lhs[comp] = lhs.get(comp, Fraction(0)) + c * w
    rhs: dict[tuple, Fraction] = {}
    for comp in _multi_compositions(n, m):
        terms = {(): Fraction(1)}
        for j, ij in enumerate(comp):
            new: dict[tuple, Fraction] = {}
            for deg, cj in enumerate(laguerre_exact(0, ij)):
                if cj == 0:
                    continue
                for key, val in terms.items():
                    nk = key + (deg,)
                    new[nk] = new.get(nk, Fraction(0)) + val * cj
            terms = new
        for key, val in terms.items():
            rhs[key] = rhs.get(key, Fraction(0)) + val
    lhs = {k: v for k, v in lhs.items() if v}
    rhs = {k: v for k, v in rhs.items() if v}
    return lhs == rhs


# ---------------------------------------------------------------------------
# multivariate polynomials in (z_1..z_m, zbar_1..zbar_m)
# ---------------------------------------------------------------------------

class ZonePoly:
    """Exact polynomial in holomorphic/antiholomorphic coordinates.

    terms: {(alpha, beta): QC} with alpha, beta integer multi-degree tuples
    of length nvars = k/2.  Zero coefficients are never stored.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms: dict[tuple[tuple[int, ...], tuple[int, ...]], QC] = {}
        if terms:
            for key, c in terms.items():
                self._iadd_term(key, c)

    def _iadd_term(self, key, c: QC):
        alpha, beta = key
        if len(alpha) != self.nvars or len(beta) != self.nvars:
            raise ValueError("multi-degree length mismatch")
        cur = self.terms.get(key)
        new = c if cur is None else cur + c
        if new.is_zero():
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    # -- constructors -------------------------------------------------------
    @staticmethod
    def constant(nvars: int, c=1) -> "ZonePoly":
        c = c if isinstance(c, QC) else QC.of(c)
        z = (0,) * nvars
        return ZonePoly(nvars, {(z, z): c} if not c.is_zero() else {})

    @staticmethod
    def z(nvars: int, j: int) -> "ZonePoly":
        a = tuple(1 if i == j else 0 for i in range(nvars))
        return ZonePoly(nvars, {(a, (0,) * nvars): QC_ONE})

    @staticmethod
    def zbar(nvars: int, j: int) -> "ZonePoly":
        b = tuple(1 if i == j else 0 for i in range(nvars))
        return ZonePoly(nvars, {((0,) * nvars, b): QC_ONE})

    # -- ring operations ----------------------------------------------------
    def __add__(self, o: "ZonePoly") -> "ZonePoly":
        out = ZonePoly(self.nvars, self.terms)
        for key, c in o.terms.items():
            out._iadd_term(key, c)
        return out

    def __sub__(self, o: "ZonePoly") -> "ZonePoly":
        out = ZonePoly(self.nvars, self.terms)
        for key, c in o.terms.items():
            out._iadd_term(key, -c)
        return out

    def __mul__(self, o):
        if isinstance(o, ZonePoly):
            out = ZonePoly(self.nvars)
            for (a1, b1), c1 in self.terms.items():
                for (a2, b2), c2 in o.terms.items():
                    key = (tuple(x + y for x, y in zip(a1, a2)),
                           tuple(x + y for x, y in zip(b1, b2)))
                    out._iadd_term(key, c1 * c2)
            return out
        c = o if isinstance(o, QC) else QC.of(o)
        return ZonePoly(self.nvars, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, o):
        return isinstance(o, ZonePoly) and self.nvars == o.nvars and self.terms == o.terms

    def is_zero(self) -> bool:
        return not self.terms

    def conj(self) -> "ZonePoly":
        return ZonePoly(self.nvars,
                        {(b, a): c.conj() for (a, b), c in self.terms.items()})

    # -- calculus -----------------------------------------------------------
    def diff_z(self, j: int) -> "ZonePoly":
        out = ZonePoly(self.nvars)
        for (a, b), c in self.terms.items():
            if a[j] == 0:
                continue
            na = tuple(x - 1 if i == j else x for i, x in enumerate(a))
            out._iadd_term((na, b), c * a[j])
        return out

    def diff_zbar(self, j: int) -> "ZonePoly":
        out = ZonePoly(self.nvars)
        for (a, b), c in self.terms.items():
            if b[j] == 0:
                continue
            nb = tuple(x - 1 if i == j else x for i, x in enumerate(b))
            out._iadd_term((a, nb), c * b[j])
        return out

    # -- structure ----------------------------------------------------------
    def magnetic_numbers(self) -> set[int]:
        return {sum(a) - sum(b) for a, b in self.terms}

    def magnetic_component(self, m: int) -> "ZonePoly":
        return ZonePoly(self.nvars, {k: c for k, c in self.terms.items()
                                     if sum(k[0]) - sum(k[1]) == m})

    def holo_degree(self) -> int:
        """Maximal holomorphic degree |alpha| over the stored monomials."""
        if not self.terms:
            return 0
        return max(sum(a) for a, _ in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(a) + sum(b) for a, b in self.terms)

    # -- evaluation ---------------------------------------------------------
    def eval(self, z: list[complex]) -> complex:
        if len(z) != self.nvars:
            raise ValueError("evaluation point length mismatch")
        acc = 0j
        for (a, b), c in self.terms.items():
            v = c.to_complex()
            for j in range(self.nvars):
                if a[j]:
                    v *= z[j] ** a[j]
                if b[j]:
                    v *= z[j].conjugate() ** b[j]
            acc += v
        return acc

    # -- serialization ------------------------------------------------------
    def to_json_dict(self) -> dict:
        terms = []
        for (a, b), c in sorted(self.terms.items()):
            terms.append({"holo": list(a), "anti": list(b),
                          "re_num": c.re.numerator, "re_den": c.re.denominator,
                          "im_num": c.im.numerator, "im_den": c.im.denominator})
        return {"nvars": self.nvars, "terms": terms}

    @staticmethod
    def from_json_dict(d: dict) -> "ZonePoly":
        out = ZonePoly(int(d["nvars"]))
        for t in d["terms"]:
            key = (tuple(t["holo"]), tuple(t["anti"]))
            out._iadd_term(key, QC(Fraction(t["re_num"], t["re_den"]),
                                   Fraction(t["im_num"], t["im_den"])))
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @staticmethod
    def from_json(s: str) -> "ZonePoly":
        return ZonePoly.from_json_dict(json.loads(s))

    def __repr__(self):
        items = ", ".join(f"z^{a} zbar^{b}: {c!r}" for (a, b), c in sorted(self.terms.items()))
        return f"ZonePoly({self.nvars}, {{{items}}})"


def apply_box(h: ZonePoly, lam, c_f) -> ZonePoly:
    """Exact polynomial action of the magnetic Laplacian in the Gaussian gauge.

    For Box = Delta_X + 2i lam D - lam^2 |X|^2 - c_f acting on
    H(z, zbar) e^{-lam |X|^2 / 2}, the polynomial part transforms by

        H  ->  4 sum_j d_z_j d_zbar_j H  -  4 lam sum_j z_j d_z_j H
                - (k lam + c_f) H,

    with k = 2 * nvars.  Derived once from Delta, the rotational field
    J(X).grad = i(z d_z - zbar d_zbar), and cancellation of the |X|^2 terms.
    """
    lam = _frac(lam)
    c_f = _frac(c_f)
    k = 2 * h.nvars
    out = h * QC.of(-(k * lam + c_f))
    for j in range(h.nvars):
        out = out + h.diff_z(j).diff_zbar(j) * QC.of(4)
        out = out + (ZonePoly.z(h.nvars, j) * h.diff_z(j)) * QC.of(-4 * lam)
    return out


def box_field_constant(lam, k: int, mode: str = "block"):
    """Default field constant of the box operator for a single block."""
    lam = _frac(lam)
    if mode == "plane":
        return 4 * lam * lam
    return 4 * lam * lam * k


def box_eigenvalue_exact(p: int, lam, k: int, c_f) -> Fraction:
    """-( (4p + k) lam + c_f ), the box eigenvalue on holomorphic degree p."""
    lam = _frac(lam)
    return -((4 * p + k) * lam + _frac(c_f))


def gaussian_pair_integral_exact(f: ZonePoly, g: ZonePoly, lam) -> QC:
    """<f e^{-lam|X|^2/2}, g e^{-lam|X|^2/2}> over R^k, divided by pi^{k/2}.

    Monomial orthogonality: int z^a zbar^b e^{-lam|z|^2} dV vanishes unless
    a = b, and equals (pi / lam) * a! / lam^a per plane.  The pi^{k/2}
    factor is divided out so the result stays rational.
    """
    lam = _frac(lam)
    acc = QC_ZERO
    for (a1, b1), c1 in f.terms.items():
        for (a2, b2), c2 in g.terms.items():
            # conj(g) contributes z^{b2} zbar^{a2}
            exp_z = tuple(x + y for x, y in zip(a1, b2))
            exp_zb = tuple(x + y for x, y in zip(b1, a2))
            if exp_z != exp_zb:
                continue
            w = Fraction(1)
            for n in exp_z:
                w *= Fraction(math.factorial(n)) / lam ** (n + 1)
            acc = acc + c1 * c2.conj() * w
    return acc
