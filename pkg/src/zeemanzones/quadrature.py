"""Deterministic tensor-product Gauss-Hermite quadrature over R^k.

All kernel integrals in this package are plain Lebesgue integrals of
integrands that decay like exp(-sum_j s_j u_j^2) (the flat gauge keeps the
Gaussian factors inside the kernels).  A rule therefore carries one scale
s_j > 0 per axis; nodes are x / sqrt(s_j) and weights absorb the
de-weighting factor e^{x^2} / sqrt(s_j), so the rule integrates
polynomial-times-phase remainders accurately.

Reduction order is a fixed pairwise tree, independent of any thread
count, so results are bitwise reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class QuadratureError(Exception):
    pass


class NonFiniteIntegrand(QuadratureError):
    pass


class QuadratureNonConvergence(QuadratureError):
    pass


MAX_DEGREE = 200
MAX_TENSOR_NODES = 50_000_000


@lru_cache(maxsize=None)
def gauss_hermite_rule(degree: int):
    """1D Gauss-Hermite nodes/weights for weight e^{-x^2} (read-only arrays)."""
    if not 1 <= degree <= MAX_DEGREE:
        raise QuadratureError(f"degree must be in [1, {MAX_DEGREE}], got {degree}")
    x, w = np.polynomial.hermite.hermgauss(degree)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class QuadRule:
    """Tensor rule over R^k with per-axis Gaussian scales."""

    degree: int
    scales: tuple[float, ...]

    def __post_init__(self):
        if any(not s > 0 for s in self.scales):
            raise QuadratureError("all axis scales must be positive")
        gauss_hermite_rule(self.degree)  # validates degree
        if self.degree ** len(self.scales) > MAX_TENSOR_NODES:
            raise QuadratureError("tensor rule too large; reduce degree or dimension")

    @property
    def dim(self) -> int:
        return len(self.scales)

    @staticmethod
    def for_params(degree: int, params, scale: float = 1.0) -> "QuadRule":
        """Rule over R^k matched to decay e^{-scale * lambda_i u^2} per axis."""
        lam = params.axis_lambdas()
        return QuadRule(degree, tuple(float(scale * l) for l in lam))

    def axis_nodes_weights(self, j: int):
        x, w = gauss_hermite_rule(self.degree)
        s = self.scales[j]
        rs = np.sqrt(s)
        return x / rs, w * np.exp(x * x) / rs

    def nodes_weights(self):
        """Full tensor grid: nodes (N, k), Lebesgue weights (N,)."""
        axes = [self.axis_nodes_weights(j) for j in range(self.dim)]
        grids = np.meshgrid(*[a[0] for a in axes], indexing="ij")
        nodes = np.stack([g.reshape(-1) for g in grids], axis=-1)
        wgrids = np.meshgrid(*[a[1] for a in axes], indexing="ij")
        weights = np.ones(nodes.shape[0])
        for g in wgrids:
            weights = weights * g.reshape(-1)
        return nodes, weights


def tree_sum(values: np.ndarray):
    """Pairwise-tree reduction along axis 0; fixed order, thread-independent."""
    v = np.asarray(values)
    while v.shape[0] > 1:
        n = v.shape[0]
        if n % 2:
            v = np.concatenate([v[0:n - 1:2] + v[1:n:2], v[n - 1:]], axis=0)
        else:
            v = v[0::2] + v[1::2]
    return v[0]


def integrate(f, rule: QuadRule, check_finite: bool = True):
    """int f(U) dU over R^k by the tensor rule; f maps (N, k) -> (N,)."""
    nodes, weights = rule.nodes_weights()
    vals = np.asarray(f(nodes))
    if vals.shape != (nodes.shape[0],):
        raise QuadratureError("integrand must return one value per node")
    if check_finite and not np.all(np.isfinite(vals)):
        raise NonFiniteIntegrand("integrand produced non-finite values")
    return tree_sum(weights * vals)


def convolve(kernelA, kernelB, rule: QuadRule):
    """int A(U) B(U) dU: both callables map (N, k) node arrays to (N,)."""
    return integrate(lambda U: np.asarray(kernelA(U)) * np.asarray(kernelB(U)), rule)


def integrate_checked(f, rule: QuadRule, tol: float = 1e-8, degree_step: int = 8):
    """Integrate with a two-degree convergence check.

    Returns the higher-degree value; raises QuadratureNonConvergence when
    the two results disagree beyond tol * (1 + |value|).
    """
    lo = QuadRule(max(1, rule.degree - degree_step), rule.scales)
    v_hi = integrate(f, rule)
    v_lo = integrate(f, lo)
    if abs(v_hi - v_lo) > tol * (1.0 + abs(v_hi)):
        raise QuadratureNonConvergence(
            f"quadrature not converged: |Delta|={abs(v_hi - v_lo):.3e} at degrees "
            f"{lo.degree}/{rule.degree}")
    return v_hi
