"""Magnetic parameter sets and the fixed complex structure J.

The configuration space is R^k with k even.  It decomposes into blocks,
one per distinct field strength lambda_i, each block of even dimension
k_i.  Every block further splits into k_i/2 coordinate planes (x, y) and
the complex structure acts plane-wise by the fixed convention

    J(x, y) = (-y, x).

All sign conventions downstream inherit this choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Block:
    lam: float
    k: int

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"block field strength must be positive, got {self.lam}")
        if self.k <= 0 or self.k % 2 != 0:
            raise ValueError(f"block dimension must be a positive even integer, got {self.k}")


@dataclass(frozen=True)
class MagneticParams:
    """Full parameter set {(lambda_i, k_i)} of a non-degenerate Zeeman operator."""

    blocks: tuple[Block, ...]

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("at least one block required")
        lams = [b.lam for b in self.blocks]
        if len(set(lams)) != len(lams):
            raise ValueError("blocks must have pairwise distinct field strengths "
                             "(merge equal lambdas into one block)")

    @staticmethod
    def make(blocks: list[tuple[float, int]]) -> "MagneticParams":
        return MagneticParams(tuple(Block(lam, k) for lam, k in blocks))

    @property
    def k(self) -> int:
        return sum(b.k for b in self.blocks)

    @property
    def n_planes(self) -> int:
        return self.k // 2

    @property
    def lambdas(self) -> tuple[float, ...]:
        return tuple(b.lam for b in self.blocks)

    def block_slices(self) -> list[slice]:
        out, off = [], 0
        for b in self.blocks:
            out.append(slice(off, off + b.k))
            off += b.k
        return out

    def plane_lambdas(self) -> np.ndarray:
        """lambda per coordinate plane, in coordinate order (length k/2)."""
        return np.repeat([b.lam for b in self.blocks], [b.k // 2 for b in self.blocks])

    def axis_lambdas(self) -> np.ndarray:
        """lambda per real coordinate axis (length k)."""
        return np.repeat([b.lam for b in self.blocks], [b.k for b in self.blocks])

    @property
    def single_lambda(self) -> float:
        """The field strength, provided there is exactly one block (oracle scope)."""
        if len(self.blocks) != 1:
            raise ValueError("operation restricted to single-lambda parameter sets")
        return self.blocks[0].lam


def J_apply(X: np.ndarray) -> np.ndarray:
    """Apply J(x, y) = (-y, x) plane-wise along the last axis."""
    X = np.asarray(X)
    out = np.empty_like(X)
    out[..., 0::2] = -X[..., 1::2]
    out[..., 1::2] = X[..., 0::2]
    return out


def pairing(X, Y, params: MagneticParams) -> complex | np.ndarray:
    """Weighted complex pairing sum_i lambda_i * (<X_i,Y_i> + i<X_i,J(Y_i)>).

    Broadcasts over leading axes; the last axis must have length k.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape[-1] != params.k or Y.shape[-1] != params.k:
        raise ValueError(f"points must have dimension k={params.k}")
    lam = params.axis_lambdas()
    JY = J_apply(Y)
    re = np.sum(lam * X * Y, axis=-1)
    im = np.sum(lam * X * JY, axis=-1)
    out = re + 1j * im
    return out if out.shape else complex(out)


def pairing_parts(X, Y, params: MagneticParams):
    """Return (<X,Y>, <X,J(Y)>) with the lambda weights, as a real pair."""
    v = pairing(X, Y, params)
    return np.real(v), np.imag(v)


@dataclass(frozen=True)
class HamiltonianVariant:
    """Which Hamiltonian the spectra/partition functions refer to.

    kind 'box'   : the magnetic Laplacian itself (with its field constant),
    kind 'H_Z'   : classical Zeeman operator, -(1/2) of the box with the
                   field constant removed,
    kind 'H_Zf'  : H_Z shifted by the field-energy constant c_f.

    The paper is internally inconsistent about the field constant; c_f is
    therefore explicit configuration.  ``c_f=None`` selects the default
    sum(2*lambda_i^2*k_i); mode='plane' selects the alternative
    2*sum(lambda_i^2).
    """

    kind: str = "H_Z"
    c_f: float | None = None
    c_f_mode: str = "block"  # 'block' -> sum 2 lam^2 k ; 'plane' -> 2 sum lam^2

    def __post_init__(self):
        if self.kind not in ("box", "H_Z", "H_Zf"):
            raise ValueError(f"unknown Hamiltonian kind {self.kind!r}")
        if self.c_f_mode not in ("block", "plane"):
            raise ValueError(f"unknown c_f mode {self.c_f_mode!r}")

    def field_constant(self, params: MagneticParams) -> float:
        if self.c_f is not None:
            return self.c_f
        if self.c_f_mode == "plane":
            return 2.0 * sum(b.lam ** 2 for b in params.blocks)
        return sum(2.0 * b.lam ** 2 * b.k for b in params.blocks)


H_Z = HamiltonianVariant("H_Z")
H_ZF = HamiltonianVariant("H_Zf")
BOX = HamiltonianVariant("box")
