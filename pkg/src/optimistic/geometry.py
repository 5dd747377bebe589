"""Bregman mirror maps and the identities they satisfy."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True)
class MirrorMap:
    """Distance-generating function Phi with its gradient and constants.

    ``smoothness`` is the Lipschitz constant of grad_phi and ``symmetry`` the
    declared symmetry coefficient; neither is estimated numerically.
    """

    phi: Callable[[np.ndarray], float]
    grad_phi: Callable[[np.ndarray], np.ndarray]
    smoothness: float = 1.0
    symmetry: float = 1.0
    norm_tag: str = "l2"
    dim: Optional[int] = None
    euclidean: bool = False

    def __post_init__(self):
        if self.smoothness < 1.0:
            raise ValueError("smoothness constant must be >= 1 for a 1-strongly convex map")
        if not 0.0 <= self.symmetry <= 1.0:
            raise ValueError("symmetry coefficient must lie in [0, 1]")

    def check(self, *points: np.ndarray) -> None:
        shape = np.shape(points[0])
        for p in points:
            if np.shape(p) != shape:
                raise ValueError(f"dimension mismatch: {np.shape(p)} vs {shape}")
        if self.dim is not None and (len(shape) != 1 or shape[0] != self.dim):
            raise ValueError(f"point of shape {shape} does not match map dimension {self.dim}")

    def norm(self, z: np.ndarray) -> float:
        return float(np.linalg.norm(z))

    def dual_norm(self, g: np.ndarray) -> float:
        return float(np.linalg.norm(g))


def _half_sq(z):
    return 0.5 * float(np.dot(z, z))


def _identity(z):
    return np.asarray(z, dtype=float).copy()


def euclidean_map(dim: Optional[int] = None) -> MirrorMap:
    """Phi(z) = ||z||^2 / 2, so D(z', z) = ||z' - z||^2 / 2."""
    return MirrorMap(_half_sq, _identity, 1.0, 1.0, "l2", dim, True)


def bregman_distance(mm: MirrorMap, z_to, z_from) -> float:
    z_to = np.asarray(z_to, dtype=float)
    z_from = np.asarray(z_from, dtype=float)
    mm.check(z_to, z_from)
    if mm.euclidean:
        d = z_to - z_from
        return 0.5 * float(np.dot(d, d))
    val = mm.phi(z_to) - mm.phi(z_from) - float(np.dot(mm.grad_phi(z_from), z_to - z_from))
    # rounding can push an exact zero slightly negative
    return max(val, 0.0)


def three_point_gap(mm: MirrorMap, u, v, w) -> float:
    """<grad(u) - grad(v), u - w> minus D(u,v) + D(w,u) - D(w,v); zero for every Phi."""
    u, v, w = (np.asarray(a, dtype=float) for a in (u, v, w))
    mm.check(u, v, w)
    lhs = float(np.dot(mm.grad_phi(u) - mm.grad_phi(v), u - w))
    rhs = bregman_distance(mm, u, v) + bregman_distance(mm, w, u) - bregman_distance(mm, w, v)
    return lhs - rhs
