"""Sampled radial profiles: paired (value, derivative) samples on one grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import RadialGrid


@dataclass(frozen=True)
class RadialProfile:
    """A C^1 radial function sampled on a grid: u(r_k) and u'(r_k)."""

    grid: RadialGrid
    u: np.ndarray
    du: np.ndarray

    def __post_init__(self):
        for name in ("u", "du"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            if arr.shape != (self.grid.n,):
                raise ValueError(f"{name} must have one sample per grid node")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite samples")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def sup_u(self) -> float:
        return float(np.max(np.abs(self.u)))

    @property
    def sup_du(self) -> float:
        return float(np.max(np.abs(self.du)))

    @property
    def c1_norm(self) -> float:
        """Discrete sup-norm of (u, u'): max|u| + max|u'|."""
        return self.sup_u + self.sup_du

    def value_at(self, r):
        return np.interp(r, self.grid.nodes, self.u)

    def deriv_at(self, r):
        return np.interp(r, self.grid.nodes, self.du)

    def c1_distance(self, other: "RadialProfile") -> float:
        if self.grid != other.grid:
            raise ValueError("profiles live on different grids")
        return float(
            np.max(np.abs(self.u - other.u)) + np.max(np.abs(self.du - other.du))
        )
