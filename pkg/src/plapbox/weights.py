"""Weight functions on balls and their radial symmetrization.

An ambient weight is a nonnegative function of a point in R^N; on a ball
around a chosen center it is collapsed to a radial weight by taking, for
each radius s, the minimum of the weight over a deterministic direction
set on the sphere of radius s.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from .grids import DEFAULT_GRID_N, RadialGrid

DEFAULT_DIRECTIONS_LOW_DIM = 512
DEFAULT_DIRECTIONS_HIGH_DIM = 4096


@dataclass(frozen=True)
class RadialWeight:
    """Nonnegative radial samples s -> w(s) on a grid.

    ``constant`` is a fast-path tag set when the weight is known to be a
    constant function; closed-form constants use it to skip quadrature.
    """

    grid: RadialGrid
    samples: np.ndarray
    constant: float | None = None

    def __post_init__(self):
        arr = np.array(self.samples, dtype=np.float64)
        if arr.shape != (self.grid.n,):
            raise ValueError("weight needs one sample per grid node")
        if not np.all(np.isfinite(arr)):
            raise ValueError("weight samples must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    @property
    def rho(self) -> float:
        return self.grid.rho

    @classmethod
    def from_constant(cls, value: float, grid: RadialGrid) -> "RadialWeight":
        value = float(value)
        return cls(grid=grid, samples=np.full(grid.n, value), constant=value)

    @classmethod
    def from_callable(cls, fn: Callable, grid: RadialGrid) -> "RadialWeight":
        return cls(grid=grid, samples=np.asarray(fn(grid.nodes), dtype=np.float64))


@dataclass(frozen=True)
class WeightReport:
    """Outcome of validate_weight."""

    valid: bool
    nonnegative: bool
    max_value: float
    zero_radii: np.ndarray
    zero_plateau: bool
    message: str = ""


def validate_weight(w: RadialWeight) -> WeightReport:
    """Check the weight-function contract: nonnegative, not identically zero.

    Zero plateaus (consecutive zero nodes) are flagged but not rejected;
    only somewhere-positivity is required.
    """
    samples = w.samples
    nonneg = bool(np.all(samples >= 0.0))
    max_value = float(np.max(samples))
    zero_mask = samples == 0.0
    zero_radii = w.grid.nodes[zero_mask]
    plateau = bool(np.any(zero_mask[:-1] & zero_mask[1:]))
    if not nonneg:
        return WeightReport(False, False, max_value, zero_radii, plateau,
                            "negative samples present")
    if max_value <= 0.0:
        return WeightReport(False, True, max_value, zero_radii, plateau,
                            "weight is identically zero")
    msg = "zero plateau present (isolated-zeros assumption relaxed)" if plateau else ""
    return WeightReport(True, True, max_value, zero_radii, plateau, msg)


@dataclass
class AmbientWeight:
    """A nonnegative weight on a domain in R^N.

    ``evaluator`` maps an (m, N) array of points to an (m,) array of
    values. ``sup_norm`` is the sup of the weight over the domain; when
    omitted it is estimated from the points actually evaluated.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    sup_norm: float | None = None
    _observed_max: float = field(default=0.0, repr=False)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        vals = np.asarray(self.evaluator(pts), dtype=np.float64).reshape(-1)
        if vals.shape[0] != pts.shape[0]:
            raise ValueError("evaluator must return one value per point")
        if not np.all(np.isfinite(vals)):
            raise ValueError("weight evaluator returned non-finite values")
        if np.any(vals < 0.0):
            raise ValueError("weight evaluator returned negative values")
        top = float(np.max(vals, initial=0.0))
        self._observed_max = max(self._observed_max, top)
        if self.sup_norm is not None and top > self.sup_norm * (1.0 + 1e-12):
            raise ValueError(
                f"sampled value {top} exceeds declared sup_norm {self.sup_norm}"
            )
        return vals

    @property
    def effective_sup(self) -> float:
        return self.sup_norm if self.sup_norm is not None else self._observed_max


def default_direction_count(dim: int) -> int:
    return DEFAULT_DIRECTIONS_LOW_DIM if dim <= 3 else DEFAULT_DIRECTIONS_HIGH_DIM


def direction_set(dim: int, count: int) -> np.ndarray:
    """Deterministic, nested set of ``count`` unit vectors in R^dim.

    dim = 2 uses equally spaced angles (nested under doubling); dim >= 3
    maps an unscrambled Halton sequence through the normal quantile and
    normalizes, so any prefix of a larger set is the smaller set.
    """
    if dim < 2:
        raise ValueError("directions need dimension >= 2")
    if count < 1:
        raise ValueError("need at least one direction")
    if dim == 2:
        ang = 2.0 * np.pi * np.arange(count) / count
        return np.column_stack([np.cos(ang), np.sin(ang)])
    sampler = qmc.Halton(d=dim, scramble=False)
    pts = sampler.random(count)
    gauss = ndtri(np.clip(pts, 1e-12, 1.0 - 1e-12))
    norms = np.linalg.norm(gauss, axis=1)
    if np.any(norms == 0.0):
        gauss[norms == 0.0, 0] = 1.0
        norms = np.linalg.norm(gauss, axis=1)
    return gauss / norms[:, None]


def symmetrize(
    omega: AmbientWeight,
    center,
    rho: float,
    grid: RadialGrid | None = None,
    directions: int | None = None,
) -> RadialWeight:
    """Radial under-approximation of an ambient weight around ``center``.

    For each grid radius s the result is the minimum of the weight over
    the sampled sphere directions; at s = 0 it is the center value.
    The caller must make sure the ball of radius rho lies inside the
    evaluator's domain.
    """
    center = np.asarray(center, dtype=np.float64).reshape(-1)
    dim = center.size
    if dim < 2:
        raise ValueError("center must be a point in R^N with N > 1")
    if grid is None:
        grid = RadialGrid(rho, DEFAULT_GRID_N)
    if abs(grid.rho - rho) > 1e-12 * max(1.0, rho):
        raise ValueError("grid radius does not match rho")
    count = directions if directions is not None else default_direction_count(dim)
    dirs = direction_set(dim, count)

    mins = np.empty(grid.n)
    chunk = max(1, 2_000_000 // count)
    for start in range(0, grid.n, chunk):
        radii = grid.nodes[start : start + chunk]
        pts = center[None, None, :] + radii[:, None, None] * dirs[None, :, :]
        vals = omega.evaluate(pts.reshape(-1, dim)).reshape(radii.size, count)
        mins[start : start + chunk] = vals.min(axis=1)
    mins[0] = omega.evaluate(center[None, :])[0]
    return RadialWeight(grid=grid, samples=mins)


def load_weight_csv(path, grid_n: int | None = None) -> RadialWeight:
    """Read weight samples from a CSV with columns ``s, omega``.

    Samples are linearly resampled onto a uniform grid reaching the last
    listed radius.
    """
    path = Path(path)
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        cols = [c.strip().lower() for c in header]
        if "s" not in cols or "omega" not in cols:
            raise ValueError(f"{path}: expected columns 's, omega', got {header}")
        si, wi = cols.index("s"), cols.index("omega")
        rows = [(float(row[si]), float(row[wi])) for row in reader if row]
    if len(rows) < 2:
        raise ValueError(f"{path}: need at least two samples")
    rows.sort(key=lambda sw: sw[0])
    s = np.array([r[0] for r in rows])
    vals = np.array([r[1] for r in rows])
    if s[-1] <= 0:
        raise ValueError(f"{path}: weight radii must reach a positive rho")
    grid = RadialGrid(float(s[-1]), grid_n if grid_n is not None else max(len(rows), 3))
    return RadialWeight(grid=grid, samples=np.interp(grid.nodes, s, vals))


_NAMED_WEIGHTS = {
    "unit": lambda s, rho: np.ones_like(s),
    "ramp": lambda s, rho: s / rho,
    "dome": lambda s, rho: 1.0 - (s / rho) ** 2,
    "well": lambda s, rho: 0.25 + (s / rho) ** 2,
}


def named_weight(name: str, grid: RadialGrid) -> RadialWeight:
    """One of the built-in test weights: unit, ramp, dome, well."""
    try:
        fn = _NAMED_WEIGHTS[name]
    except KeyError:
        raise ValueError(
            f"unknown weight {name!r}; available: {sorted(_NAMED_WEIGHTS)}"
        ) from None
    samples = fn(grid.nodes, grid.rho)
    constant = 1.0 if name == "unit" else None
    return RadialWeight(grid=grid, samples=samples, constant=constant)
