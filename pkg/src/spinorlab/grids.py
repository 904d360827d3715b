"""Uniform periodic Cartesian grids with discrete Fourier wavenumbers."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_POINTS = 1 << 24


def _tuple_of_floats(x, dim):
    if np.isscalar(x):
        return (float(x),) * dim
    t = tuple(float(v) for v in x)
    if len(t) != dim:
        raise ValueError(f"expected {dim} values, got {len(t)}")
    return t


@dataclass(frozen=True)
class Grid:
    """Periodic grid; n points per axis (powers of two), spacing h."""

    n: tuple
    h: tuple
    origin: tuple

    def __post_init__(self):
        n = tuple(int(v) for v in self.n)
        if not 1 <= len(n) <= 3:
            raise ValueError("grid dimension must be 1, 2, or 3")
        for ni in n:
            if ni < 8 or (ni & (ni - 1)) != 0:
                raise ValueError(f"points per axis must be a power of two >= 8, got {ni}")
        total = int(np.prod(n))
        if total > MAX_POINTS:
            raise ValueError(f"grid has {total} points, budget is {MAX_POINTS}")
        h = _tuple_of_floats(self.h, len(n))
        origin = _tuple_of_floats(self.origin, len(n))
        if any(hi <= 0 for hi in h):
            raise ValueError("grid spacing must be positive")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "origin", origin)

    @property
    def dim(self) -> int:
        return len(self.n)

    @property
    def shape(self) -> tuple:
        return self.n

    @property
    def extent(self) -> tuple:
        return tuple(ni * hi for ni, hi in zip(self.n, self.h))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.h))

    def axes(self):
        """Coordinate values along each axis."""
        return [
            self.origin[i] + self.h[i] * np.arange(self.n[i])
            for i in range(self.dim)
        ]

    def mesh(self):
        """Sparse broadcastable coordinate arrays, one per axis."""
        return _mesh(self)

    def coords3(self):
        """Coordinates padded to 3 components; absent axes are scalar 0."""
        m = self.mesh()
        return tuple(m[i] if i < self.dim else 0.0 for i in range(3))

    def k_axes(self):
        """Angular wavenumbers per axis, standard DFT order, [-pi/h, pi/h)."""
        return [
            2.0 * np.pi * np.fft.fftfreq(self.n[i], d=self.h[i])
            for i in range(self.dim)
        ]

    def k_mesh(self):
        return _k_mesh(self)

    def k_squared(self):
        return _k_squared(self)


def make_grid(n, extent, origin=None) -> Grid:
    """Grid from point counts and box lengths; default box is centered."""
    n = (n,) if np.isscalar(n) else tuple(int(v) for v in n)
    ext = _tuple_of_floats(extent, len(n))
    h = tuple(e / ni for e, ni in zip(ext, n))
    if origin is None:
        origin = tuple(-e / 2.0 for e in ext)
    return Grid(n=n, h=h, origin=origin)


@lru_cache(maxsize=64)
def _mesh(grid: Grid):
    return tuple(np.meshgrid(*grid.axes(), indexing="ij", sparse=True))


@lru_cache(maxsize=64)
def _k_mesh(grid: Grid):
    return tuple(np.meshgrid(*grid.k_axes(), indexing="ij", sparse=True))


@lru_cache(maxsize=64)
def _k_squared(grid: Grid):
    return sum(k * k for k in _k_mesh(grid))
