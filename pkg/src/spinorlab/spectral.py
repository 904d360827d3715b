"""FFT derivatives on periodic grids.

All vector operators act on 3-component fields regardless of the grid
dimension; derivatives along absent axes are zero.  Exact discrete
integration by parts (unitary DFT) is what makes Hermiticity and the
continuity residual clean, so no other derivative scheme is used.
"""

from __future__ import annotations

import numpy as np

from .grids import Grid


def fftn(grid: Grid, f: np.ndarray) -> np.ndarray:
    return np.fft.fftn(f, axes=tuple(range(-grid.dim, 0)))


def ifftn(grid: Grid, f: np.ndarray) -> np.ndarray:
    return np.fft.ifftn(f, axes=tuple(range(-grid.dim, 0)))


def derivative(grid: Grid, f: np.ndarray, axis: int) -> np.ndarray:
    """d/dx_axis of a scalar field; zero field for absent axes."""
    if axis >= grid.dim:
        return np.zeros_like(f, dtype=complex)
    k = grid.k_mesh()[axis]
    return np.fft.ifftn(1j * k * np.fft.fftn(f))


def gradient3(grid: Grid, f: np.ndarray) -> np.ndarray:
    """Gradient padded to 3 components, shape (3, *grid.shape)."""
    fhat = np.fft.fftn(f)
    out = np.zeros((3,) + grid.shape, dtype=complex)
    for ax in range(grid.dim):
        k = grid.k_mesh()[ax]
        out[ax] = np.fft.ifftn(1j * k * fhat)
    return out


def divergence3(grid: Grid, v: np.ndarray) -> np.ndarray:
    """Divergence of a 3-component field; absent axes contribute nothing."""
    out = np.zeros(grid.shape, dtype=complex)
    for ax in range(grid.dim):
        k = grid.k_mesh()[ax]
        out += np.fft.ifftn(1j * k * np.fft.fftn(v[ax]))
    return out


def curl3(grid: Grid, v: np.ndarray) -> np.ndarray:
    """Curl of a 3-component field, derivatives along absent axes zero."""
    d = np.empty((3, 3) + grid.shape, dtype=complex)
    for comp in range(3):
        fhat = np.fft.fftn(v[comp]) if grid.dim > 0 else None
        for ax in range(3):
            if ax >= grid.dim:
                d[ax, comp] = 0.0
            else:
                k = grid.k_mesh()[ax]
                d[ax, comp] = np.fft.ifftn(1j * k * fhat)
    out = np.empty((3,) + grid.shape, dtype=complex)
    out[0] = d[1, 2] - d[2, 1]
    out[1] = d[2, 0] - d[0, 2]
    out[2] = d[0, 1] - d[1, 0]
    return out
