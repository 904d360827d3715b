"""Spinor fields on periodic grids, pointwise and integrated observables,
and the matrix-free two-component Hamiltonian

    H = (p - qA)^2/(2m) + q phi - (q hbar / 2m) sigma . B,

with the kinetic momentum expanded as
p^2/(2m) - (q/2m)(p.A + A.p) + q^2 A^2/(2m) and every derivative spectral.
Units: hbar = c = 1 throughout; q and m are parameters (default electron
charge q = -1, m = 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import EMPotential
from .grids import Grid, make_grid  # noqa: F401  (re-exported for callers)

HBAR = 1.0
C_LIGHT = 1.0


@dataclass
class ScalarField:
    grid: Grid
    values: np.ndarray  # real, shape grid.shape


@dataclass
class VectorField:
    grid: Grid
    values: np.ndarray  # real, shape (3, *grid.shape)


@dataclass
class SpinorField:
    """Two-component complex field; data has shape (2, *grid.shape)."""

    grid: Grid
    data: np.ndarray

    def __post_init__(self):
        self.data = np.ascontiguousarray(self.data, dtype=complex)
        if self.data.shape != (2,) + self.grid.shape:
            raise ValueError(
                f"spinor data shape {self.data.shape} does not match grid {self.grid.shape}"
            )

    @property
    def psi1(self) -> np.ndarray:
        return self.data[0]

    @property
    def psi2(self) -> np.ndarray:
        return self.data[1]

    def copy(self) -> "SpinorField":
        return SpinorField(self.grid, self.data.copy())


@dataclass
class BispinorField:
    """Pair (psi, chi) of spinor fields on one grid; chi is the auxiliary
    lower pair of the 4-component field."""

    psi: SpinorField
    chi: SpinorField

    def __post_init__(self):
        if self.psi.grid != self.chi.grid:
            raise ValueError("psi and chi must share a grid")


def init_gaussian(grid: Grid, center, width, momentum, spinor) -> SpinorField:
    """Normalized Gaussian packet  N exp(-|r-c|^2/(4 sigma^2)) exp(i k0.r) chi.

    Requires sigma >= 3h per axis and the center at least 4 sigma from every
    domain wall so the periodic images are negligible.
    """
    dim = grid.dim
    center = np.atleast_1d(np.asarray(center, dtype=float))
    momentum = np.atleast_1d(np.asarray(momentum, dtype=float))
    if center.shape != (dim,) or momentum.shape != (dim,):
        raise ValueError(f"center and momentum must have {dim} components")
    if np.isscalar(width):
        sigma = np.full(dim, float(width))
    else:
        sigma = np.asarray(width, dtype=float)
        if sigma.shape != (dim,):
            raise ValueError(f"width must be scalar or have {dim} components")
    if np.any(sigma <= 0):
        raise ValueError("width must be positive")
    for ax in range(dim):
        if sigma[ax] < 3.0 * grid.h[ax]:
            raise ValueError(
                f"width {sigma[ax]:g} on axis {ax} is unresolvable; need >= 3h = {3 * grid.h[ax]:g}"
            )
        lo = grid.origin[ax]
        hi = lo + grid.extent[ax]
        if center[ax] - lo < 4.0 * sigma[ax] or hi - center[ax] < 4.0 * sigma[ax]:
            raise ValueError(
                f"center must sit at least 4 sigma from the boundary on axis {ax}"
            )
    chi = np.asarray(spinor, dtype=complex)
    if chi.shape != (2,):
        raise ValueError("spinor must be a 2-vector")
    cn = np.sqrt(np.sum(np.abs(chi) ** 2))
    if cn == 0:
        raise ValueError("spinor is not normalizable")
    chi = chi / cn

    mesh = grid.mesh()
    expo = 0.0
    phase = 0.0
    for ax in range(dim):
        d = mesh[ax] - center[ax]
        expo = expo + d * d / (4.0 * sigma[ax] ** 2)
        phase = phase + momentum[ax] * mesh[ax]
    envelope = np.exp(-expo + 1j * phase)
    data = np.empty((2,) + grid.shape, dtype=complex)
    data[0] = chi[0] * envelope
    data[1] = chi[1] * envelope
    f = SpinorField(grid, data)
    nrm = norm(f)
    f.data /= nrm
    return f


def norm(f: SpinorField) -> float:
    """sqrt of the integrated probability density."""
    return float(np.sqrt(np.sum(np.abs(f.data) ** 2) * f.grid.cell_volume))


def inner(f: SpinorField, g: SpinorField) -> complex:
    """Quadrature inner product <f|g> = sum f^dag g * h^dim."""
    return complex(np.vdot(f.data, g.data) * f.grid.cell_volume)


def density(f: SpinorField) -> ScalarField:
    """rho = psi^dag psi."""
    return ScalarField(f.grid, np.sum(np.abs(f.data) ** 2, axis=0))


def spin_density(f: SpinorField) -> VectorField:
    """s = psi^dag sigma psi, real 3-vector per point."""
    cross = np.conj(f.data[0]) * f.data[1]
    out = np.empty((3,) + f.grid.shape, dtype=float)
    out[0] = 2.0 * cross.real
    out[1] = 2.0 * cross.imag
    out[2] = np.abs(f.data[0]) ** 2 - np.abs(f.data[1]) ** 2
    return VectorField(f.grid, out)


def expect_spin(f: SpinorField) -> np.ndarray:
    """<S> = (hbar/2) integral of the spin density."""
    s = spin_density(f).values
    return 0.5 * HBAR * s.reshape(3, -1).sum(axis=1) * f.grid.cell_volume


def expect_moment(f: SpinorField, q: float = -1.0, m: float = 1.0) -> np.ndarray:
    """<mu_s> = (q hbar / 2m) integral of the spin density."""
    return (q / m) * expect_spin(f)


def expect_position(f: SpinorField) -> np.ndarray:
    """Density centroid, padded to 3 components."""
    rho = density(f).values
    w = rho.sum()
    out = np.zeros(3)
    mesh = f.grid.mesh()
    for ax in range(f.grid.dim):
        out[ax] = float(np.sum(mesh[ax] * rho) / w)
    return out


def position_variance(f: SpinorField) -> np.ndarray:
    """Per-axis density variance <x^2> - <x>^2, padded to 3 components."""
    rho = density(f).values
    w = rho.sum()
    out = np.zeros(3)
    mesh = f.grid.mesh()
    for ax in range(f.grid.dim):
        mean = float(np.sum(mesh[ax] * rho) / w)
        out[ax] = float(np.sum((mesh[ax] - mean) ** 2 * rho) / w)
    return out


def expect_momentum(f: SpinorField) -> np.ndarray:
    """Spectral-quadrature momentum expectation, padded to 3 components."""
    axes = tuple(range(-f.grid.dim, 0))
    fhat = np.fft.fftn(f.data, axes=axes)
    w = np.sum(np.abs(fhat) ** 2)
    out = np.zeros(3)
    kmesh = f.grid.k_mesh()
    for ax in range(f.grid.dim):
        out[ax] = float(np.sum(kmesh[ax] * np.sum(np.abs(fhat) ** 2, axis=0)) / w)
    return HBAR * out


def sigma_apply(v, data: np.ndarray) -> np.ndarray:
    """(sigma . v) applied to a 2-component field; v is a 3-tuple of arrays
    or scalars."""
    v1, v2, v3 = v
    out = np.empty_like(data)
    out[0] = v3 * data[0] + (v1 - 1j * v2) * data[1]
    out[1] = (v1 + 1j * v2) * data[0] - v3 * data[1]
    return out


def _is_zero3(v) -> bool:
    return all(np.isscalar(c) and c == 0.0 for c in v)


def apply_hamiltonian(f: SpinorField, p: EMPotential, t: float = 0.0,
                      q: float = -1.0, m: float = 1.0) -> SpinorField:
    """H psi, matrix-free: spectral kinetic part, pointwise potential and
    Zeeman parts.  B comes from the preset's closed-form field, never from
    a numerical curl."""
    grid = f.grid
    r3 = grid.coords3()
    axes = tuple(range(-grid.dim, 0))
    psi = f.data
    psi_hat = np.fft.fftn(psi, axes=axes)
    k2 = grid.k_squared()

    out = np.fft.ifftn((HBAR * HBAR / (2.0 * m)) * k2 * psi_hat, axes=axes)

    a = p.a_vec(r3, t)
    if not _is_zero3(a):
        kmesh = grid.k_mesh()
        # -(q/2m)(p.A + A.p) psi = (i hbar q / 2m) [div(A psi) + A . grad psi]
        cross = np.zeros_like(psi)
        for ax in range(grid.dim):
            a_ax = a[ax]
            if np.isscalar(a_ax) and a_ax == 0.0:
                continue
            cross += np.fft.ifftn(
                1j * kmesh[ax] * np.fft.fftn(a_ax * psi, axes=axes), axes=axes
            )
            cross += a_ax * np.fft.ifftn(1j * kmesh[ax] * psi_hat, axes=axes)
        out += (1j * HBAR * q / (2.0 * m)) * cross
        a2 = sum(c * c for c in a)
        out += (q * q / (2.0 * m)) * a2 * psi

    phi = p.phi(r3, t)
    if not (np.isscalar(phi) and phi == 0.0):
        out += (q * phi) * psi

    b = p.b_analytic(r3, t) if p.b_analytic is not None else (0.0, 0.0, 0.0)
    if not _is_zero3(b):
        coeff = -(q * HBAR) / (2.0 * m)
        out += coeff * sigma_apply(b, psi)

    return SpinorField(grid, out)


def expect_energy(f: SpinorField, p: EMPotential, t: float = 0.0,
                  q: float = -1.0, m: float = 1.0) -> float:
    """Re <psi|H psi>; the imaginary part is a Hermiticity diagnostic and is
    roundoff-small for any preset."""
    return inner(f, apply_hamiltonian(f, p, t, q, m)).real
