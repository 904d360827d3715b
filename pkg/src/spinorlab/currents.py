"""Probability-current constructions for two-component fields.

Two independent routes to the same total current are implemented:

  * decompose_current assembles the convective term
    -(i hbar/2m)[psi^dag grad psi - (grad psi)^dag psi], the gauge term
    -(q/m) A rho, and the divergence-free spin term
    (hbar/2m) curl(psi^dag sigma psi);

  * levy_leblond_current evaluates -c (psi^dag sigma chi + chi^dag sigma psi)
    with chi the auxiliary spinor -(1/2mc) sigma.(p - qA) psi.

Their pointwise equality is the executable form of the statement that the
first-order two-spinor system carries the full spin current.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import EMPotential
from .spectral import curl3, divergence3
from .state import (
    HBAR,
    C_LIGHT,
    BispinorField,
    ScalarField,
    SpinorField,
    VectorField,
    apply_hamiltonian,
    density,
    sigma_apply,
    spin_density,
)

# Convective-term assembly is purely imaginary before the -i/2m factor, so
# any leftover imaginary part is roundoff; it is asserted below this bound.
_IMAG_RESIDUE_TOL = 1e-12


@dataclass
class CurrentDecomposition:
    """j_total is stored as the exact pointwise sum of the three parts."""

    j_conv: VectorField
    j_gauge: VectorField
    j_spin: VectorField
    j_total: VectorField


def _grad_spinor(f: SpinorField) -> np.ndarray:
    """grad of each spinor component, shape (3, 2, *grid.shape)."""
    grid = f.grid
    axes = tuple(range(-grid.dim, 0))
    fhat = np.fft.fftn(f.data, axes=axes)
    out = np.zeros((3, 2) + grid.shape, dtype=complex)
    for ax in range(grid.dim):
        k = grid.k_mesh()[ax]
        out[ax] = np.fft.ifftn(1j * k * fhat, axes=axes)
    return out


def spin_current(f: SpinorField, m: float = 1.0) -> VectorField:
    """(hbar/2m) curl(psi^dag sigma psi): the divergence-free spin term."""
    s = spin_density(f).values
    c = curl3(f.grid, s)
    return VectorField(f.grid, (0.5 * HBAR / m) * c.real)


def mita_current(f: SpinorField, m: float = 1.0) -> VectorField:
    """Half the spin current, (hbar/4m) curl(psi^dag sigma psi): the
    virtual current whose angular momentum integral returns the spin but
    whose moment integral carries g = 1 instead of g = 2."""
    js = spin_current(f, m)
    return VectorField(f.grid, 0.5 * js.values)


def decompose_current(f: SpinorField, p: EMPotential, t: float = 0.0,
                      q: float = -1.0, m: float = 1.0) -> CurrentDecomposition:
    grid = f.grid
    grad = _grad_spinor(f)
    conv = np.empty((3,) + grid.shape, dtype=float)
    for ax in range(3):
        z = (np.conj(f.data[0]) * grad[ax, 0] + np.conj(f.data[1]) * grad[ax, 1])
        z = z - np.conj(z)  # psi^dag grad psi - (grad psi)^dag psi
        jc = (-0.5j * HBAR / m) * z
        scale = max(1.0, float(np.max(np.abs(jc.real))))
        assert float(np.max(np.abs(jc.imag))) < _IMAG_RESIDUE_TOL * scale
        conv[ax] = jc.real

    rho = density(f).values
    gauge = np.zeros((3,) + grid.shape, dtype=float)
    a = p.a_vec(grid.coords3(), t)
    for ax in range(3):
        if np.isscalar(a[ax]) and a[ax] == 0.0:
            continue
        gauge[ax] = (-q / m) * a[ax] * rho

    spin = spin_current(f, m).values
    total = conv + gauge + spin
    return CurrentDecomposition(
        j_conv=VectorField(grid, conv),
        j_gauge=VectorField(grid, gauge),
        j_spin=VectorField(grid, spin),
        j_total=VectorField(grid, total),
    )


def _require_localized(f: SpinorField, tol: float = 1e-10):
    """Reject states whose boundary density is not negligible: the
    angular-momentum integrals below assume compact support."""
    rho = density(f).values
    peak = float(rho.max())
    for ax in range(f.grid.dim):
        edge = max(
            float(np.max(np.take(rho, 0, axis=ax))),
            float(np.max(np.take(rho, -1, axis=ax))),
        )
        if edge > tol * peak:
            raise ValueError(
                f"state is delocalized: boundary density {edge:g} exceeds "
                f"{tol:g} of peak {peak:g} on axis {ax}"
            )


def _moment_integral(f: SpinorField, j: np.ndarray) -> np.ndarray:
    """integral of r x j over the grid."""
    grid = f.grid
    r = grid.coords3()
    out = np.zeros(3)
    cross = (
        r[1] * j[2] - r[2] * j[1],
        r[2] * j[0] - r[0] * j[2],
        r[0] * j[1] - r[1] * j[0],
    )
    for ax in range(3):
        out[ax] = float(np.sum(cross[ax])) * grid.cell_volume
    return out


def spin_from_mita(f: SpinorField, m: float = 1.0) -> np.ndarray:
    """m * integral r x j_s: recovers <S> for localized states."""
    _require_localized(f)
    js = mita_current(f, m).values
    return m * _moment_integral(f, js)


def moment_from_spin_current(f: SpinorField, q: float = -1.0,
                             m: float = 1.0) -> np.ndarray:
    """(q/2) * integral r x j_spin: recovers <mu_s> for localized states,
    i.e. the spin current carries gyromagnetic factor 2; the same integral
    over the Mita current returns half."""
    _require_localized(f)
    js = spin_current(f, m).values
    return 0.5 * q * _moment_integral(f, js)


def auxiliary_spinor(f: SpinorField, p: EMPotential, t: float = 0.0,
                     q: float = -1.0, m: float = 1.0,
                     c: float = C_LIGHT) -> SpinorField:
    """chi = -(1/2mc) sigma.(p - qA) psi on the same grid."""
    grid = f.grid
    grad = _grad_spinor(f)
    sig_p = -1j * HBAR * (
        sigma_apply((1.0, 0.0, 0.0), grad[0])
        + sigma_apply((0.0, 1.0, 0.0), grad[1])
        + sigma_apply((0.0, 0.0, 1.0), grad[2])
    )
    a = p.a_vec(grid.coords3(), t)
    if not all(np.isscalar(ai) and ai == 0.0 for ai in a):
        sig_p = sig_p - q * sigma_apply(a, f.data)
    return SpinorField(grid, (-0.5 / (m * c)) * sig_p)


def levy_leblond_current(psi: SpinorField, chi: SpinorField,
                         c: float = C_LIGHT) -> VectorField:
    """J = -c (psi^dag sigma chi + chi^dag sigma psi), real by construction."""
    if psi.grid != chi.grid:
        raise ValueError("psi and chi must share a grid")
    grid = psi.grid
    out = np.empty((3,) + grid.shape, dtype=float)
    units = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
    for ax in range(3):
        sc = sigma_apply(units[ax], chi.data)
        z = np.conj(psi.data[0]) * sc[0] + np.conj(psi.data[1]) * sc[1]
        out[ax] = -2.0 * c * z.real
    return VectorField(grid, out)


def dual_route_max_diff(f: SpinorField, p: EMPotential, t: float = 0.0,
                        q: float = -1.0, m: float = 1.0) -> float:
    """Max-norm gap between the assembled current and the auxiliary-spinor
    current; an executable identity that should sit at roundoff."""
    dec = decompose_current(f, p, t, q, m)
    chi = auxiliary_spinor(f, p, t, q, m)
    jll = levy_leblond_current(f, chi)
    return float(np.max(np.abs(dec.j_total.values - jll.values)))


def levy_leblond_residual(bi: BispinorField, p: EMPotential, t: float = 0.0,
                          q: float = -1.0, m: float = 1.0, c: float = C_LIGHT,
                          dpsi_dt: SpinorField = None) -> float:
    """Max-norm residual of the coupled first-order system

        R1 = sigma.(p - qA) psi + 2mc chi
        R2 = c sigma.(p - qA) chi + (i hbar d/dt - q phi) psi,

    normalized by the max-norm of psi.  When dpsi_dt is omitted it is taken
    from the dynamics itself, (1/i hbar) H psi.
    """
    psi, chi = bi.psi, bi.chi
    grid = psi.grid
    if dpsi_dt is None:
        hpsi = apply_hamiltonian(psi, p, t, q, m)
        dpsi = SpinorField(grid, (-1j / HBAR) * hpsi.data)
    else:
        if dpsi_dt.grid != grid:
            raise ValueError("dpsi_dt grid mismatch")
        dpsi = dpsi_dt

    def sig_pi(g: SpinorField) -> np.ndarray:
        grad = _grad_spinor(g)
        out = -1j * HBAR * (
            sigma_apply((1.0, 0.0, 0.0), grad[0])
            + sigma_apply((0.0, 1.0, 0.0), grad[1])
            + sigma_apply((0.0, 0.0, 1.0), grad[2])
        )
        a = p.a_vec(grid.coords3(), t)
        if not all(np.isscalar(ai) and ai == 0.0 for ai in a):
            out = out - q * sigma_apply(a, g.data)
        return out

    r1 = sig_pi(psi) + 2.0 * m * c * chi.data
    phi = p.phi(grid.coords3(), t)
    r2 = c * sig_pi(chi) + 1j * HBAR * dpsi.data - (q * phi) * psi.data
    scale = float(np.max(np.abs(psi.data)))
    if scale == 0:
        return 0.0
    return max(float(np.max(np.abs(r1))), float(np.max(np.abs(r2)))) / scale


def continuity_residual(f: SpinorField, p: EMPotential, t: float = 0.0,
                        q: float = -1.0, m: float = 1.0,
                        include_spin: bool = True) -> ScalarField:
    """Pointwise d(rho)/dt + div J with the time derivative taken
    analytically through H, (2/hbar) Im(psi^dag H psi), so the check
    isolates spatial discretization from time stepping.  Omitting the spin
    term cannot change the result beyond roundoff (div curl = 0)."""
    grid = f.grid
    hpsi = apply_hamiltonian(f, p, t, q, m).data
    drho_dt = (2.0 / HBAR) * np.imag(
        np.conj(f.data[0]) * hpsi[0] + np.conj(f.data[1]) * hpsi[1]
    )
    dec = decompose_current(f, p, t, q, m)
    j = dec.j_total.values if include_spin else dec.j_conv.values + dec.j_gauge.values
    div = divergence3(grid, j.astype(complex)).real
    return ScalarField(grid, drho_dt + div)
