"""Electromagnetic potential presets, derived fields, gauge transformations.

Potentials are closed-form evaluators over coordinate arrays, not sampled
grids, so the minimal-coupling terms carry no interpolation error.  An
evaluator receives a 3-tuple of coordinates (absent axes are scalar zero)
and the time, and returns an array or a scalar per component.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

PRESET_PARAMS = {
    "Zero": (),
    "UniformBLandau": ("b0",),
    "UniformBSymmetric": ("b0",),
    "UniformE": ("e0",),
    "Harmonic": ("omega0", "q"),
}

VECTOR_PARAMS = {"e0"}


@dataclass
class EMPotential:
    """Scalar potential phi(r,t), vector potential A(r,t), optional
    closed-form B = curl A."""

    preset_name: str
    params: dict
    phi: Callable
    a_vec: Callable
    b_analytic: Optional[Callable] = None
    vector_potential_is_zero: bool = False


@dataclass
class GaugeFunction:
    """Scalar gauge function with consistent gradient and time derivative."""

    lam: Callable
    grad_lam: Callable
    dt_lam: Callable


def _zero_scalar(r, t):
    return 0.0


def _zero_vector(r, t):
    return (0.0, 0.0, 0.0)


def preset(name: str, **params) -> EMPotential:
    """Named potential preset.

    Zero:              phi = 0, A = 0.
    UniformBLandau:    A = (-b0*y, 0, 0), B = (0, 0, b0).
    UniformBSymmetric: A = (b0/2) z_hat x r, B = (0, 0, b0).
    UniformE:          phi = -e0 . r.
    Harmonic:          phi = omega0^2 |r|^2 / (2 q), so the potential
                       energy q*phi is the standard trap (m = 1) for any
                       charge.
    """
    if name not in PRESET_PARAMS:
        raise ValueError(f"unknown preset {name!r}")
    wanted = PRESET_PARAMS[name]
    for key in wanted:
        if key not in params:
            raise ValueError(f"preset {name!r} requires parameter {key!r}")
    for key in params:
        if key not in wanted:
            raise ValueError(f"preset {name!r} does not take parameter {key!r}")

    if name == "Zero":
        return EMPotential(name, {}, _zero_scalar, _zero_vector,
                           b_analytic=_zero_vector, vector_potential_is_zero=True)

    if name == "UniformBLandau":
        b0 = float(params["b0"])

        def a_vec(r, t, b0=b0):
            return (-b0 * r[1], 0.0, 0.0)

        def b_ana(r, t, b0=b0):
            return (0.0, 0.0, b0)

        return EMPotential(name, {"b0": b0}, _zero_scalar, a_vec, b_ana)

    if name == "UniformBSymmetric":
        b0 = float(params["b0"])

        def a_vec(r, t, b0=b0):
            return (-0.5 * b0 * r[1], 0.5 * b0 * r[0], 0.0)

        def b_ana(r, t, b0=b0):
            return (0.0, 0.0, b0)

        return EMPotential(name, {"b0": b0}, _zero_scalar, a_vec, b_ana)

    if name == "UniformE":
        e0 = tuple(float(v) for v in np.atleast_1d(params["e0"]))
        if len(e0) != 3:
            raise ValueError("parameter 'e0' must have 3 components")

        def phi(r, t, e0=e0):
            return -(e0[0] * r[0] + e0[1] * r[1] + e0[2] * r[2])

        return EMPotential(name, {"e0": e0}, phi, _zero_vector,
                           b_analytic=_zero_vector, vector_potential_is_zero=True)

    # Harmonic
    omega0 = float(params["omega0"])
    q = float(params["q"])
    if q == 0:
        raise ValueError("parameter 'q' must be nonzero for the Harmonic preset")

    def phi(r, t, w2=omega0 * omega0, q=q):
        r2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2]
        return 0.5 * w2 * r2 / q

    return EMPotential(name, {"omega0": omega0, "q": q}, phi, _zero_vector,
                       b_analytic=_zero_vector, vector_potential_is_zero=True)


def zeeman_uniform(b0: float) -> EMPotential:
    """Homogeneous magnetic field entered directly through b_analytic with
    A = 0: a model field for pure spin-precession studies, where the orbital
    coupling is deliberately absent (B here is not curl A)."""
    b0 = float(b0)

    def b_ana(r, t, b0=b0):
        return (0.0, 0.0, b0)

    return EMPotential("ZeemanUniform", {"b0": b0}, _zero_scalar, _zero_vector,
                       b_analytic=b_ana, vector_potential_is_zero=True)


def gauge_transform(p: EMPotential, g: GaugeFunction) -> EMPotential:
    """A' = A + grad(Lambda), phi' = phi - d(Lambda)/dt; B is unchanged."""

    def phi(r, t, p=p, g=g):
        return p.phi(r, t) - g.dt_lam(r, t)

    def a_vec(r, t, p=p, g=g):
        a = p.a_vec(r, t)
        gl = g.grad_lam(r, t)
        return tuple(a[i] + gl[i] for i in range(3))

    return EMPotential(
        preset_name=f"{p.preset_name}+gauge",
        params=dict(p.params),
        phi=phi,
        a_vec=a_vec,
        b_analytic=p.b_analytic,
        vector_potential_is_zero=False,
    )
