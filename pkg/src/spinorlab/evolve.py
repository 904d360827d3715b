"""Time propagation of the two-component dynamics.

Two schemes, chosen to keep both paths norm-safe without implicit solves:

  * SplitStep: Strang splitting exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2)
    for vector-potential-free problems.  T is spectral and spin-diagonal;
    V = q phi 1 - (q hbar/2m) sigma.B is applied through the closed-form
    2x2 exponential exp(-i theta sigma.n) = cos(theta) 1 - i sin(theta)
    sigma.n per grid point.  A space-dependent A cannot be absorbed in
    either basis, hence:

  * Krylov: matrix-free Arnoldi approximation of exp(-i H dt / hbar) psi
    for every preset.  H is Hermitian, so the projected propagator is
    evaluated through an eigendecomposition (unitary by construction) and
    the subspace grows until the standard a-posteriori estimate
    beta * h_{m+1,m} * |[exp(-i dt H_m)]_{m,1}| drops below tol * beta.
    No renormalization is applied anywhere; norm drift is a diagnostic.

Time-dependent potentials are evaluated at the step midpoint (second
order); all shipped presets are static.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .currents import continuity_residual, dual_route_max_diff
from .fields import EMPotential
from .state import (
    HBAR,
    SpinorField,
    apply_hamiltonian,
    expect_energy,
    expect_spin,
    norm,
    sigma_apply,
)


class PropagationError(RuntimeError):
    """A step failed to meet its accuracy contract; the run aborts."""


@dataclass
class PropagatorConfig:
    scheme: str  # "splitstep" | "krylov"
    dt: float
    krylov_dim: int = 48
    tol: float = 1e-10

    def __post_init__(self):
        scheme = self.scheme.lower()
        if scheme not in ("splitstep", "krylov"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        self.scheme = scheme
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.scheme == "krylov" and self.krylov_dim < 4:
            raise ValueError("krylov_dim must be at least 4")


def dt_heuristic(grid, m: float = 1.0) -> float:
    """Recorded guideline dt <= 0.25 m h^2 / (pi hbar); not enforced."""
    hmin = min(grid.h)
    return 0.25 * m * hmin * hmin / (np.pi * HBAR)


def _local_potential_step(f: SpinorField, p: EMPotential, t: float,
                          dt_half: float, q: float, m: float) -> np.ndarray:
    """exp(-i V dt_half / hbar) applied pointwise, V = q phi - (q hbar/2m) sigma.B."""
    grid = f.grid
    r3 = grid.coords3()
    psi = f.data
    phi = p.phi(r3, t)
    out = psi
    if not (np.isscalar(phi) and phi == 0.0):
        out = np.exp((-1j * q * dt_half / HBAR) * phi) * out
    b = p.b_analytic(r3, t) if p.b_analytic is not None else (0.0, 0.0, 0.0)
    if not all(np.isscalar(c) and c == 0.0 for c in b):
        w = tuple((-(q * HBAR) / (2.0 * m)) * np.asarray(c, dtype=float) for c in b)
        wn = np.sqrt(w[0] ** 2 + w[1] ** 2 + w[2] ** 2)
        theta = wn * dt_half / HBAR
        cos = np.cos(theta)
        # sin(theta)/|w| is finite at w = 0; guard the division.
        safe = np.where(wn > 0, wn, 1.0)
        sfac = np.where(wn > 0, np.sin(theta) / safe, dt_half / HBAR)
        nvec = tuple(w[i] * sfac for i in range(3))
        rot = cos * out - 1j * sigma_apply(nvec, out)
        out = rot
    return out if out is not psi else psi.copy()


def step_splitstep(f: SpinorField, p: EMPotential, t: float, dt: float,
                   q: float = -1.0, m: float = 1.0) -> SpinorField:
    """One Strang step; requires a vector-potential-free preset."""
    if not p.vector_potential_is_zero:
        raise ValueError(
            f"SplitStep requires A ≡ 0; preset {p.preset_name!r} has a vector potential"
        )
    grid = f.grid
    axes = tuple(range(-grid.dim, 0))
    tmid = t + 0.5 * dt
    data = _local_potential_step(f, p, tmid, 0.5 * dt, q, m)
    fhat = np.fft.fftn(data, axes=axes)
    fhat *= np.exp((-1j * HBAR * dt / (2.0 * m)) * grid.k_squared())
    data = np.fft.ifftn(fhat, axes=axes)
    data = _local_potential_step(SpinorField(grid, data), p, tmid, 0.5 * dt, q, m)
    return SpinorField(grid, data)


def step_krylov(f: SpinorField, p: EMPotential, t: float, dt: float,
                q: float = -1.0, m: float = 1.0,
                krylov_dim: int = 48, tol: float = 1e-10) -> SpinorField:
    """One Arnoldi step approximating exp(-i H dt / hbar) psi.

    tol is relative to the norm of the input vector.  Raises
    PropagationError if krylov_dim is exhausted before convergence.
    """
    grid = f.grid
    shape = f.data.shape
    v = f.data.ravel()
    beta = float(np.linalg.norm(v))
    if beta == 0.0:
        return f.copy()
    tmid = t + 0.5 * dt

    def matvec(x: np.ndarray) -> np.ndarray:
        g = SpinorField(grid, x.reshape(shape))
        return apply_hamiltonian(g, p, tmid, q, m).data.ravel()

    mmax = krylov_dim
    V = np.empty((mmax + 1, v.size), dtype=complex)
    H = np.zeros((mmax + 1, mmax), dtype=complex)
    V[0] = v / beta

    y = None
    mdim = 0
    converged = False
    for j in range(mmax):
        w = matvec(V[j])
        for i in range(j + 1):  # modified Gram-Schmidt
            H[i, j] = np.vdot(V[i], w)
            w -= H[i, j] * V[i]
        for i in range(j + 1):  # one reorthogonalization pass
            corr = np.vdot(V[i], w)
            H[i, j] += corr
            w -= corr * V[i]
        hnext = float(np.linalg.norm(w))
        mdim = j + 1
        Hm = H[:mdim, :mdim]
        Hm = 0.5 * (Hm + Hm.conj().T)  # H is Hermitian; strip Arnoldi roundoff
        evals, evecs = np.linalg.eigh(Hm)
        phases = np.exp((-1j * dt / HBAR) * evals)
        y = evecs @ (phases * np.conj(evecs[0]))
        if hnext <= 1e-14 * beta:  # invariant subspace: exact
            converged = True
            break
        err = hnext * abs(y[-1])
        if err <= tol:
            converged = True
            break
        H[j + 1, j] = hnext
        V[j + 1] = w / hnext
    if not converged:
        raise PropagationError(
            f"Krylov step at t={t:g} did not reach tol={tol:g} within "
            f"dimension {krylov_dim} (last estimate {err:g})"
        )
    u = beta * (V[:mdim].T @ y)
    return SpinorField(grid, u.reshape(shape))


@dataclass
class RunRecord:
    """Time series plus optional snapshots from one propagation run."""

    times: list = field(default_factory=list)
    columns: dict = field(default_factory=dict)
    snapshots: list = field(default_factory=list)  # (step, t, SpinorField)
    final_state: Optional[SpinorField] = None
    completed: bool = False
    failure: Optional[str] = None


SERIES_COLUMNS = (
    "norm", "Sx", "Sy", "Sz", "energy", "cont_residual_max", "dual_current_maxdiff",
)


def _series_row(f: SpinorField, p: EMPotential, t: float, q: float, m: float) -> dict:
    s = expect_spin(f)
    cont = continuity_residual(f, p, t, q, m)
    return {
        "norm": norm(f),
        "Sx": float(s[0]),
        "Sy": float(s[1]),
        "Sz": float(s[2]),
        "energy": expect_energy(f, p, t, q, m),
        "cont_residual_max": float(np.max(np.abs(cont.values))),
        "dual_current_maxdiff": dual_route_max_diff(f, p, t, q, m),
    }


def propagate(f0: SpinorField, p: EMPotential, cfg: PropagatorConfig,
              t0: float, t1: float, q: float = -1.0, m: float = 1.0,
              observers=(), snapshot_stride: int = 0,
              series_stride: int = 1) -> RunRecord:
    """Step f0 from t0 to t1, recording the standard observable series and
    snapshots on the configured strides.  (t1 - t0)/dt must be integral
    within rounding.  A failed step aborts with the partial record."""
    if t1 < t0:
        raise ValueError("t1 must not precede t0")
    span = t1 - t0
    nsteps_f = span / cfg.dt
    nsteps = int(round(nsteps_f))
    if abs(nsteps_f - nsteps) > 1e-9 * max(1.0, abs(nsteps_f)):
        raise ValueError(
            f"(t1 - t0)/dt = {nsteps_f!r} is not integral within rounding"
        )
    if cfg.scheme == "splitstep" and not p.vector_potential_is_zero:
        raise ValueError(
            f"SplitStep requires A ≡ 0; preset {p.preset_name!r} has a vector potential"
        )

    record = RunRecord(columns={k: [] for k in SERIES_COLUMNS})

    def observe(step: int, t: float, f: SpinorField):
        if series_stride > 0 and step % series_stride == 0:
            row = _series_row(f, p, t, q, m)
            record.times.append(t)
            for k in SERIES_COLUMNS:
                record.columns[k].append(row[k])
        if snapshot_stride > 0 and step % snapshot_stride == 0:
            record.snapshots.append((step, t, f.copy()))
        for cb in observers:
            cb(step, t, f)

    f = f0.copy()
    observe(0, t0, f)
    try:
        for step in range(1, nsteps + 1):
            t_prev = t0 + (step - 1) * cfg.dt
            if cfg.scheme == "splitstep":
                f = step_splitstep(f, p, t_prev, cfg.dt, q, m)
            else:
                f = step_krylov(f, p, t_prev, cfg.dt, q, m,
                                cfg.krylov_dim, cfg.tol)
            observe(step, t0 + step * cfg.dt, f)
    except PropagationError as exc:
        record.final_state = f
        record.failure = str(exc)
        return record
    record.final_state = f
    record.completed = True
    return record
