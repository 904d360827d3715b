"""Bohmian velocity fields and trajectory integration.

The velocity field is the current density over the density, v = J / rho,
floored at eps times the peak density; the floor (and the graceful
low-density termination) is an artifact decision, since the dynamics is
undefined at exact nodes.  Trajectories are classical RK4 integral curves
with multilinear space interpolation and linear time interpolation between
stored snapshots.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .currents import CurrentDecomposition, decompose_current
from .state import ScalarField, SpinorField, VectorField, density

COMPLETED = "completed"
LEFT_DOMAIN = "left_domain"
LOW_DENSITY = "low_density"
ARRIVED = "arrived"

_TERM_CODES = {COMPLETED: 0, LEFT_DOMAIN: 1, LOW_DENSITY: 2, ARRIVED: 3}

AXIS_NAMES = {"x": 0, "y": 1, "z": 2}


def thread_count() -> int:
    """Worker count for batch trajectory integration (results are
    deterministic at any setting)."""
    raw = os.environ.get("SPINORLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class Plane:
    """Axis-aligned arrival surface."""

    axis: int
    offset: float
    id: int = 0


@dataclass
class Trajectory:
    seed: np.ndarray
    samples: list  # (t, position(3), velocity(3))
    terminated: str
    surface_id: Optional[int] = None
    arrival_time: Optional[float] = None


@dataclass
class FlowSnapshot:
    t: float
    velocity: np.ndarray  # (3, *grid.shape)
    rho: np.ndarray
    floor: float  # eps * peak density


@dataclass
class FlowField:
    grid: object
    snapshots: list = field(default_factory=list)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.snapshots])


def velocity_field(dec: CurrentDecomposition, rho: ScalarField,
                   eps: float = 1e-6,
                   terms=("conv", "gauge", "spin")):
    """v = J / max(rho, eps * rho_peak); returns the field and the mask of
    low-density points.  `terms` selects which current contributions enter
    J (dropping "spin" demonstrates how the spin term moves matter)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    parts = {"conv": dec.j_conv, "gauge": dec.j_gauge, "spin": dec.j_spin}
    unknown = set(terms) - set(parts)
    if unknown:
        raise ValueError(f"unknown current terms {sorted(unknown)}")
    j = sum(parts[name].values for name in terms)
    floor = eps * float(rho.values.max())
    mask = rho.values < floor
    denom = np.maximum(rho.values, floor)
    return VectorField(dec.j_total.grid, j / denom), mask


def flow_from_states(states, p, q: float = -1.0, m: float = 1.0,
                     eps: float = 1e-6,
                     terms=("conv", "gauge", "spin")) -> FlowField:
    """Precompute velocity snapshots from (t, SpinorField) pairs."""
    if not states:
        raise ValueError("no states supplied")
    grid = states[0][1].grid
    flow = FlowField(grid=grid)
    last_t = None
    for t, f in states:
        if last_t is not None and t <= last_t:
            raise ValueError("snapshot times must be strictly increasing")
        last_t = t
        rho = density(f)
        dec = decompose_current(f, p, t, q, m)
        v, _ = velocity_field(dec, rho, eps, terms)
        flow.snapshots.append(
            FlowSnapshot(t=t, velocity=v.values, rho=rho.values,
                         floor=eps * float(rho.values.max()))
        )
    return flow


def _interp(grid, values: np.ndarray, pos: np.ndarray) -> np.ndarray:
    """Multilinear periodic interpolation.

    values: (..., *grid.shape); pos: (N, dim).  Returns (..., N).
    """
    dim = grid.dim
    u = np.empty((dim, pos.shape[0]))
    for ax in range(dim):
        u[ax] = (pos[:, ax] - grid.origin[ax]) / grid.h[ax]
    i0 = np.floor(u).astype(int)
    w = u - i0
    lead = values.shape[: values.ndim - dim]
    out = np.zeros(lead + (pos.shape[0],))
    for corner in range(1 << dim):
        idx = []
        weight = np.ones(pos.shape[0])
        for ax in range(dim):
            if corner >> ax & 1:
                idx.append((i0[ax] + 1) % grid.n[ax])
                weight = weight * w[ax]
            else:
                idx.append(i0[ax] % grid.n[ax])
                weight = weight * (1.0 - w[ax])
        out += values[(Ellipsis,) + tuple(idx)] * weight
    return out


def _flow_eval(flow: FlowField, t: float, pos: np.ndarray):
    """Velocity (3, N) and density (N,) and floor at time t, linearly
    interpolated between bracketing snapshots."""
    times = flow.times
    if t <= times[0]:
        lo = hi = 0
        theta = 0.0
    elif t >= times[-1]:
        lo = hi = len(times) - 1
        theta = 0.0
    else:
        hi = int(np.searchsorted(times, t, side="right"))
        lo = hi - 1
        theta = (t - times[lo]) / (times[hi] - times[lo])
    grid = flow.grid
    s_lo, s_hi = flow.snapshots[lo], flow.snapshots[hi]
    v = _interp(grid, s_lo.velocity, pos)
    rho = _interp(grid, s_lo.rho, pos)
    floor = s_lo.floor
    if hi != lo and theta > 0.0:
        v = (1.0 - theta) * v + theta * _interp(grid, s_hi.velocity, pos)
        rho = (1.0 - theta) * rho + theta * _interp(grid, s_hi.rho, pos)
        floor = (1.0 - theta) * s_lo.floor + theta * s_hi.floor
    return v, rho, floor


def _in_domain(grid, pos: np.ndarray) -> np.ndarray:
    ok = np.ones(pos.shape[0], dtype=bool)
    for ax in range(grid.dim):
        lo = grid.origin[ax]
        hi = lo + grid.extent[ax]
        ok &= (pos[:, ax] >= lo) & (pos[:, ax] < hi)
    return ok


def transport(flow: FlowField, seeds: np.ndarray, t0: float, t1: float,
              dt: float, surfaces=()):
    """Vectorized RK4 transport of many seeds at once.

    seeds: (N, dim) or (N, 3).  Returns (positions (N, 3), statuses (N,),
    velocities (N, 3), arrival info list of (surface_id, time) or None).
    Terminated seeds freeze in place.
    """
    grid = flow.grid
    dim = grid.dim
    seeds = np.atleast_2d(np.asarray(seeds, dtype=float))
    n = seeds.shape[0]
    pos = np.zeros((n, 3))
    pos[:, : seeds.shape[1]] = seeds
    status = np.full(n, _TERM_CODES[COMPLETED], dtype=int)
    active = np.ones(n, dtype=bool)
    arrivals = [None] * n

    nsteps = max(1, int(round((t1 - t0) / dt)))
    dt = (t1 - t0) / nsteps if t1 > t0 else 0.0
    vel = np.zeros((n, 3))

    def eval_v(t, pts):
        v, rho, floor = _flow_eval(flow, t, pts[:, :dim])
        return v.T, rho, floor  # (N,3) after transpose of (3,N)

    t = t0
    v0, rho, floor = eval_v(t, pos)
    vel[:] = v0
    low = rho < floor
    status[low] = _TERM_CODES[LOW_DENSITY]
    active &= ~low

    for _ in range(nsteps):
        if not active.any() or dt == 0.0:
            break
        idx = np.where(active)[0]
        pts = pos[idx]
        k1, _, _ = eval_v(t, pts)
        k2, _, _ = eval_v(t + 0.5 * dt, pts + 0.5 * dt * k1)
        k3, _, _ = eval_v(t + 0.5 * dt, pts + 0.5 * dt * k2)
        k4, _, _ = eval_v(t + dt, pts + dt * k3)
        new = pts + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += dt

        for surf in surfaces:
            before = pts[:, surf.axis] - surf.offset
            after = new[:, surf.axis] - surf.offset
            crossed = (before * after < 0) | (after == 0)
            for j in np.where(crossed)[0]:
                frac = before[j] / (before[j] - after[j])
                arrivals[idx[j]] = (surf.id, t - dt + frac * dt)
                status[idx[j]] = _TERM_CODES[ARRIVED]
        arrived = status[idx] == _TERM_CODES[ARRIVED]

        inside = _in_domain(grid, new)
        vnew, rho, floor = eval_v(t, new)
        low = rho < floor

        pos[idx] = new
        vel[idx] = vnew
        status[idx[~inside & ~arrived]] = _TERM_CODES[LEFT_DOMAIN]
        status[idx[inside & low & ~arrived]] = _TERM_CODES[LOW_DENSITY]
        active[idx] = inside & ~low & ~arrived

    return pos, status, vel, arrivals


def integrate_trajectory(flow: FlowField, seed, t0: float, t1: float,
                         dt_traj: float, surfaces=(),
                         sample_stride: int = 1) -> Trajectory:
    """Single-seed RK4 integral curve with recorded samples."""
    grid = flow.grid
    dim = grid.dim
    seed = np.atleast_1d(np.asarray(seed, dtype=float))
    pos3 = np.zeros(3)
    pos3[: seed.shape[0]] = seed
    if not _in_domain(grid, pos3[None, :])[0]:
        raise ValueError("seed lies outside the domain")

    nsteps = max(1, int(round((t1 - t0) / dt_traj)))
    dt = (t1 - t0) / nsteps
    samples = []
    pos = pos3[None, :].copy()
    term = COMPLETED
    surface_id = None
    arrival_time = None

    def eval_v(t, pts):
        v, rho, floor = _flow_eval(flow, t, pts[:, :dim])
        return v.T, rho, floor

    t = t0
    v, rho, floor = eval_v(t, pos)
    if rho[0] < floor:
        return Trajectory(seed=pos3, samples=[(t0, pos3.copy(), v[0].copy())],
                          terminated=LOW_DENSITY)
    samples.append((t, pos3.copy(), v[0].copy()))

    for step in range(1, nsteps + 1):
        k1, _, _ = eval_v(t, pos)
        k2, _, _ = eval_v(t + 0.5 * dt, pos + 0.5 * dt * k1)
        k3, _, _ = eval_v(t + 0.5 * dt, pos + 0.5 * dt * k2)
        k4, _, _ = eval_v(t + dt, pos + dt * k3)
        new = pos + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t0 + step * dt

        stop = False
        for surf in surfaces:
            before = pos[0, surf.axis] - surf.offset
            after = new[0, surf.axis] - surf.offset
            if before * after < 0 or after == 0:
                frac = before / (before - after)
                term = ARRIVED
                surface_id = surf.id
                arrival_time = t - dt + frac * dt
                stop = True
                break
        pos = new
        v, rho, floor = eval_v(t, pos)
        if not stop and not _in_domain(grid, pos)[0]:
            term = LEFT_DOMAIN
            stop = True
        if not stop and rho[0] < floor:
            term = LOW_DENSITY
            stop = True
        if sample_stride > 0 and (step % sample_stride == 0 or stop or step == nsteps):
            samples.append((t, pos[0].copy(), v[0].copy()))
        if stop:
            break

    return Trajectory(seed=pos3, samples=samples, terminated=term,
                      surface_id=surface_id, arrival_time=arrival_time)


def arrival_times(trajs, surface: Plane):
    """First crossing time of each trajectory through the surface, by sign
    change along the axis with linear interpolation; None if never."""
    out = []
    for traj in trajs:
        hit = None
        if traj.surface_id == surface.id and traj.arrival_time is not None:
            hit = traj.arrival_time
        else:
            for (ta, pa, _), (tb, pb, _) in zip(traj.samples, traj.samples[1:]):
                fa = pa[surface.axis] - surface.offset
                fb = pb[surface.axis] - surface.offset
                if fa * fb < 0 or fb == 0:
                    frac = fa / (fa - fb) if fa != fb else 0.0
                    hit = ta + frac * (tb - ta)
                    break
        out.append((traj.seed, hit))
    return out


def sample_density(grid, rho: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n positions from the cell-wise density: cells with probability
    proportional to rho * h^dim, uniform jitter inside each cell."""
    flat = np.asarray(rho, dtype=float).ravel()
    prob = flat / flat.sum()
    cells = rng.choice(flat.size, size=n, p=prob)
    idx = np.unravel_index(cells, grid.shape)
    pos = np.zeros((n, 3))
    for ax in range(grid.dim):
        jitter = rng.random(n)
        pos[:, ax] = grid.origin[ax] + (idx[ax] + jitter) * grid.h[ax]
    return pos
