"""Flat `key = value` run configuration with [section] headers.

Strict: unknown sections or keys are errors that name the offender, and a
parse -> validate round trip is lossless.  Comments start with '#' or ';'.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field as dc_field
from typing import Optional

from . import fields
from .evolve import PropagatorConfig
from .grids import Grid, make_grid
from .state import SpinorField, init_gaussian


class ConfigError(ValueError):
    pass


@dataclass
class TrajectoryParams:
    n_seeds: int = 100
    dt: Optional[float] = None  # default: propagator dt
    eps: float = 1e-6
    seed: int = 0
    t0: Optional[float] = None
    t1: Optional[float] = None
    arrival_axis: Optional[int] = None
    arrival_offset: float = 0.0
    sample_stride: int = 1
    out_dir: Optional[str] = None


@dataclass
class SimConfig:
    q: float
    dim: int
    n: tuple
    extent: tuple
    origin: Optional[tuple]
    center: tuple
    width: tuple
    momentum: tuple
    spinor: tuple
    preset_name: str
    preset_params: dict
    scheme: str
    dt: float
    t_end: float
    krylov_dim: int
    krylov_tol: float
    series_path: str
    snapshot_stride: int
    dump_dir: Optional[str]
    trajectories: Optional[TrajectoryParams] = None
    raw: dict = dc_field(default_factory=dict)


_SECTIONS = ("units", "grid", "initial", "potential", "propagator", "output",
             "trajectories")


def _floats(raw: str, count: int, section: str, key: str):
    vals = raw.split()
    if len(vals) != count:
        raise ConfigError(
            f"key '{key}' in [{section}] needs {count} value(s), got {len(vals)}"
        )
    try:
        return tuple(float(v) for v in vals)
    except ValueError:
        raise ConfigError(f"key '{key}' in [{section}] is not numeric: {raw!r}") from None


def _one_float(raw: str, section: str, key: str) -> float:
    return _floats(raw, 1, section, key)[0]


def _one_int(raw: str, section: str, key: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"key '{key}' in [{section}] is not an integer: {raw!r}") from None


def _take(sec: dict, section: str, key: str, required: bool = True, default=None):
    if key in sec:
        return sec.pop(key)
    if required:
        raise ConfigError(f"missing key '{key}' in [{section}]")
    return default


def _reject_leftovers(sec: dict, section: str):
    if sec:
        key = sorted(sec)[0]
        raise ConfigError(f"unknown key '{key}' in [{section}]")


def load_config(path) -> SimConfig:
    parser = configparser.ConfigParser(
        interpolation=None, strict=True, delimiters=("=",),
        comment_prefixes=("#", ";"),
    )
    parser.optionxform = str
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh, source=str(path))
    except OSError:
        raise
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None

    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
    for section in ("grid", "initial", "potential", "propagator", "output"):
        if not parser.has_section(section):
            raise ConfigError(f"missing section [{section}]")

    raw = {s: dict(parser.items(s)) for s in parser.sections()}

    units = dict(raw.get("units", {}))
    q = _one_float(_take(units, "units", "q", required=False, default="-1.0"),
                   "units", "q")
    _reject_leftovers(units, "units")

    grid_sec = dict(raw["grid"])
    dim = _one_int(_take(grid_sec, "grid", "dim"), "grid", "dim")
    if dim not in (1, 2, 3):
        raise ConfigError("key 'dim' in [grid] must be 1, 2, or 3")
    n_raw = _take(grid_sec, "grid", "n").split()
    if len(n_raw) != dim:
        raise ConfigError(f"key 'n' in [grid] needs {dim} value(s)")
    n = tuple(_one_int(v, "grid", "n") for v in n_raw)
    extent = _floats(_take(grid_sec, "grid", "extent"), dim, "grid", "extent")
    origin_raw = _take(grid_sec, "grid", "origin", required=False)
    origin = _floats(origin_raw, dim, "grid", "origin") if origin_raw else None
    _reject_leftovers(grid_sec, "grid")

    init_sec = dict(raw["initial"])
    center = _floats(_take(init_sec, "initial", "center"), dim, "initial", "center")
    width_raw = _take(init_sec, "initial", "width").split()
    if len(width_raw) not in (1, dim):
        raise ConfigError(f"key 'width' in [initial] needs 1 or {dim} value(s)")
    width = tuple(_one_float(v, "initial", "width") for v in width_raw)
    if len(width) == 1:
        width = width * dim
    momentum = _floats(_take(init_sec, "initial", "momentum"), dim,
                       "initial", "momentum")
    spinor_raw = _take(init_sec, "initial", "spinor").split()
    if len(spinor_raw) != 2:
        raise ConfigError("key 'spinor' in [initial] needs 2 complex values")
    try:
        spinor = tuple(complex(v) for v in spinor_raw)
    except ValueError:
        raise ConfigError(
            f"key 'spinor' in [initial] is not complex-valued: {spinor_raw!r}"
        ) from None
    _reject_leftovers(init_sec, "initial")

    pot_sec = dict(raw["potential"])
    preset_name = _take(pot_sec, "potential", "preset")
    if preset_name not in fields.PRESET_PARAMS:
        raise ConfigError(f"unknown preset {preset_name!r} in [potential]")
    preset_params = {}
    for key in fields.PRESET_PARAMS[preset_name]:
        if key == "q":
            preset_params["q"] = q
            continue
        raw_val = _take(pot_sec, "potential", key)
        if key in fields.VECTOR_PARAMS:
            preset_params[key] = _floats(raw_val, 3, "potential", key)
        else:
            preset_params[key] = _one_float(raw_val, "potential", key)
    _reject_leftovers(pot_sec, "potential")

    prop_sec = dict(raw["propagator"])
    scheme_raw = _take(prop_sec, "propagator", "scheme")
    scheme = scheme_raw.lower()
    if scheme not in ("splitstep", "krylov"):
        raise ConfigError(f"unknown scheme {scheme_raw!r} in [propagator]")
    dt = _one_float(_take(prop_sec, "propagator", "dt"), "propagator", "dt")
    if dt <= 0:
        raise ConfigError("key 'dt' in [propagator] must be positive")
    t_end = _one_float(_take(prop_sec, "propagator", "t_end"), "propagator", "t_end")
    if t_end < 0:
        raise ConfigError("key 't_end' in [propagator] must be nonnegative")
    krylov_dim = _one_int(
        _take(prop_sec, "propagator", "krylov_dim", required=False, default="48"),
        "propagator", "krylov_dim")
    krylov_tol = _one_float(
        _take(prop_sec, "propagator", "krylov_tol", required=False, default="1e-10"),
        "propagator", "krylov_tol")
    _reject_leftovers(prop_sec, "propagator")

    if scheme == "splitstep" and preset_name in ("UniformBLandau", "UniformBSymmetric"):
        raise ConfigError(
            f"SplitStep requires A ≡ 0; preset {preset_name!r} has a vector potential"
        )

    out_sec = dict(raw["output"])
    series_path = _take(out_sec, "output", "series")
    snapshot_stride = _one_int(
        _take(out_sec, "output", "snapshot_stride", required=False, default="0"),
        "output", "snapshot_stride")
    if snapshot_stride < 0:
        raise ConfigError("key 'snapshot_stride' in [output] must be >= 0")
    dump_dir = _take(out_sec, "output", "dump_dir",
                     required=snapshot_stride > 0)
    _reject_leftovers(out_sec, "output")

    traj = None
    if "trajectories" in raw:
        tr_sec = dict(raw["trajectories"])
        traj = TrajectoryParams()
        traj.n_seeds = _one_int(
            _take(tr_sec, "trajectories", "n_seeds", required=False, default="100"),
            "trajectories", "n_seeds")
        dt_raw = _take(tr_sec, "trajectories", "dt", required=False)
        traj.dt = _one_float(dt_raw, "trajectories", "dt") if dt_raw else None
        traj.eps = _one_float(
            _take(tr_sec, "trajectories", "eps", required=False, default="1e-6"),
            "trajectories", "eps")
        traj.seed = _one_int(
            _take(tr_sec, "trajectories", "seed", required=False, default="0"),
            "trajectories", "seed")
        for name in ("t0", "t1"):
            v = _take(tr_sec, "trajectories", name, required=False)
            setattr(traj, name, _one_float(v, "trajectories", name) if v else None)
        axis_raw = _take(tr_sec, "trajectories", "arrival_axis", required=False)
        if axis_raw is not None:
            axis_raw = axis_raw.strip().lower()
            if axis_raw not in ("x", "y", "z"):
                raise ConfigError(
                    "key 'arrival_axis' in [trajectories] must be x, y, or z")
            traj.arrival_axis = {"x": 0, "y": 1, "z": 2}[axis_raw]
            traj.arrival_offset = _one_float(
                _take(tr_sec, "trajectories", "arrival_offset"),
                "trajectories", "arrival_offset")
        traj.sample_stride = _one_int(
            _take(tr_sec, "trajectories", "sample_stride", required=False, default="1"),
            "trajectories", "sample_stride")
        traj.out_dir = _take(tr_sec, "trajectories", "out_dir", required=False)
        _reject_leftovers(tr_sec, "trajectories")

    return SimConfig(
        q=q, dim=dim, n=n, extent=extent, origin=origin,
        center=center, width=width, momentum=momentum, spinor=spinor,
        preset_name=preset_name, preset_params=preset_params,
        scheme=scheme, dt=dt, t_end=t_end,
        krylov_dim=krylov_dim, krylov_tol=krylov_tol,
        series_path=series_path, snapshot_stride=snapshot_stride,
        dump_dir=dump_dir, trajectories=traj, raw=raw,
    )


def build_grid(cfg: SimConfig) -> Grid:
    return make_grid(cfg.n, cfg.extent, cfg.origin)


def build_potential(cfg: SimConfig) -> "fields.EMPotential":
    return fields.preset(cfg.preset_name, **cfg.preset_params)


def build_initial_state(cfg: SimConfig, grid: Grid) -> SpinorField:
    return init_gaussian(grid, cfg.center, cfg.width, cfg.momentum, cfg.spinor)


def build_propagator(cfg: SimConfig) -> PropagatorConfig:
    return PropagatorConfig(scheme=cfg.scheme, dt=cfg.dt,
                            krylov_dim=cfg.krylov_dim, tol=cfg.krylov_tol)
