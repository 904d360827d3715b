"""Command-line entry points.

Subcommands: verify, simulate <cfg>, analyze <dir> [--omit-spin],
trajectories <dir> <cfg>.  Exit codes: 0 success, 1 validation error,
2 numerical failure, 3 I/O error.  Outputs are bit-identical across
repeated runs with the same config on the same machine.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import algebra, bohm, dumps, fields
from .currents import continuity_residual, dual_route_max_diff
from .evolve import PropagationError, dt_heuristic, propagate
from .simconfig import (
    ConfigError,
    build_grid,
    build_initial_state,
    build_potential,
    build_propagator,
    load_config,
)
from .state import density, expect_moment, expect_spin, norm

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3

SERIES_HEADER = ["t", "norm", "Sx", "Sy", "Sz", "energy",
                 "cont_residual_max", "dual_current_maxdiff"]
ANALYZE_HEADER = ["t", "norm", "Sx", "Sy", "Sz", "mux", "muy", "muz",
                  "cont_residual_max", "dual_current_maxdiff"]
TRAJ_HEADER = ["t", "x", "y", "z", "vx", "vy", "vz"]
ARRIVAL_HEADER = ["seed_x", "seed_y", "seed_z", "t_arrival"]


def _theta_symbol_check(rep, draws: int = 1000, tol: float = 1e-12):
    """Max entrywise |theta(k,w)^2 - (k^2 - 2w) I| over random draws."""
    rng = np.random.default_rng(1234)
    worst = 0.0
    ident = np.eye(4)
    for _ in range(draws):
        k = rng.uniform(-5.0, 5.0, size=3)
        w = rng.uniform(-5.0, 5.0)
        theta = algebra.theta_symbol(rep, k, w, mass=1.0)
        resid = theta @ theta - (k @ k - 2.0 * w) * ident
        worst = max(worst, float(np.max(np.abs(resid))))
    return worst, worst < tol


def run_verify(args) -> int:
    kinds = ("original", "convenient")
    if args.rep:
        kinds = (args.rep,)
    total = passed = 0
    any_fail = False

    for kind in kinds:
        for a in algebra.STANDARD_A_SWEEP:
            rep = algebra.dirac_rep(kind, a)
            if args.tamper == "B5" and kind == kinds[0] and a == algebra.STANDARD_A_SWEEP[0]:
                b = rep.b[:4] + (rep.b[3],)  # break B5 on purpose
                rep = algebra.assemble_rep(kind, b, a)
            lin = algebra.check_linearization_conditions(rep)
            dirac = algebra.check_dirac_algebra(rep.b, label=f"{lin.label}: Dirac algebra")
            verbose = a == algebra.STANDARD_A_SWEEP[0] and rep.b5_sign == 1
            for report in (lin, dirac):
                total += report.gated_count
                passed += report.passed_count
                if not report.all_passed:
                    any_fail = True
                    print(report.format())
                elif verbose:
                    print(report.format())
                else:
                    print(f"[{report.label}]  {report.passed_count}/{report.gated_count} conditions pass")
        alt = algebra.dirac_rep(kind, algebra.STANDARD_A_SWEEP[0], b5_sign=-1)
        for report in (
            algebra.check_linearization_conditions(alt),
            algebra.check_dirac_algebra(alt.b, label=f"{kind}, alternate B5 sign: Dirac algebra"),
        ):
            total += report.gated_count
            passed += report.passed_count
            if not report.all_passed:
                any_fail = True
                print(report.format())
            else:
                print(f"[{report.label}]  {report.passed_count}/{report.gated_count} conditions pass")

        worst, ok = _theta_symbol_check(algebra.dirac_rep(kind, a=algebra.STANDARD_A_SWEEP[0]))
        total += 1
        passed += 1 if ok else 0
        status = "PASS" if ok else "FAIL"
        print(f"[{kind}] theta symbol square, 1000 draws  {status}  max|resid| = {worst:.3g} (tol 1e-12)")
        if not ok:
            any_fail = True

    print(f"\n{passed}/{total} conditions pass")
    return EXIT_NUMERICAL if any_fail else EXIT_OK


def run_simulate(config_path) -> int:
    cfg = load_config(config_path)
    grid = build_grid(cfg)
    potential = build_potential(cfg)
    f0 = build_initial_state(cfg, grid)
    prop = build_propagator(cfg)
    print(f"dt = {dumps.fmt(prop.dt)}  (heuristic bound {dumps.fmt(dt_heuristic(grid))})")

    record = propagate(f0, potential, prop, 0.0, cfg.t_end, q=cfg.q,
                       snapshot_stride=cfg.snapshot_stride)

    os.makedirs(os.path.dirname(os.path.abspath(cfg.series_path)), exist_ok=True)
    rows = []
    for i, t in enumerate(record.times):
        rows.append([t] + [record.columns[k][i] for k in SERIES_HEADER[1:]])
    dumps.write_csv(cfg.series_path, SERIES_HEADER, rows)
    print(f"wrote {cfg.series_path} ({len(rows)} rows)")

    if cfg.snapshot_stride > 0:
        os.makedirs(cfg.dump_dir, exist_ok=True)
        for step, t, f in record.snapshots:
            path = os.path.join(cfg.dump_dir, f"snap_{step:06d}.dump")
            dumps.write_spinor_dump(path, f, t, q=cfg.q, potential=potential)
        print(f"wrote {len(record.snapshots)} snapshots to {cfg.dump_dir}")

    if not record.completed:
        print(f"run aborted: {record.failure}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _sorted_dumps(dump_dir):
    try:
        names = sorted(n for n in os.listdir(dump_dir) if n.endswith(".dump"))
    except OSError as exc:
        raise exc
    if not names:
        raise dumps.DumpError(f"no .dump files in {dump_dir}")
    return [os.path.join(dump_dir, n) for n in names]


def run_analyze(dump_dir, omit_spin: bool = False, out_path=None,
                dump_currents=None) -> int:
    paths = _sorted_dumps(dump_dir)
    rows = []
    potential = None
    for path in paths:
        f, meta = dumps.read_spinor_dump(path)
        if potential is None:
            potential = dumps.potential_from_meta(meta)
        q, m, t = meta["q"], meta["mass"], meta["time"]
        s = expect_spin(f)
        mu = expect_moment(f, q, m)
        cont = continuity_residual(f, potential, t, q, m,
                                   include_spin=not omit_spin)
        rows.append([
            t, norm(f), s[0], s[1], s[2], mu[0], mu[1], mu[2],
            float(np.max(np.abs(cont.values))),
            dual_route_max_diff(f, potential, t, q, m),
        ])
        if dump_currents:
            from .currents import decompose_current

            os.makedirs(dump_currents, exist_ok=True)
            dec = decompose_current(f, potential, t, q, m)
            base = os.path.splitext(os.path.basename(path))[0]
            dumps.write_vector_dump(
                os.path.join(dump_currents, f"{base}_jtotal.dump"),
                dec.j_total, t, q, m, potential)
    out_path = out_path or os.path.join(dump_dir, "analysis.csv")
    dumps.write_csv(out_path, ANALYZE_HEADER, rows)
    print(f"wrote {out_path} ({len(rows)} rows)")
    return EXIT_OK


def run_trajectories(dump_dir, config_path) -> int:
    cfg = load_config(config_path)
    tp = cfg.trajectories
    if tp is None:
        raise ConfigError("config has no [trajectories] section")
    paths = _sorted_dumps(dump_dir)
    states = []
    potential = None
    q = m = None
    for path in paths:
        f, meta = dumps.read_spinor_dump(path)
        if potential is None:
            potential = dumps.potential_from_meta(meta)
            q, m = meta["q"], meta["mass"]
        states.append((meta["time"], f))
    states.sort(key=lambda pair: pair[0])
    if len(states) < 2:
        raise dumps.DumpError("need at least two snapshots for trajectories")

    flow = bohm.flow_from_states(states, potential, q, m, eps=tp.eps)
    t0 = tp.t0 if tp.t0 is not None else states[0][0]
    t1 = tp.t1 if tp.t1 is not None else states[-1][0]
    dt = tp.dt if tp.dt is not None else cfg.dt
    surfaces = ()
    if tp.arrival_axis is not None:
        surfaces = (bohm.Plane(axis=tp.arrival_axis, offset=tp.arrival_offset),)

    rng = np.random.default_rng(tp.seed)
    rho0 = density(states[0][1]).values
    seeds = bohm.sample_density(flow.grid, rho0, tp.n_seeds, rng)

    out_dir = tp.out_dir or os.path.join(dump_dir, "trajectories")
    os.makedirs(out_dir, exist_ok=True)

    def integrate(i_seed):
        i, seed = i_seed
        traj = bohm.integrate_trajectory(
            flow, seed[: flow.grid.dim], t0, t1, dt, surfaces=surfaces,
            sample_stride=tp.sample_stride)
        return i, traj

    workers = bohm.thread_count()
    items = list(enumerate(seeds))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(integrate, items))
    else:
        results = [integrate(item) for item in items]
    results.sort(key=lambda pair: pair[0])

    trajs = []
    for i, traj in results:
        trajs.append(traj)
        rows = [[t, pos[0], pos[1], pos[2], vel[0], vel[1], vel[2]]
                for t, pos, vel in traj.samples]
        dumps.write_csv(os.path.join(out_dir, f"traj_{i:05d}.csv"),
                        TRAJ_HEADER, rows)

    if surfaces:
        hits = bohm.arrival_times(trajs, surfaces[0])
        with open(os.path.join(out_dir, "arrivals.csv"), "w",
                  encoding="ascii", newline="\n") as fh:
            fh.write(",".join(ARRIVAL_HEADER) + "\n")
            for seed, t_hit in hits:
                cell = dumps.fmt(t_hit) if t_hit is not None else "none"
                fh.write(",".join(dumps.fmt(v) for v in seed) + f",{cell}\n")
        print(f"wrote {os.path.join(out_dir, 'arrivals.csv')}")
    print(f"wrote {len(trajs)} trajectory files to {out_dir}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinorlab",
        description="Spin-1/2 wave-packet laboratory: exact algebra checks, "
                    "spectral propagation, current decompositions, Bohmian "
                    "trajectories.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the exact-algebra identity suite")
    p_verify.add_argument("--rep", choices=("original", "convenient"),
                          help="restrict to one representation")
    p_verify.add_argument("--tamper", choices=("B5",),
                          help="test hook: break the named matrix on purpose")

    p_sim = sub.add_parser("simulate", help="propagate a configured run")
    p_sim.add_argument("config")

    p_ana = sub.add_parser("analyze", help="per-snapshot observables from dumps")
    p_ana.add_argument("dump_dir")
    p_ana.add_argument("--omit-spin", action="store_true",
                       help="drop the spin term from the continuity residual")
    p_ana.add_argument("--out", default=None, help="output CSV path")
    p_ana.add_argument("--dump-currents", default=None,
                       help="also dump total-current vector fields here")

    p_traj = sub.add_parser("trajectories", help="integrate Bohmian trajectories from dumps")
    p_traj.add_argument("dump_dir")
    p_traj.add_argument("config")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return run_verify(args)
        if args.command == "simulate":
            return run_simulate(args.config)
        if args.command == "analyze":
            return run_analyze(args.dump_dir, omit_spin=args.omit_spin,
                               out_path=args.out, dump_currents=args.dump_currents)
        if args.command == "trajectories":
            return run_trajectories(args.dump_dir, args.config)
        raise AssertionError(f"unhandled command {args.command!r}")
    except dumps.DumpError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except PropagationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
