"""Command-line front end emitting CSV/JSON artifacts for every experiment.

Each subcommand validates its parameters, runs the corresponding library
operation, and writes a flat, plot-ready table either to stdout or to
--out PATH.  CSV artifacts carry the full effective configuration as
``# key=value`` header lines; JSON artifacts mirror the rows as an array
of records plus config and metadata objects.  All floats are printed with
17 significant digits so that artifacts round-trip losslessly.

Exit status: 0 success, 2 usage/validation error, 3 numerical failure,
4 nothing found (e.g. no adjacency seed in the requested range).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .adjacency import chain as adjacency_chain
from .adjacency import AdjacencySeed, find_seed
from .lax import IsoFamily, isomonodromy_drift, zero_curvature_report
from .monodromy import monodromy_loop
from .odeint import Tolerances
from .painleve import bessel_w, params_from_b, p3_residual_report
from .rotation import JosephsonParams, rotation_number, scan_grid, trace_boundary
from .specfun import BesselCombo

__all__ = ["main", "entrypoint"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_NOT_FOUND = 4


class UsageError(Exception):
    """Parameter validation failure; maps to exit status 2."""


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def _parse_pair(text: str, flag: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise UsageError(f"{flag} expects lo:hi, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from exc
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise UsageError(f"{flag} needs finite lo < hi, got {text!r}")
    return lo, hi


def _parse_grid(text: str, flag: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"{flag} expects lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from exc
    if n < 1:
        raise UsageError(f"{flag}: grid needs n >= 1, got {n}")
    if n > 1 and hi <= lo:
        raise UsageError(f"{flag} needs lo < hi for n > 1, got {text!r}")
    return np.linspace(lo, hi, n)


def _tolerances(args) -> Tolerances | None:
    if args.tol is None:
        return None
    if not (0 < args.tol < 1):
        raise UsageError(f"--tol must be in (0, 1), got {args.tol}")
    return Tolerances(abs_tol=args.tol, rel_tol=args.tol)


def _tol_metadata(tol: Tolerances | None) -> dict:
    eff = tol if tol is not None else Tolerances(abs_tol=1e-10, rel_tol=1e-10)
    return {"abs_tol": eff.abs_tol, "rel_tol": eff.rel_tol}


def _write_artifact(args, config: dict, metadata: dict, columns, rows) -> None:
    metadata = dict(metadata)
    metadata["version"] = __version__
    if args.format == "csv":
        lines = [f"# {k}={_fmt(v) if isinstance(v, (int, float, np.floating, np.integer)) else v}"
                 for k, v in {**config, **metadata}.items()]
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(v) if not isinstance(v, str) else v for v in row))
        text = "\n".join(lines) + "\n"
    else:
        metadata["wall_time_s"] = round(time.time() - args._t0, 6)
        records = [
            {c: (v if isinstance(v, str) else (int(v) if isinstance(v, (int, np.integer)) else float(v)))
             for c, v in zip(columns, row)}
            for row in rows
        ]
        text = json.dumps(
            {"config": config, "metadata": metadata, "records": records},
            indent=2, sort_keys=True,
        ) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_rotnum(args):
    if args.omega <= 0:
        raise UsageError("--omega must be positive")
    tol = _tolerances(args)
    params = JosephsonParams(b=args.b, a=args.a, omega=args.omega)
    est = rotation_number(params) if tol is None else rotation_number(params, tol=tol)
    config = {"command": "rotnum", "b": args.b, "a": args.a, "omega": args.omega,
              "format": args.format}
    metadata = _tol_metadata(tol)
    rows = [(args.b, args.a, args.omega, est.rho, est.error_estimate)]
    return config, metadata, ("b", "a", "omega", "rho", "err"), rows


def _cmd_scan(args):
    if args.omega <= 0:
        raise UsageError("--omega must be positive")
    b_grid = _parse_grid(args.grid_b, "--grid-b")
    a_grid = _parse_grid(args.grid_a, "--grid-a")
    tol = _tolerances(args)
    grid = (scan_grid(b_grid, a_grid, args.omega) if tol is None
            else scan_grid(b_grid, a_grid, args.omega, tol=tol))
    rows = []
    for i, b in enumerate(grid.b_values):
        for j, a in enumerate(grid.a_values):
            rows.append((b, a, args.omega, grid.rho[i, j], grid.error[i, j]))
    config = {"command": "scan", "grid_b": args.grid_b, "grid_a": args.grid_a,
              "omega": args.omega, "format": args.format}
    return config, _tol_metadata(tol), ("b", "a", "omega", "rho", "err"), rows


def _cmd_boundary(args):
    if args.omega <= 0:
        raise UsageError("--omega must be positive")
    if args.r < 0:
        raise UsageError("--r must be a nonnegative integer")
    a_grid = _parse_grid(args.grid_a, "--grid-a")
    tol = _tolerances(args)
    curve = (trace_boundary(args.r, args.side, a_grid, args.omega) if tol is None
             else trace_boundary(args.r, args.side, a_grid, args.omega, tol=tol))
    rows = [(curve.r, curve.side, a, b)
            for a, b in zip(curve.a_values, curve.b_values)]
    config = {"command": "boundary", "r": args.r, "side": args.side,
              "grid_a": args.grid_a, "omega": args.omega, "format": args.format}
    metadata = _tol_metadata(tol)
    metadata["n_missing"] = len(curve.missing)
    return config, metadata, ("r", "side", "a", "b"), rows


def _cmd_monodromy(args):
    if args.omega <= 0:
        raise UsageError("--omega must be positive")
    if args.radius is not None and args.radius <= 0:
        raise UsageError("--radius must be positive")
    tol = _tolerances(args)
    kwargs = {}
    if args.radius is not None:
        kwargs["radius"] = args.radius
    if tol is not None:
        kwargs["tol"] = tol
    result = monodromy_loop(JosephsonParams(b=args.b, a=args.a, omega=args.omega), **kwargs)
    M = result.matrix
    disc = result.eig_discriminant
    rows = [(
        args.b, args.a, args.omega,
        M[0, 0].real, M[0, 0].imag, M[0, 1].real, M[0, 1].imag,
        M[1, 0].real, M[1, 0].imag, M[1, 1].real, M[1, 1].imag,
        result.identity_residual, result.det_residual, disc.real, disc.imag,
    )]
    config = {"command": "monodromy", "b": args.b, "a": args.a, "omega": args.omega,
              "radius": result.loop_radius, "format": args.format}
    columns = ("b", "a", "omega",
               "m11_re", "m11_im", "m12_re", "m12_im",
               "m21_re", "m21_im", "m22_re", "m22_im",
               "identity_residual", "det_residual", "disc_re", "disc_im")
    return config, _tol_metadata(tol), columns, rows


def _cmd_adjacency_seed(args):
    a_lo, a_hi = _parse_pair(args.a_range, "--a-range")
    tol = _tolerances(args)
    seed = find_seed(args.b, args.omega, (a_lo, a_hi), tol=tol)
    config = {"command": "adjacency-seed", "b": args.b, "omega": args.omega,
              "a_range": args.a_range, "format": args.format}
    rows = [(seed.b, seed.a0, seed.omega0, seed.residual)]
    return config, _tol_metadata(tol), ("b", "a0", "omega0", "residual"), rows


def _cmd_adjacency_chain(args):
    if args.seed_a is None or args.seed_omega is None:
        raise UsageError("adjacency-chain requires --seed-a and --seed-omega "
                         "(certify one first with adjacency-seed)")
    if args.k_max < 1:
        raise UsageError("--k-max must be >= 1")
    tol = _tolerances(args)
    seed_residual = None
    try:
        from .adjacency import verify_point
        seed_residual = verify_point(args.b, args.seed_a, args.seed_omega, tol=tol)
    except (ValueError, RuntimeError) as exc:
        raise UsageError(f"seed verification failed: {exc}") from exc
    seed = AdjacencySeed(b=args.b, a0=args.seed_a, omega0=args.seed_omega,
                         residual=seed_residual)
    points = adjacency_chain(seed, args.k_max, tol=tol)
    rows = [(p.k, p.a_star, p.omega_star, p.verify_residual) for p in points]
    config = {"command": "adjacency-chain", "b": args.b, "seed_a": args.seed_a,
              "seed_omega": args.seed_omega, "k_max": args.k_max, "format": args.format}
    metadata = _tol_metadata(tol)
    metadata["seed_residual"] = seed_residual
    return config, metadata, ("k", "a_star", "omega_star", "residual"), rows


def _cmd_painleve_verify(args):
    t_lo, t_hi = _parse_pair(args.tau_range, "--tau-range")
    if t_lo <= 0:
        raise UsageError("--tau-range must be positive (the solution lives on tau > 0)")
    if args.n < 2:
        raise UsageError("--n must be >= 2")
    combo = BesselCombo(order=args.b, mix=args.y0)
    sol = bessel_w(combo, zero_range=(0.05, t_hi + 5.0))
    params = params_from_b(args.b)
    poles = list(sol.zeros.zeros)
    taus = np.linspace(t_lo, t_hi, args.n)
    rows = []
    worst = 0.0
    n_excluded = 0
    for tau in taus:
        res, excluded = p3_residual_report(sol, params, [tau], poles=poles)
        if excluded:
            n_excluded += 1
            continue
        rows.append((tau, sol(tau), res))
        worst = max(worst, res)
    config = {"command": "painleve-verify", "b": args.b, "y0": args.y0,
              "tau_range": args.tau_range, "n": args.n, "format": args.format}
    metadata = {"alpha": params.alpha, "beta": params.beta,
                "gamma": params.gamma, "delta": params.delta,
                "max_residual": worst, "n_excluded": n_excluded}
    return config, metadata, ("tau", "w", "residual"), rows


def _cmd_lax_verify(args):
    z_grid = _parse_grid(args.grid_z, "--grid-z")
    t_grid = _parse_grid(args.grid_t, "--grid-t")
    if np.any(t_grid <= 0):
        raise UsageError("--grid-t must be positive")
    if np.any(z_grid == 0):
        raise UsageError("--grid-z must avoid z = 0 (irregular singularity)")
    combo = BesselCombo(order=args.b, mix=args.y0)
    fam = IsoFamily(b=args.b, combo=combo, t_ref=args.t_ref)
    rows = []
    worst = 0.0
    n_excluded = 0
    for t in t_grid:
        for z in z_grid:
            res, excluded = zero_curvature_report(fam, [z], [t])
            if excluded:
                n_excluded += 1
                continue
            rows.append((t, z, res))
            worst = max(worst, res)
    tol = _tolerances(args)
    drift_ts = [float(t_grid[0]), float(t_grid[len(t_grid) // 2]), float(t_grid[-1])]
    drift = (isomonodromy_drift(fam, drift_ts) if tol is None
             else isomonodromy_drift(fam, drift_ts, tol=tol))
    config = {"command": "lax-verify", "b": args.b, "y0": args.y0,
              "t_ref": args.t_ref, "grid_z": args.grid_z, "grid_t": args.grid_t,
              "format": args.format}
    metadata = _tol_metadata(tol)
    metadata.update({"max_zero_curvature": worst, "n_excluded": n_excluded,
                     "trace_drift": drift})
    return config, metadata, ("t", "z", "zc_residual"), rows


_HANDLERS = {
    "rotnum": _cmd_rotnum,
    "scan": _cmd_scan,
    "boundary": _cmd_boundary,
    "monodromy": _cmd_monodromy,
    "adjacency-seed": _cmd_adjacency_seed,
    "adjacency-chain": _cmd_adjacency_chain,
    "painleve-verify": _cmd_painleve_verify,
    "lax-verify": _cmd_lax_verify,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phaselock",
        description="Rotation numbers, monodromy, Painleve-3 Bessel solutions, "
                    "isomonodromic families, and adjacency chains of the "
                    "periodically driven junction equation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=None,
                       help="integration tolerance (sets abs and rel)")
        p.add_argument("--out", default="-", help="output path ('-' = stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("rotnum", help="rotation number at a single parameter point")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    common(p)

    p = sub.add_parser("scan", help="rotation-number grid over (b, a)")
    p.add_argument("--grid-b", required=True, metavar="lo:hi:n")
    p.add_argument("--grid-a", required=True, metavar="lo:hi:n")
    p.add_argument("--omega", type=float, required=True)
    common(p)

    p = sub.add_parser("boundary", help="trace one Arnold-tongue boundary branch")
    p.add_argument("--r", type=int, required=True, help="tongue rotation number")
    p.add_argument("--side", choices=("plus", "minus"), required=True)
    p.add_argument("--grid-a", required=True, metavar="lo:hi:n")
    p.add_argument("--omega", type=float, required=True)
    common(p)

    p = sub.add_parser("monodromy", help="loop monodromy of the linear zeta-system")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--radius", type=float, default=None)
    common(p)

    p = sub.add_parser("adjacency-seed", help="scan and certify an adjacency point")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--a-range", required=True, metavar="lo:hi")
    common(p)

    p = sub.add_parser("adjacency-chain", help="chain of adjacency points from a seed")
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--seed-a", type=float, default=None)
    p.add_argument("--seed-omega", type=float, default=None)
    p.add_argument("--k-max", type=int, default=3)
    common(p)

    p = sub.add_parser("painleve-verify",
                       help="residual of the Bessel-built Painleve-3 solution")
    p.add_argument("--b", type=float, required=True, help="cylinder order")
    p.add_argument("--y0", type=float, default=0.0, help="mixing constant")
    p.add_argument("--tau-range", default="0.3:3.0", metavar="lo:hi")
    p.add_argument("--n", type=int, default=40, help="number of samples")
    common(p)

    p = sub.add_parser("lax-verify",
                       help="zero-curvature residual and trace drift of the Lax family")
    p.add_argument("--b", type=float, required=True, help="cylinder order")
    p.add_argument("--y0", type=float, default=0.0, help="mixing constant")
    p.add_argument("--t-ref", type=float, default=0.25, help="anchor time")
    p.add_argument("--grid-z", default="0.6:2.4:3", metavar="lo:hi:n")
    p.add_argument("--grid-t", default="0.1:0.5:3", metavar="lo:hi:n")
    common(p)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    args._t0 = time.time()
    handler = _HANDLERS[args.command]
    try:
        config, metadata, columns, rows = handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        if "no adjacency in range" in str(exc):
            print(f"not found: {exc}", file=sys.stderr)
            return EXIT_NOT_FOUND
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _write_artifact(args, config, metadata, columns, rows)
    return EXIT_OK


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
