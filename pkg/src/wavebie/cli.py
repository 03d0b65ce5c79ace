"""Command-line driver: ``validate``, ``convergence``, ``solve`` and ``field`` runs from a JSON config.

Exit codes: 0 on success, 2 for configuration errors, 3 for numerical failures.
"""

import argparse
import csv
import logging
import sys
import time
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, load_config
from .fundamental import compute_coefficients, phi
from .geometry import distance_to_curve, is_inside
from .laguerre import forward_transform, signal_coefficients, tabulated_signal
from .quadrature import Mesh
from .solver import (
    KernelSystem,
    boundary_data_from_source,
    boundary_data_uniform,
    interior_values,
    solve_sequence,
)
from .special import laguerre_table

logger = logging.getLogger("wavebie")

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _fmt(x) -> str:
    return f"{x:.15g}"


def _write_csv(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row])


def boundary_data(cfg: RunConfig, table, curve, mesh: Mesh) -> np.ndarray:
    bd = cfg.boundary_data
    params = table.params
    if bd["mode"] == "point_source":
        return boundary_data_from_source(table, curve, mesh, bd["z1"])
    if bd["mode"] == "signal":
        coeffs = signal_coefficients(bd["name"], params)
    else:
        coeffs = forward_transform(tabulated_signal(bd["times"], bd["values"]), params, cfg.quad_nodes)
    return boundary_data_uniform(coeffs, mesh)


def _solve(cfg: RunConfig, M: int, N: int):
    table = compute_coefficients(cfg.params(N))
    curve = cfg.build_curve()
    mesh = Mesh(M)
    system = KernelSystem.build(table, curve, mesh)
    psi = solve_sequence(system, boundary_data(cfg, table, curve, mesh))
    return system, psi


def run_validate(cfg: RunConfig, out_dir: Path) -> list:
    """Compare ``u_{n,M}`` with the exact point-source field for every mesh in ``m_list``.

    Writes ``validate.csv`` (one row per M, point, n) and ``validate_summary.csv``
    (L2-over-n error per M).  Returns the summary rows.
    """
    if cfg.boundary_data["mode"] != "point_source":
        raise ConfigError("validate needs boundary_data.mode = point_source")
    if not cfg.points:
        raise ConfigError("validate needs at least one evaluation point")
    z1 = np.asarray(cfg.boundary_data["z1"], dtype=float)
    points = np.asarray(cfg.points)
    orders = cfg.orders if cfg.orders is not None else list(range(cfg.N + 1))
    rows, summary = [], []
    for M in cfg.m_list:
        system, psi = _solve(cfg, M, cfg.N)
        u = interior_values(system, psi, points, cfg.boundary_floor)
        exact = np.array([phi(system.table, n, np.linalg.norm(points - z1, axis=1)) for n in range(cfg.N + 1)])
        err = u - exact
        for p, x in enumerate(points):
            for n in orders:
                rows.append([M, p, float(x[0]), float(x[1]), n, float(u[n, p]), float(exact[n, p]), float(abs(err[n, p]))])
        l2 = float(np.sqrt(np.sum(err**2)))
        summary.append([M, l2])
        print(f"M={M:4d}  " + "  ".join(f"u_{n}={u[n, 0]: .10f}" for n in orders) + f"  L2 error={l2:.3e}")
    print("exact   " + "  ".join(f"u_{n}={exact[n, 0]: .10f}" for n in orders))
    _write_csv(out_dir / "validate.csv", ["M", "point", "x1", "x2", "n", "computed", "exact", "abs_error"], rows)
    _write_csv(out_dir / "validate_summary.csv", ["M", "l2_error"], summary)
    return summary


def run_convergence(cfg: RunConfig, out_dir: Path) -> list:
    """L2-over-n error ``E(M)`` and the ratio ``E(M) / E(M_prev)`` across ``m_list``.

    Writes ``convergence.csv``; runs ``validate`` underneath.
    """
    summary = run_validate(cfg, out_dir)
    rows = []
    for k, (M, err) in enumerate(summary):
        ratio = err / summary[k - 1][1] if k and summary[k - 1][1] > 0 else float("nan")
        rows.append([M, err, ratio])
        print(f"M={M:4d}  E(M)={err:.3e}  ratio={ratio:.3e}")
    _write_csv(out_dir / "convergence.csv", ["M", "l2_error", "ratio"], rows)
    return rows


def _spacetime(values: np.ndarray, kappa: float, N: int, times) -> np.ndarray:
    """Truncated reconstruction from ``u_0 .. u_N``; shape ``(len(times), P)``."""
    basis = laguerre_table(N, kappa * np.asarray(times, dtype=float))
    return kappa * basis.T @ values[: N + 1]


def run_solve(cfg: RunConfig, out_dir: Path) -> list:
    """``u_{N,M}(x, t)`` for every M in ``m_list``, N in ``n_list``, point and time.

    The order-``n`` problems do not depend on the truncation, so one solve at
    ``max(n_list)`` serves all ``N``.
    """
    if not cfg.points or not cfg.times:
        raise ConfigError("solve needs 'points' and 'times'")
    points = np.asarray(cfg.points)
    rows = []
    for M in cfg.m_list:
        system, psi = _solve(cfg, M, cfg.N)
        values = interior_values(system, psi, points, cfg.boundary_floor)
        for N in cfg.n_list:
            u = _spacetime(values, cfg.kappa, N, cfg.times)
            for k, t in enumerate(cfg.times):
                for p, x in enumerate(points):
                    rows.append([M, N, float(t), float(x[0]), float(x[1]), float(u[k, p])])
                    print(f"M={M:4d} N={N:3d} t={t:g} x=({x[0]:g}, {x[1]:g})  u={u[k, p]:.10f}")
    _write_csv(out_dir / "solve.csv", ["M", "N", "t", "x1", "x2", "u"], rows)
    return rows


def run_field(cfg: RunConfig, out_dir: Path) -> np.ndarray:
    """``u_{N,M}`` on a rectangular grid at each configured time; exterior and
    near-boundary points are masked.  Returns ``u`` with shape ``(T, n1, n2)``."""
    if not cfg.times:
        raise ConfigError("field needs 'times'")
    grid = cfg.grid_points()
    curve = cfg.build_curve()
    flat = grid.reshape(-1, 2)
    valid = is_inside(curve, flat) & (distance_to_curve(curve, flat) >= cfg.boundary_floor)
    valid = np.atleast_1d(valid)
    if not valid.any():
        raise ConfigError("no grid point lies inside the domain")
    system, psi = _solve(cfg, cfg.M, cfg.N)
    values = interior_values(system, psi, flat[valid], cfg.boundary_floor)
    u = np.full((len(cfg.times), flat.shape[0]), np.nan)
    u[:, valid] = _spacetime(values, cfg.kappa, cfg.N, cfg.times)
    rows = []
    for k, t in enumerate(cfg.times):
        for p, x in enumerate(flat):
            rows.append([float(t), float(x[0]), float(x[1]), float(u[k, p]), int(not valid[p])])
    _write_csv(out_dir / "field.csv", ["t", "x1", "x2", "u", "mask"], rows)
    print(f"field: {int(valid.sum())} of {flat.shape[0]} grid points inside, {len(cfg.times)} time(s)")
    return u.reshape((len(cfg.times),) + grid.shape[:-1])


_COMMANDS = {
    "validate": run_validate,
    "convergence": run_convergence,
    "solve": run_solve,
    "field": run_field,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavebie",
        description="Laguerre / hypersingular BIE solver for the 2D Neumann wave problem",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__.splitlines()[0])
        p.add_argument("--config", required=True, type=Path, help="JSON run configuration")
        p.add_argument("--out", required=True, type=Path, help="output directory")
        p.add_argument("--m-list", help="comma-separated mesh sizes overriding the config")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        if args.m_list:
            try:
                m_list = [int(v) for v in args.m_list.split(",")]
            except ValueError:
                raise ConfigError(f"--m-list must be comma-separated integers, got {args.m_list!r}") from None
            if any(m < 2 for m in m_list):
                raise ConfigError("--m-list entries must be >= 2")
            cfg.m_list = m_list
        start = time.perf_counter()
        _COMMANDS[args.command](cfg, args.out)
        logger.info("%s finished in %.2f s", args.command, time.perf_counter() - start)
    except ConfigError as exc:
        print(f"wavebie: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (np.linalg.LinAlgError, FloatingPointError, OverflowError) as exc:
        print(f"wavebie: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
