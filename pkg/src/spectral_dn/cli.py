"""Command line front end: ``spectral-dn {solve,validate,convergence,reconstruct}``.

Every subcommand reads a YAML problem file (see :mod:`spectral_dn.config`) and
writes CSV tables, a ``key = value`` report and, unless ``--no-figures`` is
given, PNG figures into the output directory.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .collocation import default_collocation, solve_dn_collocation
from .config import ProblemConfig, load
from .errors import ConfigError, SpectralDNError
from .galerkin import (
    SolveDiagnostics,
    bent_contours,
    default_contours,
    flux,
    polyline_contours,
    solve_dn,
)
from .geometry import Polygon
from .global_relation import corner_mismatch, residual_norm, tangential_spectra
from .paley_wiener import SpectralVector, norm_X, star
from .reconstruction import dq_dz, imaginary_residue, neumann_trace

log = logging.getLogger("spectral_dn")

TRACE_FRACTION = 0.9


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def write_csv(path: Path, header: Sequence[str], rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])
    return path


def write_report(path: Path, items: dict) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(f"{k} = {fmt(v)}\n" for k, v in items.items()))
    return path


def read_report(path) -> dict:
    out = {}
    for line in Path(path).read_text().splitlines():
        if " = " in line:
            k, v = line.split(" = ", 1)
            out[k] = v
    return out


# --- solving ---------------------------------------------------------------


def contours_for(cfg: ProblemConfig, poly: Polygon, N: int):
    c = cfg.contour
    if c.kind == "bent":
        return bent_contours(poly, c.R_tail, c.nodes_per_unit, N=N, angle=c.angle, radius=c.radius)
    if c.kind == "polyline":
        return polyline_contours(poly, [complex(*v) for v in c.vertices], c.nodes_per_unit)
    return default_contours(poly, c.R_tail, c.nodes_per_unit, N=N)


def solve_config(cfg: ProblemConfig, N: int | None = None, method: str | None = None):
    """Returns (polygon, edge data, Phi_t, Phi_n, diagnostics)."""
    N = cfg.N if N is None else N
    method = method or cfg.method
    poly = cfg.build_polygon()
    data = cfg.edge_data(poly)
    Phi_t = tangential_spectra(poly, data)
    if method == "collocation":
        c = cfg.collocation
        pts = default_collocation(poly, N, c.oversample, c.rotation, c.rotated_fraction)
        Phi_n, diag = solve_dn_collocation(poly, Phi_t, N, pts)
    else:
        Phi_n, diag = solve_dn(poly, Phi_t, N, contours_for(cfg, poly, N))
    diag.extra["corner_mismatch"] = corner_mismatch(poly, data)
    diag.extra["fit_residual"] = max(d.fit_residual for d in data)
    return poly, data, Phi_t, Phi_n, diag


def trace_grid(poly: Polygon, i: int, n_points: int) -> np.ndarray:
    s = poly.half_lengths[i]
    return np.linspace(-TRACE_FRACTION * s, TRACE_FRACTION * s, n_points)


def trace_errors(poly: Polygon, Phi_n: SpectralVector, oracle, n_points: int = 201):
    """Per-edge L2 trace errors divided by the L2 norm of the whole exact trace,
    on |tau| <= 0.9 sigma.  Also returns the total relative error."""
    sq_err, sq_ref = [], 0.0
    for i in range(poly.n):
        tau = trace_grid(poly, i, n_points)
        h = tau[1] - tau[0]
        e = neumann_trace(poly, Phi_n, i, tau) - oracle.neumann(poly, i, tau)
        sq_err.append(h * np.sum(e**2))
        sq_ref += h * np.sum(oracle.neumann(poly, i, tau) ** 2)
    scale = np.sqrt(sq_ref) if sq_ref > 0 else 1.0
    per_edge = np.sqrt(np.array(sq_err)) / scale
    return per_edge, float(np.sqrt(np.sum(per_edge**2)))


@dataclass
class SolveResult:
    out_dir: Path
    files: list = field(default_factory=list)
    diagnostics: SolveDiagnostics | None = None
    report: dict = field(default_factory=dict)


def run_solve(cfg: ProblemConfig, out_dir=None, method: str | None = None, N: int | None = None,
              figures: bool | None = None) -> SolveResult:
    out = Path(out_dir or cfg.output.directory)
    figures = cfg.output.figures if figures is None else figures
    poly, data, Phi_t, Phi_n, diag = solve_config(cfg, N, method)
    res = SolveResult(out, diagnostics=diag)

    traces, rows, exact = [], [], []
    oracle = cfg.oracle()
    for i in range(poly.n):
        tau = trace_grid(poly, i, cfg.output.trace_points)
        val = neumann_trace(poly, Phi_n, i, tau)
        traces.append((tau, val))
        rows += [(i + 1, t, v) for t, v in zip(tau, val)]
        if oracle is not None:
            exact.append(oracle.neumann(poly, i, tau))
    res.files.append(write_csv(out / "traces.csv", ["edge", "tau", "value"], rows))

    crow = []
    for i, f in enumerate(Phi_n):
        crow += [(i + 1, J, c.real, c.imag) for J, c in zip(f.J, f.coeffs)]
    res.files.append(write_csv(out / "coefficients.csv", ["edge", "J", "re", "im"], crow))

    report = {"n_edges": poly.n, **diag.as_dict()}
    if oracle is not None:
        report["oracle"] = oracle.name
        report["trace_error"] = trace_errors(poly, Phi_n, oracle)[1]
    res.report = report
    res.files.append(write_report(out / "report.txt", report))
    if figures:
        from .plotting import plot_traces

        res.files.append(plot_traces(poly, traces, out / "traces.png", exact or None,
                                     title=f"Neumann trace ({diag.method}, N={diag.N})"))
    return res


# --- validation ------------------------------------------------------------


@dataclass
class Check:
    name: str
    value: float
    threshold: float
    passed: bool


VALIDATE_RESIDUAL = 5e-2
VALIDATE_SYMMETRY = 1e-10
VALIDATE_FLUX = 1e-6
VALIDATE_TRACE = 1e-2


def run_validate(cfg: ProblemConfig, out_dir=None, seed: int = 0, method: str | None = None,
                 perturb: Callable[[SpectralVector], SpectralVector] | None = None
                 ) -> tuple[list[Check], bool]:
    """Solve, then check residual, symmetry, realness, flux and (for oracle
    configs) the trace error.  ``perturb`` may corrupt the solution before
    the checks run."""
    out = Path(out_dir or cfg.output.directory)
    poly, data, Phi_t, Phi_n, diag = solve_config(cfg, method=method)
    if perturb is not None:
        Phi_n = perturb(Phi_n)
    rng = np.random.default_rng(seed)
    scale = diag.data_norm
    checks = []

    res = residual_norm(poly, Phi_n, Phi_t)
    rel = res / scale if scale > 0 else res
    checks.append(Check("relative_residual", rel, VALIDATE_RESIDUAL, rel < VALIDATE_RESIDUAL))

    lam = rng.uniform(-20, 20, 64) + 1j * rng.uniform(-3, 3, 64)
    sym = max(float(np.max(np.abs(star(f, lam) - f(lam))) / max(1.0, np.abs(f(lam)).max()))
              for f in Phi_n)
    checks.append(Check("star_symmetry", sym, VALIDATE_SYMMETRY, sym < VALIDATE_SYMMETRY))

    real = max(imaginary_residue(f, trace_grid(poly, i, 64)) for i, f in enumerate(Phi_n))
    checks.append(Check("trace_realness", real, VALIDATE_SYMMETRY, real < VALIDATE_SYMMETRY))

    fl = abs(flux(Phi_n))
    tol = VALIDATE_FLUX * max(scale, 1.0)
    checks.append(Check("flux", fl, tol, fl <= tol))

    if diag.method == "galerkin":
        checks.append(Check("lambda_min", diag.lambda_min, 0.0, diag.lambda_min > 0))

    oracle = cfg.oracle()
    if oracle is not None and oracle.name != "const":
        err = trace_errors(poly, Phi_n, oracle)[1]
        checks.append(Check("trace_error", err, VALIDATE_TRACE, err < VALIDATE_TRACE))

    ok = all(c.passed for c in checks)
    rows = [(c.name, c.value, c.threshold, c.passed) for c in checks]
    write_csv(out / "validate.csv", ["check", "value", "threshold", "passed"], rows)
    report = {"method": diag.method, "N": diag.N, "seed": seed, "passed": ok}
    for c in checks:
        report[c.name] = c.value
        report[f"{c.name}_threshold"] = c.threshold
        report[f"{c.name}_passed"] = c.passed
    write_report(out / "validate_report.txt", report)
    return checks, ok


# --- convergence -----------------------------------------------------------


def run_convergence(cfg: ProblemConfig, N_list: Sequence[int], out_dir=None, method: str | None = None,
                    figures: bool | None = None) -> list[list]:
    oracle = cfg.oracle()
    if oracle is None:
        raise ConfigError("dirichlet: convergence needs the same builtin oracle on every edge")
    out = Path(out_dir or cfg.output.directory)
    figures = cfg.output.figures if figures is None else figures
    rows = []
    n = len(cfg.polygon)
    for N in N_list:
        t0 = time.perf_counter()
        poly, _, _, Phi_n, diag = solve_config(cfg, N, method)
        per_edge, _ = trace_errors(poly, Phi_n, oracle)
        rel = diag.residual / diag.data_norm if diag.data_norm > 0 else diag.residual
        rows.append([N, *per_edge, rel, diag.condition, diag.lambda_min, time.perf_counter() - t0])
        log.info("N=%d error=%.3e", N, float(np.sqrt(np.sum(per_edge**2))))
    header = ["N", *[f"err_edge_{i + 1}" for i in range(n)], "residual", "cond", "lambda_min", "seconds"]
    write_csv(out / "convergence.csv", header, rows)
    if figures:
        from .plotting import plot_convergence

        arr = np.array(rows, dtype=float)
        plot_convergence(arr[:, 0], arr[:, 1:n + 1], arr[:, n + 1], out / "convergence.png")
    return rows


# --- reconstruction --------------------------------------------------------


def run_reconstruct(cfg: ProblemConfig, out_dir=None, method: str | None = None,
                    figures: bool | None = None):
    out = Path(out_dir or cfg.output.directory)
    figures = cfg.output.figures if figures is None else figures
    poly, _, Phi_t, Phi_n, _ = solve_config(cfg, method=method)
    v = poly.vertices
    g = cfg.output.grid
    X, Y = np.meshgrid(np.linspace(v.real.min(), v.real.max(), g),
                       np.linspace(v.imag.min(), v.imag.max(), g))
    z = (X + 1j * Y).ravel()
    margin = 0.1 * poly.diameter
    z = z[poly.boundary_distance(z) > margin]
    vals = dq_dz(poly, Phi_t, Phi_n, z, margin=0.05 * poly.diameter)
    rows = [(p.real, p.imag, q.real, q.imag) for p, q in zip(z, vals)]
    write_csv(out / "reconstruction.csv", ["x", "y", "re_dqdz", "im_dqdz"], rows)
    if figures:
        from .plotting import plot_gradient

        plot_gradient(poly, z, vals, out / "gradient.png")
    return z, vals


# --- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spectral-dn", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, hlp in [("solve", "solve for the Neumann trace"),
                      ("validate", "solve and run the invariant checks"),
                      ("convergence", "trace error against a builtin oracle for several N"),
                      ("reconstruct", "interior dq/dz on a grid")]:
        s = sub.add_parser(name, help=hlp)
        s.add_argument("--config", required=True, type=Path)
        s.add_argument("--method", choices=("galerkin", "collocation"))
        if name == "convergence":
            s.add_argument("--N", type=int, nargs="+", required=True)
        else:
            s.add_argument("--N", type=int)
        s.add_argument("--out", type=Path)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--no-figures", action="store_true")
        s.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    figures = False if args.no_figures else None
    try:
        cfg = load(args.config)
        if args.command != "convergence" and args.N is not None:
            cfg = cfg.replace(N=args.N)
        if args.command == "solve":
            res = run_solve(cfg, args.out, args.method, figures=figures)
            for k in ("method", "N", "relative_residual", "condition", "trace_error"):
                if k in res.report:
                    print(f"{k} = {fmt(res.report[k])}")
            return 0
        if args.command == "validate":
            checks, ok = run_validate(cfg, args.out, args.seed, args.method)
            for c in checks:
                print(f"{'PASS' if c.passed else 'FAIL'} {c.name} = {c.value:.3e} "
                      f"(threshold {c.threshold:.1e})")
            return 0 if ok else 1
        if args.command == "convergence":
            rows = run_convergence(cfg, args.N, args.out, args.method, figures=figures)
            for r in rows:
                print(f"N={r[0]} error={np.sqrt(np.sum(np.square(r[1:-4]))):.3e}")
            return 0
        z, _ = run_reconstruct(cfg, args.out, args.method, figures=figures)
        print(f"points = {len(z)}")
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SpectralDNError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
