"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run under pytest (``pytest tests/test_acceptance.py -s``) or as a script
(``python tests/test_acceptance.py``).  Solves are cached across criteria.
"""

import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from _support import (  # noqa: E402
    ORACLES,
    PENTAGON,
    POLYGONS,
    SQUARE,
    collocation,
    galerkin,
    interior_points,
    spectra,
    trace_l2,
)
from spectral_dn.cli import trace_errors, trace_grid  # noqa: E402
from spectral_dn.galerkin import Discretization, assemble, dn_linearity_check, solve_dn  # noqa: E402
from spectral_dn.global_relation import EdgeData  # noqa: E402
from spectral_dn.oracles import get_oracle  # noqa: E402
from spectral_dn.paley_wiener import PWFunction, SpectralVector, norm_X, star  # noqa: E402
from spectral_dn.reconstruction import dq_dz, imaginary_residue, neumann_trace  # noqa: E402

pytestmark = pytest.mark.slow

CASES = [(p, o) for p in POLYGONS for o in ORACLES]


def report(number, ok, detail):
    print(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok, detail


def traces(poly, Phi_n, n_points=101):
    return [neumann_trace(poly, Phi_n, i, trace_grid(poly, i, n_points)) for i in range(poly.n)]


def criterion_1():
    worst, slowest, lines = 0.0, 0.0, []
    for p, o in CASES:
        t0 = time.perf_counter()
        Phi_n, _ = galerkin(p, o, 24)
        slowest = max(slowest, time.perf_counter() - t0)
        _, err = trace_errors(POLYGONS[p], Phi_n, get_oracle(o))
        worst = max(worst, err)
        lines.append(f"{p}/{o}={err:.2e}")
    ok = worst < 1e-2 and slowest < 30
    return report(1, ok, f"max trace error {worst:.3e}, slowest {slowest:.1f}s ({', '.join(lines)})")


def criterion_2():
    errs = [trace_errors(SQUARE, galerkin("square", "x", N)[0], get_oracle("x"))[1] for N in (4, 8, 16, 24)]
    monotone = all(b <= 1.05 * a for a, b in zip(errs, errs[1:]))
    ok = monotone and errs[-1] < 0.5 * errs[0]
    return report(2, ok, "errors " + ", ".join(f"{e:.3e}" for e in errs))


def criterion_3():
    worst, where = 0.0, ""
    for p, o in CASES:
        _, diag = galerkin(p, o, 24)
        rel = diag.residual / diag.data_norm
        if rel > worst:
            worst, where = rel, f"{p}/{o}"
    return report(3, worst < 1e-2, f"max relative residual {worst:.3e} at {where}")


def criterion_4():
    rng = np.random.default_rng(4)
    lam = rng.uniform(-20, 20, 64) + 1j * rng.uniform(-3, 3, 64)
    star_dev = real_dev = 0.0
    for p, o in CASES:
        Phi_n, _ = galerkin(p, o, 24)
        for f in Phi_n:
            scale = max(1.0, float(np.abs(f(lam)).max()))
            star_dev = max(star_dev, float(np.abs(star(f, lam) - f(lam)).max()) / scale)
            real_dev = max(real_dev, imaginary_residue(f, np.linspace(-f.sigma, f.sigma, 101)))
    ok = star_dev < 1e-10 and real_dev < 1e-10
    return report(4, ok, f"star deviation {star_dev:.2e}, imaginary residue {real_dev:.2e}")


def criterion_5():
    rng = np.random.default_rng(5)
    tau = np.polynomial.legendre.leggauss(16)[0]
    worst = 0.0
    for _ in range(20):
        d1 = [EdgeData(1.0, tau, rng.normal(size=tau.size)) for _ in range(4)]
        d2 = [EdgeData(1.0, tau, rng.normal(size=tau.size)) for _ in range(4)]
        a, b = rng.uniform(-3, 3, 2)
        worst = max(worst, dn_linearity_check(SQUARE, d1, d2, a, b, 6))
    return report(5, worst < 1e-10, f"max relative deviation {worst:.2e} over 20 tuples")


def criterion_6():
    ok, parts = True, []
    for name, poly in (("square", SQUARE), ("pentagon", PENTAGON)):
        ev = {}
        for N in (4, 8, 16):
            A = Discretization(poly, N).matrix()
            ev[N] = float(np.linalg.eigvalsh(0.5 * (A + A.T))[0])
        ok &= min(ev.values()) > 0 and ev[16] > 0.5 * ev[4]
        parts.append(f"{name} " + "/".join(f"{ev[N]:.3f}" for N in (4, 8, 16)))
    return report(6, ok, "lambda_min " + ", ".join(parts))


def criterion_7():
    zero = SpectralVector.zeros(SQUARE.half_lengths, 8)
    Phi_n, _ = solve_dn(SQUARE, zero, 8)
    z = norm_X(Phi_n)
    rng = np.random.default_rng(7)
    sys_ = assemble(SQUARE, spectra("square", "re_z3"), 16)
    x = sys_.solve()
    worst = 0.0
    for delta in (1e-8, 1e-5, 1e-2):
        e = rng.normal(size=sys_.size)
        db = delta * np.linalg.norm(sys_.rhs) * e / np.linalg.norm(e)
        dx = sys_.solve(sys_.rhs + db) - x
        # relative change in x against condition times relative change in b
        ratio = (np.linalg.norm(dx) / np.linalg.norm(x)) / (np.linalg.norm(db) / np.linalg.norm(sys_.rhs))
        worst = max(worst, ratio / sys_.condition)
    ok = z < 1e-8 and worst <= 1.0
    return report(7, ok, f"||DN(0)|| = {z:.1e}, max amplification / cond = {worst:.3f} (cond {sys_.condition:.2f})")


def criterion_8():
    worst = 0.0
    for p, o in CASES:
        poly = POLYGONS[p]
        g, _ = galerkin(p, o, 16)
        c, _ = collocation(p, o, 16)
        worst = max(worst, trace_l2(poly, traces(poly, c), traces(poly, g)))
    return report(8, worst < 1e-2, f"max relative L2 difference {worst:.3e}")


def criterion_9():
    worst = 0.0
    for p, o in CASES:
        poly, orc = POLYGONS[p], get_oracle(o)
        Phi_n, _ = galerkin(p, o, 24)
        z = interior_points(poly, 10, 0.3, seed=9)
        got = dq_dz(poly, spectra(p, o), Phi_n, z)
        worst = max(worst, float(np.abs(got - orc.dq_dz(z)).max()))
    zero = SpectralVector.zeros(SQUARE.half_lengths, 8)
    z0 = float(np.abs(dq_dz(SQUARE, zero, zero, interior_points(SQUARE, 10, 0.3, seed=9))).max())
    ok = worst < 1e-2 and z0 < 1e-10
    return report(9, ok, f"max gradient error {worst:.3e}, constant data {z0:.1e}")


def criterion_10():
    worst = 0.0
    for p, o in CASES:
        for N in (16, 24):
            for solver in (galerkin, collocation):
                _, diag = solver(p, o, N)
                worst = max(worst, abs(diag.flux) / max(diag.data_norm, 1.0))
    return report(10, worst < 1e-6, f"max |flux| / data scale {worst:.2e}")


def criterion_11():
    rot, shift = np.pi / 7, 5 - 3j
    worst = 0.0
    for p, o in CASES:
        poly, orc = POLYGONS[p], get_oracle(o)
        moved = poly.transformed(rot, shift)
        a, _ = galerkin(p, o, 16)
        b, _ = solve_dn(moved, orc.transformed(rot, shift).edge_data(moved), 16)
        worst = max(worst, trace_l2(poly, traces(moved, b), traces(poly, a)))
    return report(11, worst < 1e-6, f"max relative trace change {worst:.2e}")


def criterion_12():
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(100):
        sigma, N = rng.uniform(0.3, 2.5), int(rng.integers(0, 12))
        f = PWFunction(sigma, rng.normal(size=2 * N + 1) + 1j * rng.normal(size=2 * N + 1))
        z0 = 3 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        worst = max(worst, abs(f(z0)) / (f.l2_norm() * np.exp(sigma * abs(z0))))
    return report(12, worst <= 10, f"max |f(z0)| / (||f|| e^(sigma|z0|)) = {worst:.3f}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 13)])
def test_criterion(check):
    ok, detail = check()
    assert ok, detail


if __name__ == "__main__":
    results = [check()[0] for check in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
