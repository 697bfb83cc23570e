"""Point-evaluation alternative: enforce the global relation at finitely many
lower-half-plane points and solve the overdetermined real system by QR."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg as sla

from .errors import InvalidResolution, RankDeficient
from .galerkin import SolveDiagnostics, data_spectra, flux
from .geometry import Polygon
from .global_relation import apply_T, n_unknowns, real_basis_images, residual, symmetric_vector
from .paley_wiener import SpectralVector, norm_X

RANK_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class CollocationSet:
    points: tuple
    weights: tuple | None = None

    def __post_init__(self):
        pts = tuple(np.asarray(p, dtype=complex).reshape(-1) for p in self.points)
        object.__setattr__(self, "points", pts)
        if self.weights is not None:
            w = tuple(np.asarray(x, dtype=float).reshape(-1) for x in self.weights)
            if any(a.shape != b.shape for a, b in zip(w, pts)):
                raise ValueError("one weight per collocation point")
            object.__setattr__(self, "weights", w)

    @property
    def total(self) -> int:
        return sum(len(p) for p in self.points)

    def in_lower_half_plane(self) -> bool:
        return all(np.all(p.imag <= 0) for p in self.points)


def default_collocation(poly: Polygon, N: int, oversample: float = 2.0, rotation: float = 0.0,
                        rotated_fraction: float = 0.0) -> CollocationSet:
    """Per edge, ceil(oversample (2N+1)) points at spacing pi / (sigma_i oversample)
    on the negative axis.

    A fraction of them may instead be taken on the ray e^{i rotation} R^-,
    which lies in the lower half plane for 0 < rotation < pi/2.
    """
    if oversample < 1:
        raise InvalidResolution("oversample must be at least 1")
    if rotated_fraction and not 0 < rotation < np.pi / 2:
        raise InvalidResolution("rotation must lie in (0, pi/2)")
    K = int(np.ceil(oversample * (2 * N + 1)))
    K_rot = int(rotated_fraction * K)
    pts = []
    for s in poly.half_lengths:
        h = np.pi / (s * oversample)
        axis = -h * np.arange(K - K_rot)
        ray = -np.exp(1j * rotation) * h * (np.arange(K_rot) + 0.5)
        pts.append(np.concatenate([axis, ray]))
    return CollocationSet(tuple(pts))


def collocation_matrix(poly: Polygon, points: CollocationSet, N: int) -> np.ndarray:
    rows = []
    for i, lam in enumerate(points.points):
        G = real_basis_images(poly, i, lam, N)
        if points.weights is not None:
            G = np.sqrt(points.weights[i])[:, None] * G
        rows.append(G)
    G = np.concatenate(rows)
    return np.concatenate([G.real, G.imag])


def collocation_rhs(poly: Polygon, points: CollocationSet, Phi_t: SpectralVector) -> np.ndarray:
    # T Phi_n = i T Phi_t
    parts = []
    for i, lam in enumerate(points.points):
        g = 1j * apply_T(poly, Phi_t, i, lam)
        if points.weights is not None:
            g = np.sqrt(points.weights[i]) * g
        parts.append(g)
    g = np.concatenate(parts)
    return np.concatenate([g.real, g.imag])


def solve_dn_collocation(poly: Polygon, data, N: int, points: CollocationSet | None = None, *,
                         exact_data: bool = True, residual_grids=None
                         ) -> tuple[SpectralVector, SolveDiagnostics]:
    t0 = time.perf_counter()
    points = points if points is not None else default_collocation(poly, N)
    if len(points.points) != poly.n:
        raise InvalidResolution("need one point list per edge")
    m = n_unknowns(poly.n, N)
    if points.total < m:
        raise InvalidResolution(f"{points.total} points for {m} unknowns")
    if not points.in_lower_half_plane():
        raise InvalidResolution("collocation points must lie in the closed lower half plane")
    Phi_t = data_spectra(poly, data, N, exact_data)
    A = collocation_matrix(poly, points, N)
    b = collocation_rhs(poly, points, Phi_t)

    Q, R, perm = sla.qr(A, mode="economic", pivoting=True)
    d = np.abs(np.diag(R))
    if d[0] == 0 or d[-1] < RANK_RTOL * d[0]:
        raise RankDeficient(f"collocation matrix rank deficient (|R| ratio {d[-1] / max(d[0], 1e-300):.2e})")
    y = sla.solve_triangular(R, Q.T @ b)
    x = np.empty_like(y)
    x[perm] = y
    sv = np.linalg.svd(A, compute_uv=False)
    lsq = float(np.linalg.norm(A @ x - b))

    Phi_n = symmetric_vector(poly, x, N)
    res = residual(poly, Phi_n, Phi_t, residual_grids)
    diag = SolveDiagnostics(
        method="collocation",
        N=int(N),
        unknowns=m,
        residual=float(np.sqrt(np.sum(res**2))),
        residual_per_edge=res,
        condition=float(sv[0] / sv[-1]),
        lambda_min=float(sv[-1] ** 2),
        energy=float(lsq**2),
        data_norm=norm_X(Phi_t),
        flux=flux(Phi_n),
        seconds=time.perf_counter() - t0,
        extra={"points": points.total, "lsq_residual": lsq},
    )
    return Phi_n, diag
