"""Weak (least-squares) formulation of the global relation and its Galerkin solve.

The unknown Neumann spectrum minimises sum_i int_{gamma_i} |(T(Phi_n - i Phi_t))_i|^2 ds
over symmetric sinc expansions.  Each ``gamma_i`` is a polyline in the closed
lower half plane whose last segment runs along the negative real axis.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg as sla

from .errors import (
    AssemblyOverflow,
    EvaluationOverflow,
    IllConditionedWarning,
    InvalidResolution,
    SingularSystem,
)
from .geometry import Polygon
from .global_relation import (
    EdgeData,
    apply_T,
    n_unknowns,
    real_basis_images,
    residual,
    symmetric_vector,
    tangential_spectra,
    spectral_dirichlet,
    unknown_labels,
)
from .paley_wiener import SpectralVector, norm_X

PANEL_NODES = 16
TAIL_DECAY = 40.0
ILL_CONDITIONED = 1e12


@dataclass(frozen=True, eq=False)
class Contour:
    """Quadrature on a polyline: nodes, arc-length weights and unit tangents."""

    vertices: tuple
    nodes: np.ndarray
    weights: np.ndarray
    tangents: np.ndarray

    @property
    def size(self) -> int:
        return len(self.nodes)


def polyline_contour(vertices: Sequence[complex], nodes_per_unit: float,
                     panel_nodes: int = PANEL_NODES) -> Contour:
    """Composite Gauss-Legendre rule along straight segments between vertices."""
    if nodes_per_unit <= 0:
        raise InvalidResolution("nodes_per_unit must be positive")
    verts = [complex(v) for v in vertices]
    if len(verts) < 2:
        raise InvalidResolution("a contour needs at least two vertices")
    x, w = np.polynomial.legendre.leggauss(panel_nodes)
    nodes, weights, tangents = [], [], []
    for a, b in zip(verts[:-1], verts[1:]):
        length = abs(b - a)
        if length == 0:
            continue
        n_pan = max(1, int(np.ceil(length * nodes_per_unit / panel_nodes - 1e-9)))
        ends = np.linspace(0.0, 1.0, n_pan + 1)
        h = np.diff(ends)
        s = (ends[:-1, None] + (x[None, :] + 1) / 2 * h[:, None]).ravel()
        nodes.append(a + s * (b - a))
        weights.append((w[None, :] * h[:, None] / 2).ravel() * length)
        tangents.append(np.full(s.shape, (b - a) / length))
    return Contour(tuple(verts), np.concatenate(nodes), np.concatenate(weights),
                   np.concatenate(tangents))


@dataclass(frozen=True, eq=False)
class ContourFamily:
    """One contour per edge, each ending on the negative real axis at ``-R_tail``.

    ``R`` is the radius beyond which every contour lies on the real axis.
    """

    contours: tuple
    R: float
    R_tail: float

    def __len__(self) -> int:
        return len(self.contours)

    def __getitem__(self, i: int) -> Contour:
        return self.contours[i]

    @property
    def total_nodes(self) -> int:
        return sum(c.size for c in self.contours)

    def check(self) -> None:
        for i, c in enumerate(self.contours):
            if np.any(c.nodes.imag > 1e-12 * max(1.0, self.R_tail)):
                raise InvalidResolution(f"contour {i} leaves the closed lower half plane")
            far = np.abs(c.nodes) > self.R * (1 + 1e-12)
            if np.any(np.abs(c.nodes[far].imag) > 0) or np.any(c.nodes[far].real > 0):
                raise InvalidResolution(f"contour {i} is not on the negative axis beyond R")


def default_tail(poly: Polygon, N: int) -> float:
    """Truncation point of the real-axis tail.

    Covers the largest sample frequency pi N / sigma_min plus a stretch of
    length TAIL_DECAY / sigma_min over which the integrand has decayed.
    """
    return (np.pi * max(N, 0) + TAIL_DECAY) / float(poly.half_lengths.min())


def default_density(poly: Polygon) -> float:
    return 16.0 * max(1.0, poly.diameter / 2.0)


def default_contours(poly: Polygon, R: float | None = None, nodes_per_unit: float | None = None,
                     N: int = 0) -> ContourFamily:
    """Every contour is the segment [-R, 0] of the real axis."""
    R = default_tail(poly, N) if R is None else float(R)
    npu = default_density(poly) if nodes_per_unit is None else float(nodes_per_unit)
    if not R > 0:
        raise InvalidResolution("R must be positive")
    c = polyline_contour([0.0, -R], npu)
    fam = ContourFamily(tuple([c] * poly.n), 0.0, R)
    fam.check()
    return fam


def bent_contours(poly: Polygon, R: float | None = None, nodes_per_unit: float | None = None,
                  N: int = 0, angle: float = np.pi / 6, radius: float = 2.0) -> ContourFamily:
    """Dip below the axis along a ray ``-radius e^{i angle}``, return to the
    axis at ``-2 radius cos(angle)``, then follow it to ``-R``."""
    R = default_tail(poly, N) if R is None else float(R)
    npu = default_density(poly) if nodes_per_unit is None else float(nodes_per_unit)
    if not 0 < angle < np.pi / 2:
        raise InvalidResolution("angle must lie in (0, pi/2)")
    rejoin = 2 * radius * np.cos(angle)
    if not R > rejoin:
        raise InvalidResolution("R must exceed the rejoin point of the bend")
    verts = [0.0, -radius * np.exp(1j * angle), -rejoin, -R]
    c = polyline_contour(verts, npu)
    fam = ContourFamily(tuple([c] * poly.n), rejoin, R)
    fam.check()
    return fam


def polyline_contours(poly: Polygon, vertices: Sequence[complex], nodes_per_unit: float | None = None,
                      ) -> ContourFamily:
    """Same user-given polyline for every edge; it must end on the negative axis."""
    verts = [complex(v) for v in vertices]
    npu = default_density(poly) if nodes_per_unit is None else float(nodes_per_unit)
    end = verts[-1]
    if end.imag != 0 or end.real >= 0:
        raise InvalidResolution("contour must end on the negative real axis")
    # radius after which the polyline stays on the axis
    k = len(verts) - 1
    while k > 0 and verts[k - 1].imag == 0 and verts[k - 1].real <= 0:
        k -= 1
    c = polyline_contour(verts, npu)
    fam = ContourFamily(tuple([c] * poly.n), abs(verts[k]), abs(end))
    fam.check()
    return fam


def _images(poly: Polygon, Phi: SpectralVector, contours: ContourFamily) -> list[np.ndarray]:
    return [apply_T(poly, Phi, i, contours[i].nodes) for i in range(poly.n)]


def bilinear_a(poly: Polygon, Phi: SpectralVector, Psi: SpectralVector,
               contours: ContourFamily) -> float:
    tp, tq = _images(poly, Phi, contours), _images(poly, Psi, contours)
    return float(sum(np.real(np.sum(c.weights * a * np.conj(b)))
                     for c, a, b in zip(contours, tp, tq)))


def linear_l(poly: Polygon, Phi_t: SpectralVector, Psi: SpectralVector,
             contours: ContourFamily) -> float:
    tp, tq = _images(poly, Phi_t, contours), _images(poly, Psi, contours)
    return float(-sum(np.imag(np.sum(c.weights * a * np.conj(b)))
                      for c, a, b in zip(contours, tp, tq)))


class Discretization:
    """T-images of the real basis at every contour node, shared between the
    matrix, any number of right-hand sides and the energy."""

    def __init__(self, poly: Polygon, N: int, contours: ContourFamily | None = None):
        if N < 0:
            raise InvalidResolution("N must be non-negative")
        self.poly, self.N = poly, int(N)
        self.contours = contours if contours is not None else default_contours(poly, N=N)
        if len(self.contours) != poly.n:
            raise InvalidResolution("need one contour per edge")
        try:
            self.G = np.concatenate([real_basis_images(poly, i, c.nodes, N)
                                     for i, c in enumerate(self.contours)])
        except EvaluationOverflow as exc:
            raise AssemblyOverflow(str(exc)) from exc
        if not np.all(np.isfinite(self.G)):
            raise AssemblyOverflow("non-finite basis image on a contour")
        self.w = np.concatenate([c.weights for c in self.contours])
        self._matrix = None

    @property
    def size(self) -> int:
        return n_unknowns(self.poly.n, self.N)

    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            WG = self.w[:, None] * self.G
            self._matrix = np.real(self.G.conj().T @ WG)
        return self._matrix

    def data_images(self, Phi_t: SpectralVector) -> np.ndarray:
        try:
            return np.concatenate([apply_T(self.poly, Phi_t, i, c.nodes)
                                   for i, c in enumerate(self.contours)])
        except EvaluationOverflow as exc:
            raise AssemblyOverflow(str(exc)) from exc

    def rhs(self, Phi_t: SpectralVector) -> np.ndarray:
        g = self.data_images(Phi_t)
        return -np.imag((self.w * g) @ self.G.conj())


@dataclass(frozen=True, eq=False)
class GalerkinSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    n: int
    N: int
    condition: float = field(init=False)
    lambda_min: float = field(init=False)

    def __post_init__(self):
        sym = 0.5 * (self.matrix + self.matrix.T)
        ev = np.linalg.eigvalsh(sym)
        object.__setattr__(self, "lambda_min", float(ev[0]))
        cond = float(ev[-1] / ev[0]) if ev[0] > 0 else np.inf
        object.__setattr__(self, "condition", cond)

    @property
    def size(self) -> int:
        return len(self.rhs)

    def labels(self) -> list[tuple[int, int, str]]:
        return unknown_labels(self.n, self.N)

    def asymmetry(self) -> float:
        A = self.matrix
        return float(np.linalg.norm(A - A.T) / max(np.linalg.norm(A), np.finfo(float).tiny))

    def solve(self, rhs: np.ndarray | None = None) -> np.ndarray:
        b = self.rhs if rhs is None else rhs
        if self.condition > ILL_CONDITIONED:
            warnings.warn(f"Galerkin matrix condition estimate {self.condition:.3e}",
                          IllConditionedWarning, stacklevel=2)
        try:
            return sla.solve(self.matrix, b, assume_a="sym")
        except (sla.LinAlgError, ValueError) as exc:
            raise SingularSystem(str(exc)) from exc


def assemble(poly: Polygon, Phi_t: SpectralVector, N: int, contours: ContourFamily | None = None,
             disc: Discretization | None = None) -> GalerkinSystem:
    disc = disc if disc is not None else Discretization(poly, N, contours)
    return GalerkinSystem(disc.matrix(), disc.rhs(Phi_t), poly.n, disc.N)


@dataclass
class SolveDiagnostics:
    method: str
    N: int
    unknowns: int
    residual: float
    residual_per_edge: np.ndarray
    condition: float
    lambda_min: float
    energy: float
    data_norm: float
    flux: float
    seconds: float
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = {
            "method": self.method,
            "N": self.N,
            "unknowns": self.unknowns,
            "residual": self.residual,
            "relative_residual": self.residual / self.data_norm if self.data_norm > 0 else 0.0,
            "condition": self.condition,
            "lambda_min": self.lambda_min,
            "energy": self.energy,
            "data_norm": self.data_norm,
            "flux": self.flux,
            "seconds": self.seconds,
        }
        for i, r in enumerate(self.residual_per_edge):
            d[f"residual_edge_{i + 1}"] = float(r)
        d.update(self.extra)
        return d


def data_spectra(poly: Polygon, data, N: int, exact_data: bool = True) -> SpectralVector:
    """Tangential spectra from edge data (or pass a SpectralVector through).

    With ``exact_data`` the transforms are evaluated by quadrature wherever
    they are needed; otherwise they are first truncated to |J| <= N.
    """
    if isinstance(data, SpectralVector):
        return data if exact_data else data.truncated(N)
    if exact_data:
        return tangential_spectra(poly, data)
    return spectral_dirichlet(poly, data, N)


def flux(Phi_n: SpectralVector) -> float:
    """Sum over edges of the integral of the Neumann trace, i.e. sum_i Phi_n_i(0)."""
    return float(sum(np.real(c(0.0)) for c in Phi_n))


def solve_dn(poly: Polygon, data, N: int, contours: ContourFamily | None = None, *,
             exact_data: bool = True, disc: Discretization | None = None,
             residual_grids=None) -> tuple[SpectralVector, SolveDiagnostics]:
    """Neumann spectrum Phi_n from Dirichlet data by the Galerkin method.

    ``data`` is a list of :class:`EdgeData` or a tangential SpectralVector.
    """
    t0 = time.perf_counter()
    Phi_t = data_spectra(poly, data, N, exact_data)
    disc = disc if disc is not None else Discretization(poly, N, contours)
    system = assemble(poly, Phi_t, N, disc=disc)
    x = system.solve()
    Phi_n = symmetric_vector(poly, x, N)
    res = residual(poly, Phi_n, Phi_t, residual_grids)
    diag = SolveDiagnostics(
        method="galerkin",
        N=int(N),
        unknowns=system.size,
        residual=float(np.sqrt(np.sum(res**2))),
        residual_per_edge=res,
        condition=system.condition,
        lambda_min=system.lambda_min,
        energy=float(x @ system.matrix @ x),
        data_norm=norm_X(Phi_t),
        flux=flux(Phi_n),
        seconds=time.perf_counter() - t0,
        extra={"contour_nodes": disc.contours.total_nodes, "R_tail": disc.contours.R_tail},
    )
    return Phi_n, diag


def dn_linearity_check(poly: Polygon, Phi_t1, Phi_t2, a: float, b: float, N: int,
                       contours: ContourFamily | None = None) -> float:
    """Relative X-norm deviation of DN(a f + b g) from a DN(f) + b DN(g)."""
    disc = Discretization(poly, N, contours)
    s1 = data_spectra(poly, Phi_t1, N)
    s2 = data_spectra(poly, Phi_t2, N)
    combo = SpectralVector(a * u + b * v for u, v in zip(s1, s2))
    solve = lambda s: solve_dn(poly, s, N, disc=disc)[0]
    d1, d2, d12 = solve(s1), solve(s2), solve(combo)
    dev = norm_X(d12 - (a * d1 + b * d2))
    scale = abs(a) * norm_X(d1) + abs(b) * norm_X(d2)
    if scale == 0.0:
        return dev
    return dev / scale
