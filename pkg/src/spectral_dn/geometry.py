"""Convex polygons and the per-edge chart data used by the spectral solvers.

Edges are indexed from 0.  Edge ``i`` runs from ``vertices[i]`` to
``vertices[i + 1]`` (cyclically) and is parametrised by

    psi_i(tau) = midpoints[i] + tau * exp(1j * alphas[i]),  |tau| <= half_lengths[i].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateEdge, NonConvex, OutOfRange, TooFewVertices

CONVEXITY_RTOL = 1e-12
EDGE_RTOL = 1e-12


def _as_complex_points(vertices) -> np.ndarray:
    pts = []
    for v in vertices:
        if isinstance(v, (complex, float, int, np.number)):
            pts.append(complex(v))
        else:
            x, y = v
            pts.append(complex(float(x), float(y)))
    return np.asarray(pts, dtype=complex)


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a.real * b.imag - a.imag * b.real


@dataclass(frozen=True, eq=False)
class Polygon:
    vertices: np.ndarray
    alphas: np.ndarray
    midpoints: np.ndarray
    half_lengths: np.ndarray
    delta: np.ndarray

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def directions(self) -> np.ndarray:
        """Unit tangents exp(i alpha_i)."""
        return np.exp(1j * self.alphas)

    @property
    def diameter(self) -> float:
        z = self.vertices
        return float(np.abs(z[:, None] - z[None, :]).max())

    def edge_vertices(self, i: int) -> tuple[complex, complex]:
        return complex(self.vertices[i]), complex(self.vertices[(i + 1) % self.n])

    def edge_distance(self, z) -> np.ndarray:
        """Signed distances from ``z`` to every edge line, positive inside.

        Returns an array of shape ``(n,) + shape(z)``.
        """
        z = np.asarray(z, dtype=complex)
        rot = np.exp(-1j * self.alphas).reshape((-1,) + (1,) * z.ndim)
        mid = self.midpoints.reshape((-1,) + (1,) * z.ndim)
        return np.imag(rot * (z[None, ...] - mid))

    def boundary_distance(self, z) -> np.ndarray:
        """Distance to the boundary for interior points (negative outside)."""
        return self.edge_distance(z).min(axis=0)

    def contains(self, z, margin: float = 0.0) -> np.ndarray:
        return self.boundary_distance(z) > margin

    def transformed(self, rotation: float = 0.0, shift: complex = 0.0) -> "Polygon":
        """Rigid motion z -> exp(i rotation) z + shift."""
        return build_polygon(np.exp(1j * rotation) * self.vertices + shift)

    def __repr__(self) -> str:
        pts = ", ".join(f"({v.real:.6g}, {v.imag:.6g})" for v in self.vertices)
        return f"Polygon([{pts}])"


def build_polygon(vertices: Iterable) -> Polygon:
    """Build a strictly convex polygon from complex points or (x, y) pairs.

    Clockwise input is reversed to counterclockwise.  Raises TooFewVertices,
    DegenerateEdge or NonConvex.
    """
    z = _as_complex_points(vertices)
    if len(z) < 3:
        raise TooFewVertices(f"need at least 3 vertices, got {len(z)}")

    edges = np.roll(z, -1) - z
    scale = float(np.abs(z - z.mean()).max())
    if scale == 0.0 or np.any(np.abs(edges) <= EDGE_RTOL * scale):
        k = int(np.argmin(np.abs(edges)))
        raise DegenerateEdge(f"edge {k} has length {abs(edges[k]):.3e}")

    signed_area = 0.5 * np.sum(_cross(z, np.roll(z, -1)))
    if signed_area < 0:
        z = z[::-1].copy()
        edges = np.roll(z, -1) - z

    turns = _cross(edges, np.roll(edges, -1))
    tol = CONVEXITY_RTOL * scale**2
    if np.any(turns <= tol):
        k = int(np.argmin(turns))
        raise NonConvex(
            f"interior angle at vertex {(k + 1) % len(z)} is not less than pi "
            f"(cross product {turns[k]:.3e})"
        )

    alphas = np.angle(edges)
    # principal values in (-pi, pi]
    alphas = np.where(alphas <= -np.pi, alphas + 2 * np.pi, alphas)
    midpoints = 0.5 * (z + np.roll(z, -1))
    half_lengths = 0.5 * np.abs(edges)
    delta = alphas[:, None] - alphas[None, :]
    for arr in (z, alphas, midpoints, half_lengths, delta):
        arr.setflags(write=False)
    return Polygon(z, alphas, midpoints, half_lengths, delta)


def regular_polygon(n: int, radius: float = 1.0, center: complex = 0.0,
                    phase: float = 0.0) -> Polygon:
    k = np.arange(n)
    return build_polygon(center + radius * np.exp(1j * (phase + 2 * np.pi * k / n)))


def edge_point(poly: Polygon, i: int, tau):
    """Point psi_i(tau) on edge ``i``.  Raises OutOfRange for |tau| > sigma_i."""
    tau_arr = np.asarray(tau, dtype=float)
    sigma = poly.half_lengths[i]
    if np.any(np.abs(tau_arr) > sigma * (1 + 1e-14)):
        raise OutOfRange(f"|tau| exceeds half-length {sigma:.6g} of edge {i}")
    out = poly.midpoints[i] + tau_arr * np.exp(1j * poly.alphas[i])
    return complex(out) if out.ndim == 0 else out


def outward_normal(poly: Polygon, i: int) -> complex:
    if not -poly.n <= i < poly.n:
        raise IndexError(f"edge index {i} out of range for {poly.n} edges")
    return complex(-1j * np.exp(1j * poly.alphas[i]))


def gauss_grid(sigma: float, n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-sigma, sigma]."""
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    return sigma * x, sigma * w


def as_polygon(obj: Polygon | Sequence) -> Polygon:
    return obj if isinstance(obj, Polygon) else build_polygon(obj)
