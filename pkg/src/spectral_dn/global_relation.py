"""Edge data, the coupling operator T = I + K and global-relation residuals.

For edge ``i`` the operator is

    (K Phi)_i(lam) = sum_{j != i} exp(1j e^{-i alpha_i} (m_i - m_j) lam) Phi_j(e^{-i Delta_ij} lam)

and boundary data of a harmonic function satisfies ``T(Phi_n - 1j Phi_t) = 0``.
The exponential prefactor is always passed to the component evaluator as a
``shift`` so that it is combined with the component's own exponentials
before anything is exponentiated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import legendre as L

from .errors import MissingData, NonRealData
from .geometry import Polygon, edge_point, gauss_grid
from .paley_wiener import (
    EdgeFunction,
    PWFunction,
    legendre_coefficients,
    SampledTransform,
    SpectralVector,
    norm_Y_negaxis,
    project_symmetric,
    sinc_basis,
    trapezoid_weights,
)

DEFAULT_NODES = 64
RESIDUAL_WINDOW = 20.0
RESIDUAL_POINTS = 200


def _real(values, name: str) -> np.ndarray:
    v = np.asarray(values)
    if np.iscomplexobj(v):
        if np.any(np.abs(v.imag) > 1e-12 * max(1.0, float(np.abs(v).max()))):
            raise NonRealData(f"{name} data has a nonzero imaginary part")
        v = v.real
    v = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} data is not finite")
    return v


@dataclass(frozen=True, eq=False)
class EdgeData:
    """Real boundary data of one edge sampled at Gauss-Legendre nodes.

    ``tau`` holds the nodes on [-sigma, sigma]; ``fit_residual`` is the
    least-squares misfit when the data came from scattered samples.
    """

    sigma: float
    tau: np.ndarray
    tangential: np.ndarray
    dirichlet: Optional[np.ndarray] = None
    neumann: Optional[np.ndarray] = None
    fit_residual: float = 0.0

    @classmethod
    def from_functions(cls, sigma: float, dirichlet: Callable | None = None,
                       tangential: Callable | None = None, neumann: Callable | None = None,
                       n_nodes: int = DEFAULT_NODES) -> "EdgeData":
        """Sample callables of tau.  The tangential derivative is obtained by
        differentiating the Legendre interpolant of ``dirichlet`` when absent."""
        if dirichlet is None and tangential is None:
            raise MissingData("edge needs Dirichlet or tangential data")
        tau, _ = gauss_grid(sigma, n_nodes)
        f = None if dirichlet is None else _real(dirichlet(tau), "Dirichlet")
        if tangential is not None:
            t = _real(tangential(tau), "tangential")
        else:
            t = _differentiate(f, sigma)
        nrm = None if neumann is None else _real(neumann(tau), "Neumann")
        return cls(float(sigma), tau, t, f, nrm)

    @classmethod
    def from_samples(cls, sigma: float, tau, values, degree: int | None = None,
                     n_nodes: int = DEFAULT_NODES) -> "EdgeData":
        """Fit Dirichlet samples at arbitrary ``tau`` by a Legendre series and
        differentiate it.  The RMS misfit is kept in ``fit_residual``."""
        tau = np.asarray(tau, dtype=float)
        values = _real(values, "Dirichlet")
        if tau.shape != values.shape or tau.ndim != 1:
            raise ValueError("tau and values must be 1-D arrays of equal length")
        if len(tau) == 0:
            raise MissingData("no Dirichlet samples")
        if np.any(np.abs(tau) > sigma * (1 + 1e-12)):
            raise ValueError("sample positions must lie in [-sigma, sigma]")
        if degree is None:
            degree = min(len(tau) - 1, 24)
        coef = L.legfit(tau / sigma, values, degree)
        misfit = float(np.sqrt(np.mean((L.legval(tau / sigma, coef) - values) ** 2)))
        nodes, _ = gauss_grid(sigma, n_nodes)
        f = L.legval(nodes / sigma, coef)
        t = L.legval(nodes / sigma, L.legder(coef)) / sigma
        return cls(float(sigma), nodes, t, f, None, misfit)

    @classmethod
    def zero(cls, sigma: float, n_nodes: int = DEFAULT_NODES) -> "EdgeData":
        tau, _ = gauss_grid(sigma, n_nodes)
        z = np.zeros_like(tau)
        return cls(float(sigma), tau, z, z.copy(), None)

    def tangential_transform(self) -> SampledTransform:
        return SampledTransform(self.sigma, self.tangential)

    def neumann_transform(self) -> SampledTransform:
        if self.neumann is None:
            raise MissingData("edge has no Neumann data")
        return SampledTransform(self.sigma, self.neumann)


def _differentiate(values: np.ndarray, sigma: float) -> np.ndarray:
    coef = legendre_coefficients(values)
    x = np.polynomial.legendre.leggauss(len(values))[0]
    return L.legval(x, L.legder(coef)) / sigma


def _check_edges(poly: Polygon, data: Sequence[EdgeData]) -> None:
    if len(data) != poly.n:
        raise MissingData(f"expected data for {poly.n} edges, got {len(data)}")
    for i, (d, s) in enumerate(zip(data, poly.half_lengths)):
        if d is None:
            raise MissingData(f"no data for edge {i}")
        if abs(d.sigma - s) > 1e-9 * s:
            raise ValueError(f"edge {i}: data half-length {d.sigma} != {s}")


def corner_mismatch(poly: Polygon, data: Sequence[EdgeData]) -> float:
    """Largest jump of the Dirichlet data across a corner (soft H1 check)."""
    _check_edges(poly, data)
    jumps = []
    for i in range(poly.n):
        a, b = data[i], data[(i + 1) % poly.n]
        if a.dirichlet is None or b.dirichlet is None:
            continue
        ca, cb = legendre_coefficients(a.dirichlet), legendre_coefficients(b.dirichlet)
        jumps.append(abs(L.legval(1.0, ca) - L.legval(-1.0, cb)))
    return float(max(jumps)) if jumps else 0.0


def tangential_spectra(poly: Polygon, data: Sequence[EdgeData]) -> SpectralVector:
    """Exact (quadrature) transforms of the tangential derivatives."""
    _check_edges(poly, data)
    return SpectralVector(d.tangential_transform() for d in data)


def neumann_spectra(poly: Polygon, data: Sequence[EdgeData]) -> SpectralVector:
    _check_edges(poly, data)
    return SpectralVector(d.neumann_transform() for d in data)


def spectral_dirichlet(poly: Polygon, data: Sequence[EdgeData], N: int) -> SpectralVector:
    """Symmetric sinc coefficients of the tangential-derivative transforms."""
    if N < 0:
        raise ValueError("N must be non-negative")
    return SpectralVector(st.sampled(N) for st in tangential_spectra(poly, data))


def coupling(poly: Polygon, i: int, j: int, lam):
    """Rotated argument and exponent of the (i, j) term of T at ``lam``."""
    lam = np.asarray(lam, dtype=complex)
    if i == j:
        return lam, np.zeros_like(lam)
    mu = np.exp(-1j * poly.delta[i, j]) * lam
    shift = 1j * np.exp(-1j * poly.alphas[i]) * (poly.midpoints[i] - poly.midpoints[j]) * lam
    return mu, shift


def apply_K(poly: Polygon, Phi: SpectralVector, i: int, lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=complex)
    out = np.zeros(lam.shape, dtype=complex)
    for j in range(poly.n):
        if j != i:
            mu, shift = coupling(poly, i, j, lam)
            out = out + Phi[j](mu, shift)
    return out


def apply_T(poly: Polygon, Phi: SpectralVector, i: int, lam) -> np.ndarray:
    if len(Phi) != poly.n:
        raise ValueError(f"vector has {len(Phi)} components for {poly.n} edges")
    lam = np.asarray(lam, dtype=complex)
    return Phi[i](lam) + apply_K(poly, Phi, i, lam)


def rho(poly: Polygon, i: int, phi_t: EdgeFunction, phi_n: EdgeFunction, lam) -> np.ndarray:
    """Spectral function of edge i: exp(-i lam m_i)/2 [phi_t + i phi_n](e^{i alpha_i} lam)."""
    lam = np.asarray(lam, dtype=complex)
    mu = np.exp(1j * poly.alphas[i]) * lam
    shift = -1j * lam * poly.midpoints[i]
    return 0.5 * (phi_t(mu, shift) + 1j * phi_n(mu, shift))


def default_residual_grid(poly: Polygon) -> list[np.ndarray]:
    g = np.linspace(-RESIDUAL_WINDOW, 0.0, RESIDUAL_POINTS)
    return [g] * poly.n


def residual(poly: Polygon, Phi_n: SpectralVector, Phi_t: SpectralVector,
             grids: Sequence[np.ndarray] | None = None) -> np.ndarray:
    """Per-edge trapezoid L2 norms of T(Phi_n - i Phi_t) on real grids."""
    grids = default_residual_grid(poly) if grids is None else grids
    out = np.empty(poly.n)
    for i, g in enumerate(grids):
        g = np.asarray(g, dtype=float)
        val = apply_T(poly, Phi_n, i, g) - 1j * apply_T(poly, Phi_t, i, g)
        out[i] = norm_Y_negaxis(val, weights=trapezoid_weights(g))
    return out


def residual_norm(poly: Polygon, Phi_n: SpectralVector, Phi_t: SpectralVector,
                  grids: Sequence[np.ndarray] | None = None) -> float:
    return float(np.sqrt(np.sum(residual(poly, Phi_n, Phi_t, grids) ** 2)))


# --- real unknowns ---------------------------------------------------------
#
# Per edge j the unknowns are ordered X^0, X^1, Y^1, ..., X^N, Y^N with
# c_J = X^J + i Y^J and c_{-J} = X^J - i Y^J.


def n_unknowns(n: int, N: int) -> int:
    return n * (2 * N + 1)


def unknown_index(j: int, J: int, part: str, N: int) -> int:
    """Position of X_j^J (part 'X') or Y_j^J (part 'Y') in the real vector."""
    if not 0 <= J <= N:
        raise IndexError(f"J={J} outside 0..{N}")
    base = j * (2 * N + 1)
    if J == 0:
        if part != "X":
            raise IndexError("Y^0 is not an unknown (it vanishes by symmetry)")
        return base
    return base + 2 * J - 1 + (part == "Y")


def unknown_labels(n: int, N: int) -> list[tuple[int, int, str]]:
    labels = []
    for j in range(n):
        labels.append((j, 0, "X"))
        for J in range(1, N + 1):
            labels += [(j, J, "X"), (j, J, "Y")]
    return labels


def real_to_coeffs(x, n: int, N: int) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(n, 2 * N + 1)
    c = np.zeros((n, 2 * N + 1), dtype=complex)
    c[:, N] = x[:, 0]
    X, Y = x[:, 1::2], x[:, 2::2]
    c[:, N + 1:] = X + 1j * Y
    c[:, :N] = (X - 1j * Y)[:, ::-1]
    return c


def coeffs_to_real(c) -> np.ndarray:
    """Inverse of :func:`real_to_coeffs` on the symmetric part of ``c``."""
    c = np.asarray(c, dtype=complex)
    n, m = c.shape
    N = (m - 1) // 2
    pos = 0.5 * (c[:, N + 1:] + np.conj(c[:, :N][:, ::-1]))
    x = np.zeros((n, m))
    x[:, 0] = c[:, N].real
    x[:, 1::2] = pos.real
    x[:, 2::2] = pos.imag
    return x.reshape(-1)


def basis_images(poly: Polygon, i: int, lam, N: int) -> np.ndarray:
    """(T applied to e_j (x) e_J)_i at ``lam``; shape (len(lam), n, 2N+1)."""
    lam = np.asarray(lam, dtype=complex).reshape(-1)
    J = np.arange(-N, N + 1)
    out = np.empty((len(lam), poly.n, 2 * N + 1), dtype=complex)
    for j in range(poly.n):
        mu, shift = coupling(poly, i, j, lam)
        out[:, j, :] = sinc_basis(poly.half_lengths[j], J[None, :], mu[:, None], shift[:, None])
    return out


def real_basis_images(poly: Polygon, i: int, lam, N: int) -> np.ndarray:
    """Columns for the real unknowns: e_0, e_J + e_-J and i(e_J - e_-J)."""
    B = basis_images(poly, i, lam, N)
    K = B.shape[0]
    cols = np.empty((K, poly.n, 2 * N + 1), dtype=complex)
    cols[:, :, 0] = B[:, :, N]
    plus, minus = B[:, :, N + 1:], B[:, :, :N][:, :, ::-1]
    cols[:, :, 1::2] = plus + minus
    cols[:, :, 2::2] = 1j * (plus - minus)
    return cols.reshape(K, -1)


def symmetric_vector(poly: Polygon, x, N: int) -> SpectralVector:
    c = real_to_coeffs(x, poly.n, N)
    return SpectralVector(project_symmetric(PWFunction(s, row))
                          for s, row in zip(poly.half_lengths, c))


def edge_samples(poly: Polygon, i: int, n_nodes: int = DEFAULT_NODES):
    """Gauss-Legendre nodes on edge i and the matching boundary points."""
    tau, w = gauss_grid(poly.half_lengths[i], n_nodes)
    return tau, w, edge_point(poly, i, tau)
