"""Interior gradient from spectral boundary data, and physical Neumann traces.

For z inside the polygon

    dq/dz = 1/(4 pi) sum_i e^{-i alpha_i} int_0^inf exp(i r e^{-i alpha_i}(z - m_i))
                                            [Phi_t_i(r) + i Phi_n_i(r)] dr,

the ray lam = r e^{-i alpha_i} form of the spectral representation.  The
integrand decays like exp(-r d_i) where d_i is the distance from z to the
line through edge i.
"""

from __future__ import annotations

import numpy as np

from .errors import TooCloseToBoundary
from .geometry import Polygon
from .paley_wiener import PWFunction, SpectralVector, inverse_transform, legendre_trace

RAY_DECAY = 40.0
MARGIN_FRACTION = 0.05
PANEL_NODES = 24


def _ray_rule(length: float, freq: float):
    """Composite Gauss-Legendre on [0, length] resolving frequency ``freq``."""
    x, w = np.polynomial.legendre.leggauss(PANEL_NODES)
    h = min(length, 6.0 / max(freq, 1e-12))
    n_pan = max(1, int(np.ceil(length / h)))
    ends = np.linspace(0.0, length, n_pan + 1)
    hh = np.diff(ends)
    r = (ends[:-1, None] + (x[None, :] + 1) / 2 * hh[:, None]).ravel()
    wr = (w[None, :] * hh[:, None] / 2).ravel()
    return r, wr


def _dq_dz_point(poly: Polygon, Phi_t: SpectralVector, Phi_n: SpectralVector, z: complex,
                 decay: float) -> complex:
    d = poly.edge_distance(z)
    total = 0j
    for i in range(poly.n):
        rot = np.exp(-1j * poly.alphas[i])
        k = rot * (z - poly.midpoints[i])  # Im k = d_i > 0
        length = decay / d[i]
        r, w = _ray_rule(length, abs(k.real) + poly.half_lengths[i])
        shift = 1j * r * k
        vals = Phi_t[i](r, shift) + 1j * Phi_n[i](r, shift)
        total += rot * np.sum(w * vals)
    return total / (4 * np.pi)


def dq_dz(poly: Polygon, Phi_t: SpectralVector, Phi_n: SpectralVector, z,
          ray_truncation: float = RAY_DECAY, margin: float | None = None):
    """Complex derivative dq/dz at interior points ``z``.

    Ray ``i`` is cut at r = ray_truncation / d_i, so the neglected tail is of
    size exp(-ray_truncation).  Points closer than ``margin`` (default 5% of
    the diameter) to the boundary raise TooCloseToBoundary.
    """
    margin = MARGIN_FRACTION * poly.diameter if margin is None else margin
    z_arr = np.asarray(z, dtype=complex)
    dist = poly.boundary_distance(z_arr)
    if np.any(dist <= margin):
        raise TooCloseToBoundary(
            f"boundary distance {float(np.min(dist)):.3g} is within the margin {margin:.3g}")
    out = np.array([_dq_dz_point(poly, Phi_t, Phi_n, complex(p), ray_truncation)
                    for p in z_arr.reshape(-1)])
    return complex(out[0]) if z_arr.ndim == 0 else out.reshape(z_arr.shape)


def neumann_trace(poly: Polygon, Phi_n: SpectralVector, i: int, tau,
                  method: str = "legendre", degree: int = 10) -> np.ndarray:
    """Real samples of the Neumann trace on edge i.

    ``legendre`` fits a low-degree polynomial (plus corner-mass terms) to the
    sinc coefficients; ``fourier`` is the plain Fourier partial sum, which
    oscillates near the corners for non-periodic traces.
    """
    f = Phi_n[i]
    if not isinstance(f, PWFunction):
        f = f.sampled(32)
    tau = np.asarray(tau, dtype=float)
    if method == "legendre":
        return legendre_trace(f, tau, degree=degree)
    if method == "fourier":
        return inverse_transform(f, tau).real
    raise ValueError(f"unknown trace method {method!r}")


def imaginary_residue(f: PWFunction, tau) -> float:
    """max |Im| / max |.| of the Fourier partial sum; zero for symmetric f."""
    v = inverse_transform(f, tau)
    scale = float(np.abs(v).max())
    return float(np.abs(v.imag).max() / scale) if scale > 0 else 0.0
