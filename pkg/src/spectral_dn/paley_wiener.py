"""Paley-Wiener functions on one edge and vectors of them over all edges.

Transforms follow the convention

    hat(phi)(lam) = integral_{-sigma}^{sigma} exp(-1j * lam * tau) phi(tau) dtau,

with no normalising constant, so that inversion carries 1 / (2 pi).

Two concrete representations share the evaluation interface
``f(lam, shift=None) -> exp(shift) * f(lam)``:

* :class:`PWFunction` -- a truncated sinc series whose coefficients are the
  samples ``f(pi J / sigma)``, ``|J| <= N``.
* :class:`SampledTransform` -- the transform of real data known at
  Gauss-Legendre nodes, evaluated by quadrature.

The optional ``shift`` is an exponent folded in before exponentiation; the
global-relation operator multiplies transforms by exponentials that are huge
where the transform is tiny (and vice versa), and folding them together keeps
every intermediate inside the double range.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

import numpy as np
from numpy.polynomial import legendre as L
from scipy.special import spherical_jn

from .errors import EvaluationOverflow, QuadratureUnderResolved

EXP_LIMIT = 700.0
TRANSFORM_TOL = 1e-10


@lru_cache(maxsize=64)
def _leggauss(n: int):
    x, w = L.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _check_exponent(re_exponent, what: str = "exponential") -> None:
    if re_exponent.size and np.nanmax(re_exponent) > EXP_LIMIT:
        raise EvaluationOverflow(
            f"{what} exponent reaches {np.nanmax(re_exponent):.1f} > {EXP_LIMIT:g}"
        )


def sinc_basis(sigma: float, J, lam, shift=None) -> np.ndarray:
    """exp(shift) * sin(sigma*lam - pi*J) / (sigma*lam - pi*J), broadcasting.

    The removable singularity is evaluated through ``np.sinc`` whenever
    ``|sigma*lam - pi*J| < 1``.
    """
    lam = np.asarray(lam, dtype=complex)
    x = sigma * lam - np.pi * np.asarray(J)
    if shift is None:
        shift = np.zeros_like(x)
    else:
        shift = np.broadcast_to(np.asarray(shift, dtype=complex), x.shape)
    _check_exponent(shift.real + np.abs(x.imag), "sinc basis")

    small = np.abs(x) < 1.0
    xs = np.where(small, 1.0, x)
    out = (np.exp(shift + 1j * x) - np.exp(shift - 1j * x)) / (2j * xs)
    if np.any(small):
        out = np.where(small, np.exp(shift) * np.sinc(np.where(small, x, 0.0) / np.pi), out)
    return out


@dataclass(frozen=True, eq=False)
class PWFunction:
    """Truncated sinc series sum_J coeffs[J] e_J on one edge.

    ``coeffs[k]`` belongs to ``J = k - N``.
    """

    sigma: float
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 1 or len(c) % 2 != 1:
            raise ValueError("coeffs must be a 1-D array of odd length 2N+1")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "sigma", float(self.sigma))

    @property
    def N(self) -> int:
        return (len(self.coeffs) - 1) // 2

    @property
    def J(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    def coeff(self, J: int) -> complex:
        return complex(self.coeffs[J + self.N])

    @classmethod
    def zeros(cls, sigma: float, N: int) -> "PWFunction":
        return cls(sigma, np.zeros(2 * N + 1, dtype=complex))

    @classmethod
    def basis(cls, sigma: float, N: int, J: int, value: complex = 1.0) -> "PWFunction":
        c = np.zeros(2 * N + 1, dtype=complex)
        c[J + N] = value
        return cls(sigma, c)

    def __call__(self, lam, shift=None) -> np.ndarray:
        lam = np.asarray(lam, dtype=complex)
        flat = lam.reshape(-1)
        sh = None if shift is None else np.broadcast_to(shift, lam.shape).reshape(-1)[:, None]
        vals = sinc_basis(self.sigma, self.J[None, :], flat[:, None], sh) @ self.coeffs
        return vals.reshape(lam.shape)

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        c = self.coeffs
        return bool(np.all(np.abs(c - np.conj(c[::-1])) <= tol * max(1.0, np.abs(c).max())))

    def l2_norm(self) -> float:
        return float(np.sqrt(np.pi / self.sigma * np.sum(np.abs(self.coeffs) ** 2)))

    def truncated(self, N: int) -> "PWFunction":
        """Restrict (or zero-pad) to |J| <= N."""
        c = np.zeros(2 * N + 1, dtype=complex)
        k = min(N, self.N)
        c[N - k:N + k + 1] = self.coeffs[self.N - k:self.N + k + 1]
        return PWFunction(self.sigma, c)

    def _same_grid(self, other: "PWFunction") -> None:
        if not isinstance(other, PWFunction):
            raise TypeError("arithmetic needs two PWFunction objects")
        if other.sigma != self.sigma or other.N != self.N:
            raise ValueError("PWFunction sigma/N mismatch")

    def __add__(self, other):
        self._same_grid(other)
        return PWFunction(self.sigma, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._same_grid(other)
        return PWFunction(self.sigma, self.coeffs - other.coeffs)

    def __mul__(self, a):
        return PWFunction(self.sigma, a * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self):
        return PWFunction(self.sigma, -self.coeffs)


def legendre_coefficients(values) -> np.ndarray:
    """Legendre coefficients of the interpolant through Gauss-Legendre samples."""
    values = np.asarray(values)
    n = len(values)
    x, w = _leggauss(n)
    V = L.legvander(x, n - 1)
    return (V.T @ (w * values)) * (2 * np.arange(n) + 1) / 2


def _quad_order(sigma: float, mu_abs_max: float, n_data: int) -> int:
    return int(np.ceil(1.25 * sigma * mu_abs_max)) + n_data + 24


def _transform_block(leg, sigma, mu, shift, q):
    x, w = _leggauss(q)
    tau = sigma * x
    vals = L.legval(x, leg)
    expo = shift[:, None] - 1j * mu[:, None] * tau[None, :]
    _check_exponent(expo.real, "Fourier transform")
    E = np.exp(expo)
    return E @ (sigma * w * vals), np.abs(E) @ (sigma * w * np.abs(vals))


def _forward(leg, sigma, lam, shift, tol, check, block=1024, n_check=64):
    lam = np.asarray(lam, dtype=complex)
    shape = lam.shape
    mu = lam.reshape(-1)
    sh = np.zeros_like(mu) if shift is None else np.broadcast_to(
        np.asarray(shift, dtype=complex), shape).reshape(-1)
    out = np.empty(mu.shape, dtype=complex)
    order = np.argsort(np.abs(mu))
    for start in range(0, len(order), block):
        idx = order[start:start + block]
        q = _quad_order(sigma, float(np.abs(mu[idx]).max()), len(leg))
        out[idx], _ = _transform_block(leg, sigma, mu[idx], sh[idx], q)
        if check:
            hard = idx[-n_check:]
            fine, scale = _transform_block(leg, sigma, mu[hard], sh[hard], q + max(16, q // 3))
            err = np.abs(fine - out[hard]) / np.maximum(scale, np.finfo(float).tiny)
            if err.max() > tol:
                raise QuadratureUnderResolved(
                    f"two-grid transform estimate {err.max():.2e} exceeds {tol:.0e}")
    return out.reshape(shape)


def forward_transform(values, sigma: float, lam, shift=None, *, tol: float = TRANSFORM_TOL,
                      check: bool = True) -> np.ndarray:
    """Fourier transform of data sampled at the Gauss-Legendre nodes on [-sigma, sigma].

    ``values`` are taken at ``gauss_grid(sigma, len(values))``; the data is
    interpolated by its Legendre series and integrated with a Gauss rule whose
    order grows with ``sigma * |lam|``.  With ``check`` the largest-|lam|
    evaluations are repeated on a finer rule and QuadratureUnderResolved is
    raised if the relative difference exceeds ``tol``.
    """
    leg = legendre_coefficients(np.asarray(values, dtype=complex))
    return _forward(leg, float(sigma), lam, shift, tol, check)


@dataclass(frozen=True, eq=False)
class SampledTransform:
    """Exact (to quadrature tolerance) transform of real edge data.

    ``values`` are samples at the Gauss-Legendre nodes on [-sigma, sigma].
    """

    sigma: float
    values: np.ndarray
    check: bool = True
    _leg: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "_leg", legendre_coefficients(v))

    @property
    def nodes(self) -> np.ndarray:
        return self.sigma * _leggauss(len(self.values))[0]

    def __call__(self, lam, shift=None) -> np.ndarray:
        return _forward(self._leg, self.sigma, lam, shift, TRANSFORM_TOL, self.check)

    def physical(self, tau) -> np.ndarray:
        return L.legval(np.asarray(tau) / self.sigma, self._leg)

    def _combine(self, other, a=1.0, b=1.0):
        if not isinstance(other, SampledTransform) or other.sigma != self.sigma \
                or len(other.values) != len(self.values):
            raise ValueError("SampledTransform grid mismatch")
        return SampledTransform(self.sigma, a * self.values + b * other.values, self.check)

    def __add__(self, other):
        return self._combine(other)

    def __sub__(self, other):
        return self._combine(other, 1.0, -1.0)

    def __mul__(self, a):
        return SampledTransform(self.sigma, a * self.values, self.check)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def l2_norm(self) -> float:
        # Parseval: ||hat phi||_2^2 = 2 pi ||phi||^2
        _, w = _leggauss(len(self.values))
        return float(np.sqrt(2 * np.pi * self.sigma * np.sum(w * self.values**2)))

    def sampled(self, N: int) -> PWFunction:
        """Sinc coefficients: samples at pi J / sigma for |J| <= N."""
        J = np.arange(-N, N + 1)
        c = self(np.pi * J / self.sigma)
        return project_symmetric(PWFunction(self.sigma, c))


EdgeFunction = Union[PWFunction, SampledTransform]


def pw_eval(f: EdgeFunction, lam, shift=None) -> np.ndarray:
    return f(lam, shift)


def star(f: EdgeFunction, lam) -> np.ndarray:
    """f*(lam) = conj(f(-conj(lam)))."""
    lam = np.asarray(lam, dtype=complex)
    return np.conj(f(-np.conj(lam)))


def project_symmetric(f: PWFunction) -> PWFunction:
    c = f.coeffs
    return PWFunction(f.sigma, 0.5 * (c + np.conj(c[::-1])))


def project_antisymmetric(f: PWFunction) -> PWFunction:
    c = f.coeffs
    return PWFunction(f.sigma, 0.5 * (c - np.conj(c[::-1])))


def inverse_transform(f: PWFunction, tau) -> np.ndarray:
    """Fourier partial sum sum_J coeffs[J] exp(1j pi J tau / sigma) / (2 sigma)."""
    tau = np.asarray(tau, dtype=float)
    phase = np.exp(1j * np.pi * np.multiply.outer(tau, f.J) / f.sigma)
    return phase @ f.coeffs / (2 * f.sigma)


def _legendre_transform_samples(sigma: float, N: int, degree: int) -> np.ndarray:
    """Columns: transform of P_l(tau/sigma) at pi J / sigma, J = 0..N."""
    w = np.pi * np.arange(N + 1)
    return np.stack([sigma * 2 * (-1j) ** l * spherical_jn(l, w) for l in range(degree + 1)],
                    axis=1)


def legendre_trace(f: PWFunction, tau, degree: int = 10, endpoint_terms: int = 2) -> np.ndarray:
    """Physical samples from sinc coefficients by a Legendre fit.

    Fits a polynomial of the given degree whose transform samples match the
    coefficients in least squares, alongside ``endpoint_terms`` columns
    ((-1)^J and 1j*J*(-1)^J) that absorb mass concentrated at the two edge
    endpoints.  Unlike :func:`inverse_transform` this does not suffer Gibbs
    oscillation for data that is smooth on the edge but not periodic.
    """
    N = f.N
    dofs = 2 * N + 1
    endpoint_terms = max(0, min(endpoint_terms, dofs - 1))
    degree = max(0, min(degree, dofs - 1 - endpoint_terms))
    J = np.arange(N + 1)
    cols = [_legendre_transform_samples(f.sigma, N, degree)]
    sign = (-1.0) ** J
    extra = [sign + 0j, 1j * J * sign][:endpoint_terms]
    if extra:
        cols.append(np.stack(extra, axis=1))
    W = np.concatenate(cols, axis=1)
    c = f.coeffs[N:]
    A = np.concatenate([W.real, W[1:].imag])
    b = np.concatenate([c.real, c[1:].imag])
    g, *_ = np.linalg.lstsq(A, b, rcond=None)
    return L.legval(np.asarray(tau, dtype=float) / f.sigma, g[:degree + 1])


@dataclass(frozen=True, eq=False)
class SpectralVector:
    """One edge function per polygon edge."""

    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i: int) -> EdgeFunction:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def sigmas(self) -> np.ndarray:
        return np.array([c.sigma for c in self.components])

    @property
    def is_truncated(self) -> bool:
        return all(isinstance(c, PWFunction) for c in self.components)

    @property
    def N(self) -> int:
        Ns = {c.N for c in self.components}
        if not self.is_truncated or len(Ns) != 1:
            raise ValueError("vector has no single truncation order")
        return Ns.pop()

    def coeff_matrix(self) -> np.ndarray:
        """Shape (n, 2N+1)."""
        _ = self.N  # raises unless every component shares one truncation
        return np.stack([c.coeffs for c in self.components])

    @classmethod
    def from_coeffs(cls, sigmas: Sequence[float], coeffs) -> "SpectralVector":
        return cls(tuple(PWFunction(s, c) for s, c in zip(sigmas, np.asarray(coeffs))))

    @classmethod
    def zeros(cls, sigmas: Sequence[float], N: int) -> "SpectralVector":
        return cls(tuple(PWFunction.zeros(s, N) for s in sigmas))

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        return all(c.is_symmetric(tol) for c in self.components if isinstance(c, PWFunction))

    def truncated(self, N: int) -> "SpectralVector":
        comps = [c.truncated(N) if isinstance(c, PWFunction) else c.sampled(N)
                 for c in self.components]
        return SpectralVector(comps)

    def __add__(self, other):
        return SpectralVector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return SpectralVector(a - b for a, b in zip(self, other))

    def __mul__(self, a):
        return SpectralVector(a * c for c in self)

    __rmul__ = __mul__

    def __neg__(self):
        return SpectralVector(-c for c in self)


def norm_X(Phi: SpectralVector) -> float:
    """(sum_i ||Phi_i||_2^2)^(1/2), computed by Parseval."""
    return float(np.sqrt(sum(c.l2_norm() ** 2 for c in Phi)))


def norm_Y_negaxis(values, lam=None, weights=None) -> float:
    """Discrete L2(R^-)^n norm of per-edge values.

    ``values`` has shape (n, K) (or (K,) for one edge).  Supply either
    quadrature ``weights`` for the nodes or the grid ``lam``, in which case the
    trapezoid rule is used.
    """
    v = np.atleast_2d(np.asarray(values))
    if weights is None:
        if lam is None:
            raise ValueError("need a grid or quadrature weights")
        lam = np.asarray(lam, dtype=float)
        weights = trapezoid_weights(lam)
    weights = np.asarray(weights, dtype=float)
    return float(np.sqrt(np.sum(weights * np.abs(v) ** 2)))


def trapezoid_weights(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if len(x) < 2:
        return np.zeros_like(x)
    h = np.abs(np.diff(x))
    w = np.zeros_like(x)
    w[:-1] += h / 2
    w[1:] += h / 2
    return w
