import numpy as np
import pytest

from _support import ORACLES, POLYGONS, galerkin, interior_points, spectra
from spectral_dn.errors import TooCloseToBoundary
from spectral_dn.oracles import get_oracle
from spectral_dn.paley_wiener import PWFunction, SpectralVector
from spectral_dn.reconstruction import dq_dz, imaginary_residue, neumann_trace


def test_zero_data(square):
    Z = SpectralVector.zeros(square.half_lengths, 4)
    assert dq_dz(square, Z, Z, 0.1 + 0.2j) == 0
    assert np.all(neumann_trace(square, Z, 2, np.linspace(-1, 1, 5)) == 0)


def test_q_equals_x(square):
    Phi_n, _ = galerkin("square", "x", 24)
    assert dq_dz(square, spectra("square", "x"), Phi_n, 0.2 + 0.1j) == pytest.approx(0.5, abs=1e-3)


def test_x2_minus_y2(square):
    Phi_n, _ = galerkin("square", "x2-y2", 24)
    got = dq_dz(square, spectra("square", "x2-y2"), Phi_n, 0.3 + 0.4j)
    assert got == pytest.approx(0.3 + 0.4j, abs=1e-3)


@pytest.mark.parametrize("name", ORACLES)
def test_gradient_on_pentagon(name):
    poly = POLYGONS["pentagon"]
    Phi_n, _ = galerkin("pentagon", name, 24)
    z = interior_points(poly, 6, 0.3, seed=3)
    got = dq_dz(poly, spectra("pentagon", name), Phi_n, z)
    assert np.max(np.abs(got - get_oracle(name).dq_dz(z))) < 1e-2


def test_ray_truncation_robust(square):
    Phi_n, _ = galerkin("square", "re_z3", 24)
    Pt = spectra("square", "re_z3")
    z = interior_points(square, 4, 0.3, seed=1)
    assert np.max(np.abs(dq_dz(square, Pt, Phi_n, z) - dq_dz(square, Pt, Phi_n, z, ray_truncation=80))) < 1e-8


def test_too_close_to_boundary(square):
    Z = SpectralVector.zeros(square.half_lengths, 2)
    with pytest.raises(TooCloseToBoundary):
        dq_dz(square, Z, Z, 0.99)
    with pytest.raises(TooCloseToBoundary):
        dq_dz(square, Z, Z, 3.0)


def test_trace_methods(square):
    Phi_n, _ = galerkin("square", "x", 24)
    tau = np.linspace(-0.9, 0.9, 19)
    assert np.allclose(neumann_trace(square, Phi_n, 1, tau, method="fourier"), 1.0, atol=0.05)
    assert np.allclose(neumann_trace(square, Phi_n, 1, tau), 1.0, atol=1e-10)
    with pytest.raises(ValueError):
        neumann_trace(square, Phi_n, 1, tau, method="spline")


def test_xy_bottom_trace(square):
    Phi_n, _ = galerkin("square", "xy", 24)
    tau = np.linspace(-0.9, 0.9, 37)
    assert np.allclose(neumann_trace(square, Phi_n, 0, tau), -tau, atol=2e-2)
    assert imaginary_residue(Phi_n[0], tau) < 1e-10
    assert imaginary_residue(PWFunction(1.0, [0, 1j, 0]), tau) == pytest.approx(1.0)
