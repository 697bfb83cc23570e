"""Closed-form harmonic test functions q = Re F(z) and their edge traces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import Polygon, edge_point, outward_normal
from .global_relation import DEFAULT_NODES, EdgeData


@dataclass(frozen=True)
class HarmonicOracle:
    """q = Re F with F analytic; ``dF`` is F'."""

    name: str
    F: Callable
    dF: Callable

    def value(self, z) -> np.ndarray:
        return np.real(self.F(np.asarray(z, dtype=complex)))

    def gradient(self, z) -> np.ndarray:
        """q_x + i q_y."""
        return np.conj(self.dF(np.asarray(z, dtype=complex)))

    def dq_dz(self, z) -> np.ndarray:
        return 0.5 * self.dF(np.asarray(z, dtype=complex))

    def directional(self, z, d: complex) -> np.ndarray:
        return np.real(self.dF(np.asarray(z, dtype=complex)) * d)

    def dirichlet(self, poly: Polygon, i: int, tau) -> np.ndarray:
        return self.value(edge_point(poly, i, tau))

    def tangential(self, poly: Polygon, i: int, tau) -> np.ndarray:
        return self.directional(edge_point(poly, i, tau), np.exp(1j * poly.alphas[i]))

    def neumann(self, poly: Polygon, i: int, tau) -> np.ndarray:
        return self.directional(edge_point(poly, i, tau), outward_normal(poly, i))

    def edge_data(self, poly: Polygon, n_nodes: int = DEFAULT_NODES) -> list[EdgeData]:
        out = []
        for i in range(poly.n):
            out.append(EdgeData.from_functions(
                poly.half_lengths[i],
                dirichlet=lambda t, i=i: self.dirichlet(poly, i, t),
                tangential=lambda t, i=i: self.tangential(poly, i, t),
                neumann=lambda t, i=i: self.neumann(poly, i, t),
                n_nodes=n_nodes,
            ))
        return out

    def transformed(self, rotation: float = 0.0, shift: complex = 0.0) -> "HarmonicOracle":
        """The same physical field carried along by w = e^{i rotation} z + shift."""
        r = np.exp(-1j * rotation)
        F, dF = self.F, self.dF
        return HarmonicOracle(
            f"{self.name}@moved",
            lambda w: F(r * (np.asarray(w, dtype=complex) - shift)),
            lambda w: r * dF(r * (np.asarray(w, dtype=complex) - shift)),
        )

    def scaled(self, a: float) -> "HarmonicOracle":
        F, dF = self.F, self.dF
        return HarmonicOracle(f"{a:g}*{self.name}", lambda z: a * F(z), lambda z: a * dF(z))


def _zero(z):
    return np.zeros_like(np.asarray(z, dtype=complex))


BUILTIN = {
    "const": HarmonicOracle("const", lambda z: np.ones_like(np.asarray(z, dtype=complex)), _zero),
    "x": HarmonicOracle("x", lambda z: z + 0j, lambda z: np.ones_like(np.asarray(z, dtype=complex))),
    "y": HarmonicOracle("y", lambda z: -1j * z,
                        lambda z: -1j * np.ones_like(np.asarray(z, dtype=complex))),
    "xy": HarmonicOracle("xy", lambda z: -0.5j * z**2, lambda z: -1j * z),
    "x2-y2": HarmonicOracle("x2-y2", lambda z: z**2, lambda z: 2 * z),
    "re_z3": HarmonicOracle("re_z3", lambda z: z**3, lambda z: 3 * z**2),
    "im_z3": HarmonicOracle("im_z3", lambda z: -1j * z**3, lambda z: -3j * z**2),
}

_ALIASES = {
    "1": "const", "constant": "const",
    "x^2-y^2": "x2-y2", "x**2-y**2": "x2-y2", "x²-y²": "x2-y2",
    "rez3": "re_z3", "rez^3": "re_z3", "re(z^3)": "re_z3", "re_z^3": "re_z3",
    "imz3": "im_z3", "imz^3": "im_z3", "im(z^3)": "im_z3", "im_z^3": "im_z3",
}


def canonical_name(name: str) -> str:
    key = name.strip().lower().replace(" ", "").replace("−", "-")
    if key.startswith("q="):
        key = key[2:]
    key = _ALIASES.get(key, key)
    if key not in BUILTIN:
        raise KeyError(f"unknown oracle {name!r}; choose from {sorted(BUILTIN)}")
    return key


def get_oracle(name: str) -> HarmonicOracle:
    return BUILTIN[canonical_name(name)]
