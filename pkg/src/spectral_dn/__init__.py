"""Spectral Dirichlet-to-Neumann map for Laplace's equation on convex polygons.

Boundary data on each edge is represented by its Fourier transform, expanded
in the sinc basis of a Paley-Wiener space.  The Neumann spectrum is found by
solving the coupling relation between the edges, either in a least-squares
(Galerkin) sense along contours in the lower half plane or by collocation.
"""

from .collocation import CollocationSet, default_collocation, solve_dn_collocation
from .errors import *  # noqa: F401,F403
from .galerkin import (
    ContourFamily,
    GalerkinSystem,
    assemble,
    bent_contours,
    bilinear_a,
    default_contours,
    dn_linearity_check,
    linear_l,
    solve_dn,
)
from .geometry import Polygon, build_polygon, edge_point, outward_normal, regular_polygon
from .global_relation import (
    EdgeData,
    apply_K,
    apply_T,
    residual,
    rho,
    spectral_dirichlet,
    tangential_spectra,
)
from .oracles import BUILTIN, HarmonicOracle, get_oracle
from .paley_wiener import (
    PWFunction,
    SampledTransform,
    SpectralVector,
    forward_transform,
    inverse_transform,
    norm_X,
    norm_Y_negaxis,
    project_antisymmetric,
    project_symmetric,
    pw_eval,
    star,
)
from .reconstruction import dq_dz, neumann_trace

__version__ = "0.1.0"
