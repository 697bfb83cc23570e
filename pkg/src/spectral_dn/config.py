"""Problem configuration: YAML in, validated dataclasses out, and back.

Example::

    polygon: [[-1, -1], [1, -1], [1, 1], [-1, 1]]
    dirichlet:
      oracle: x2-y2            # same oracle on every edge, or
      # edges:
      #   - {oracle: x}
      #   - {polynomial: [0.0, 1.0]}     # f(tau) = sum_k c_k tau^k
      #   - {samples: edge3.csv}         # columns tau,value
    N: 24
    method: galerkin
    contour: {kind: real_axis}
    collocation: {oversample: 2.0}
    output: {directory: out, figures: true}
"""

from __future__ import annotations

import csv
import dataclasses
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .errors import ConfigError
from .geometry import Polygon, build_polygon
from .global_relation import EdgeData
from .oracles import HarmonicOracle, canonical_name, get_oracle

METHODS = ("galerkin", "collocation")
CONTOUR_KINDS = ("real_axis", "bent", "polyline")


@dataclass(frozen=True)
class EdgeSpec:
    kind: str  # oracle | polynomial | samples
    oracle: str | None = None
    coefficients: tuple = ()
    samples: str | None = None

    def to_dict(self) -> dict:
        if self.kind == "oracle":
            return {"oracle": self.oracle}
        if self.kind == "polynomial":
            return {"polynomial": [float(c) for c in self.coefficients]}
        return {"samples": self.samples}


@dataclass(frozen=True)
class ContourSpec:
    kind: str = "real_axis"
    R_tail: float | None = None
    nodes_per_unit: float | None = None
    angle: float = float(np.pi / 6)
    radius: float = 2.0
    vertices: tuple = ()


@dataclass(frozen=True)
class CollocationSpec:
    oversample: float = 2.0
    rotation: float = 0.0
    rotated_fraction: float = 0.0


@dataclass(frozen=True)
class OutputSpec:
    directory: str = "out"
    figures: bool = True
    trace_points: int = 101
    grid: int = 21


@dataclass(frozen=True)
class ProblemConfig:
    polygon: tuple
    dirichlet: tuple
    N: int = 24
    method: str = "galerkin"
    contour: ContourSpec = field(default_factory=ContourSpec)
    collocation: CollocationSpec = field(default_factory=CollocationSpec)
    output: OutputSpec = field(default_factory=OutputSpec)
    base_dir: str = "."

    # --- derived objects ---------------------------------------------------

    def build_polygon(self) -> Polygon:
        # counterclockwise order is enforced on load, so edge i of the config is edge i here
        return build_polygon(self.polygon)

    def oracle(self) -> HarmonicOracle | None:
        """The common oracle when every edge uses the same one."""
        names = {e.oracle for e in self.dirichlet}
        if all(e.kind == "oracle" for e in self.dirichlet) and len(names) == 1:
            return get_oracle(names.pop())
        return None

    def edge_data(self, poly: Polygon | None = None) -> list[EdgeData]:
        poly = poly if poly is not None else self.build_polygon()
        out = []
        for i, spec in enumerate(self.dirichlet):
            s = poly.half_lengths[i]
            if spec.kind == "oracle":
                orc = get_oracle(spec.oracle)
                out.append(EdgeData.from_functions(
                    s, dirichlet=lambda t, i=i, o=orc: o.dirichlet(poly, i, t),
                    tangential=lambda t, i=i, o=orc: o.tangential(poly, i, t),
                    neumann=lambda t, i=i, o=orc: o.neumann(poly, i, t)))
            elif spec.kind == "polynomial":
                p = np.polynomial.Polynomial(spec.coefficients)
                dp = p.deriv()
                out.append(EdgeData.from_functions(s, dirichlet=p, tangential=dp))
            else:
                tau, val = read_samples(Path(self.base_dir) / spec.samples)
                out.append(EdgeData.from_samples(s, tau, val))
        return out

    # --- (de)serialisation -------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "polygon": [[float(x), float(y)] for x, y in self.polygon],
            "dirichlet": {"edges": [e.to_dict() for e in self.dirichlet]},
            "N": self.N,
            "method": self.method,
            "contour": {**asdict(self.contour), "vertices": [list(v) for v in self.contour.vertices]},
            "collocation": asdict(self.collocation),
            "output": asdict(self.output),
        }

    def dump(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    def save(self, path) -> None:
        Path(path).write_text(self.dump())

    def replace(self, **changes) -> "ProblemConfig":
        return dataclasses.replace(self, **changes)


def _is_clockwise(points) -> bool:
    z = np.array([complex(x, y) for x, y in points])
    zz = np.roll(z, -1)
    return float(np.sum(z.real * zz.imag - z.imag * zz.real)) < 0


def read_samples(path) -> tuple[np.ndarray, np.ndarray]:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise ConfigError(f"dirichlet samples: cannot read {path}: {exc}") from exc
    try:
        tau = np.array([float(r["tau"]) for r in rows])
        val = np.array([float(r["value"]) for r in rows])
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"dirichlet samples {path}: need numeric columns tau,value") from exc
    return tau, val


def _edge_spec(entry: Any, where: str) -> EdgeSpec:
    if not isinstance(entry, dict) or len(entry) != 1:
        raise ConfigError(f"{where}: expected one of {{oracle, polynomial, samples}}")
    (key, val), = entry.items()
    if key == "oracle":
        try:
            return EdgeSpec("oracle", oracle=canonical_name(str(val)))
        except KeyError as exc:
            raise ConfigError(f"{where}.oracle: {exc.args[0]}") from None
    if key == "polynomial":
        try:
            coeffs = tuple(float(c) for c in val)
        except (TypeError, ValueError):
            raise ConfigError(f"{where}.polynomial: expected a list of numbers") from None
        if not coeffs:
            raise ConfigError(f"{where}.polynomial: empty coefficient list")
        return EdgeSpec("polynomial", coefficients=coeffs)
    if key == "samples":
        return EdgeSpec("samples", samples=str(val))
    raise ConfigError(f"{where}: unknown data kind {key!r}")


def _section(raw: dict, name: str, cls):
    sec = raw.get(name) or {}
    if not isinstance(sec, dict):
        raise ConfigError(f"{name}: expected a mapping")
    known = set(cls.__dataclass_fields__)
    unknown = set(sec) - known
    if unknown:
        raise ConfigError(f"{name}: unknown field(s) {sorted(unknown)}")
    try:
        return cls(**sec)
    except TypeError as exc:
        raise ConfigError(f"{name}: {exc}") from None


def from_dict(raw: dict, base_dir: str = ".") -> ProblemConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be a mapping")
    allowed = {"polygon", "dirichlet", "N", "method", "contour", "collocation", "output"}
    unknown = set(raw) - allowed
    if unknown:
        raise ConfigError(f"config: unknown field(s) {sorted(unknown)}")

    if "polygon" not in raw:
        raise ConfigError("polygon: missing")
    try:
        polygon = tuple((float(x), float(y)) for x, y in raw["polygon"])
    except (TypeError, ValueError):
        raise ConfigError("polygon: expected a list of [x, y] pairs") from None
    n = len(polygon)
    try:
        build_polygon(polygon)
    except ValueError as exc:
        raise ConfigError(f"polygon: {exc}") from None
    if _is_clockwise(polygon):
        raise ConfigError("polygon: vertices must be listed counterclockwise")

    d = raw.get("dirichlet")
    if d is None:
        raise ConfigError("dirichlet: missing")
    if isinstance(d, dict) and "edges" not in d:
        spec = _edge_spec(d, "dirichlet")
        edges = (spec,) * n
    else:
        lst = d["edges"] if isinstance(d, dict) else d
        if not isinstance(lst, list):
            raise ConfigError("dirichlet.edges: expected a list")
        if len(lst) < n:
            raise ConfigError(f"dirichlet.edges: no entry for edge {len(lst) + 1} of {n}")
        if len(lst) > n:
            raise ConfigError(f"dirichlet.edges: {len(lst)} entries for {n} edges")
        edges = tuple(_edge_spec(e, f"dirichlet.edges[{k + 1}]") if e is not None else
                      _missing(k) for k, e in enumerate(lst))

    N = raw.get("N", 24)
    if isinstance(N, bool) or not isinstance(N, int) or N < 0:
        raise ConfigError("N: expected a non-negative integer")
    method = raw.get("method", "galerkin")
    if method not in METHODS:
        raise ConfigError(f"method: expected one of {METHODS}, got {method!r}")

    contour = _section(raw, "contour", ContourSpec)
    if contour.kind not in CONTOUR_KINDS:
        raise ConfigError(f"contour.kind: expected one of {CONTOUR_KINDS}")
    contour = ContourSpec(contour.kind, contour.R_tail, contour.nodes_per_unit,
                          float(contour.angle), float(contour.radius),
                          tuple(tuple(float(c) for c in v) for v in contour.vertices))
    if contour.kind == "polyline" and len(contour.vertices) < 2:
        raise ConfigError("contour.vertices: polyline needs at least two [re, im] points")
    colloc = _section(raw, "collocation", CollocationSpec)
    if colloc.oversample < 1:
        raise ConfigError("collocation.oversample: must be at least 1")
    output = _section(raw, "output", OutputSpec)
    return ProblemConfig(polygon, edges, N, method, contour, colloc, output, str(base_dir))


def _missing(k: int):
    raise ConfigError(f"dirichlet.edges: no entry for edge {k + 1}")


def loads(text: str, base_dir: str = ".") -> ProblemConfig:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config: invalid YAML: {exc}") from None
    return from_dict(raw, base_dir)


def load(path) -> ProblemConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from None
    return loads(text, str(path.parent))
