import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_dn.config import ProblemConfig, from_dict, load, loads
from spectral_dn.errors import ConfigError
from spectral_dn.oracles import get_oracle

SQUARE_YAML = """
polygon: [[-1, -1], [1, -1], [1, 1], [-1, 1]]
dirichlet: {oracle: "x^2-y^2"}
N: 12
"""


def test_defaults_and_oracle_expansion():
    cfg = loads(SQUARE_YAML)
    assert cfg.N == 12 and cfg.method == "galerkin"
    assert len(cfg.dirichlet) == 4
    assert cfg.oracle().name == "x2-y2"


def test_round_trip():
    cfg = loads(SQUARE_YAML)
    again = loads(cfg.dump())
    assert again == cfg
    assert loads(again.dump()) == again


edge_entries = st.one_of(
    st.sampled_from(["x", "y", "xy", "x2-y2", "re_z3", "im_z3"]).map(lambda n: {"oracle": n}),
    st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=5).map(lambda c: {"polynomial": c}),
)


@settings(max_examples=30, deadline=None)
@given(edges=st.lists(edge_entries, min_size=5, max_size=5), N=st.integers(0, 40),
       method=st.sampled_from(["galerkin", "collocation"]), os_=st.floats(1, 4))
def test_round_trip_property(edges, N, method, os_):
    raw = {
        "polygon": [[np.cos(a), np.sin(a)] for a in 2 * np.pi * np.arange(5) / 5],
        "dirichlet": {"edges": edges}, "N": N, "method": method,
        "collocation": {"oversample": os_},
        "contour": {"kind": "polyline", "vertices": [[0, 0], [-1, -1], [-30, 0]]},
    }
    cfg = from_dict(raw)
    assert loads(cfg.dump()) == cfg


def test_missing_edge_is_named():
    raw = {"polygon": [[-1, -1], [1, -1], [1, 1], [-1, 1]],
           "dirichlet": {"edges": [{"oracle": "x"}, {"oracle": "x"}, {"oracle": "x"}]}}
    with pytest.raises(ConfigError, match="edge 4"):
        from_dict(raw)
    raw["dirichlet"]["edges"].append(None)
    with pytest.raises(ConfigError, match="edge 4"):
        from_dict(raw)


@pytest.mark.parametrize("patch, field", [
    ({"N": -1}, "N"),
    ({"method": "fem"}, "method"),
    ({"contour": {"kind": "spiral"}}, "contour.kind"),
    ({"collocation": {"oversample": 0.5}}, "collocation.oversample"),
    ({"polygon": [[0, 0], [1, 0], [2, 0]]}, "polygon"),
    ({"polygon": [[-1, 1], [1, 1], [1, -1], [-1, -1]]}, "polygon"),
    ({"dirichlet": {"oracle": "sin"}}, "dirichlet.oracle"),
    ({"extra": 1}, "config"),
])
def test_field_level_errors(patch, field):
    raw = {"polygon": [[-1, -1], [1, -1], [1, 1], [-1, 1]], "dirichlet": {"oracle": "x"}}
    raw.update(patch)
    with pytest.raises(ConfigError, match=field.replace(".", r"\.")):
        from_dict(raw)


def test_polynomial_and_sample_edges(tmp_path, square):
    o = get_oracle("xy")
    tau = np.linspace(-1, 1, 30)
    (tmp_path / "e3.csv").write_text("tau,value\n" + "".join(
        f"{float(t)!r},{float(v)!r}\n" for t, v in zip(tau, o.dirichlet(square, 2, tau))))
    # xy on the square: bottom tau*(-1), right (1)(tau), top (-tau)(1), left (-1)(-tau)
    (tmp_path / "p.yaml").write_text("""
polygon: [[-1, -1], [1, -1], [1, 1], [-1, 1]]
dirichlet:
  edges:
    - {polynomial: [0, -1]}
    - {polynomial: [0, 1]}
    - {samples: e3.csv}
    - {oracle: xy}
""")
    cfg = load(tmp_path / "p.yaml")
    assert cfg.oracle() is None
    data = cfg.edge_data()
    for i, d in enumerate(data):
        assert np.allclose(d.tangential, o.tangential(square, i, d.tau), atol=1e-9)


def test_bad_sample_file(tmp_path):
    (tmp_path / "bad.csv").write_text("a,b\n1,2\n")
    cfg = from_dict({"polygon": [[0, 0], [1, 0], [0, 1]],
                     "dirichlet": {"edges": [{"samples": "bad.csv"}, {"oracle": "x"}, {"oracle": "x"}]}},
                    base_dir=str(tmp_path))
    with pytest.raises(ConfigError):
        cfg.edge_data()


def test_invalid_yaml():
    with pytest.raises(ConfigError):
        loads("polygon: [")
    with pytest.raises(ConfigError):
        load("/nonexistent/config.yaml")


def test_replace_keeps_type():
    cfg = loads(SQUARE_YAML).replace(N=3)
    assert isinstance(cfg, ProblemConfig) and cfg.N == 3
