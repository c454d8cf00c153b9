from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fgbeam.assembly import BoundaryCase
from fgbeam.classic import ElementKind
from fgbeam.config import AnalysisConfig, dump_config, load_config, parse_config
from fgbeam.errors import ConfigError
from fgbeam.material import FGKind

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

MINIMAL = """
[material]
kind = C
p = 5
"""


def test_defaults_follow_boundary_and_kind():
    cfg = parse_config(MINIMAL)
    assert cfg.kind is FGKind.C and cfg.p == 5.0
    assert cfg.boundary is BoundaryCase.CF and cfg.length == 1000.0
    assert cfg.breakpoints == (-100.0, -40.0, 40.0, 100.0)
    assert cfg.element is ElementKind.PFTS and cfg.elements == 1
    ss = parse_config(MINIMAL + "[analysis]\nboundary = S-S\n")
    assert ss.length == 2000.0
    a = parse_config("[material]\nkind = A\np = 1\n")
    assert a.breakpoints == (-100.0, 100.0)


def test_benchmark_load_applies_only_without_load_keys():
    cf = parse_config(MINIMAL)
    assert (cf.tip_load, cf.q0) == (5e5, 0.0)
    ss = parse_config(MINIMAL + "[analysis]\nboundary = SS\n")
    assert (ss.tip_load, ss.q0) == (0.0, 5000.0)
    unloaded = parse_config(MINIMAL + "[analysis]\nboundary = SS\n[loads]\nq0 = 0\n")
    assert (unloaded.tip_load, unloaded.q0) == (0.0, 0.0)
    both = parse_config(MINIMAL + "[loads]\nq0 = 10\n")
    assert (both.tip_load, both.q0) == (0.0, 10.0)


@pytest.mark.parametrize(
    "text,match",
    [
        (MINIMAL + "[loads]\nforce = 3\n", "unknown key 'force'"),
        (MINIMAL + "[mesh]\nmx = 3\n", r"unknown section \[mesh\]"),
        ("[material]\nkind = C\n", "p is required"),
        (MINIMAL + "[analysis]\nelement = iad\n", "element"),
        (MINIMAL + "[analysis]\nelements = 0\n", "elements must be"),
        (MINIMAL + "[analysis]\nload_vector = smeared\n", "load_vector"),
        (MINIMAL + "[geometry]\nwidth = -1\n", "positive"),
        (MINIMAL + "[output]\nprofile_x = 50, 2000\n", "profile_x"),
        (MINIMAL + "[analysis]\nquadrature_order = 2\n", "quadrature"),
        ("[material]\nkind = C\np = 5\nbreakpoints = -100, 100\n", "breakpoint"),
        ("[material]\nkind = C\np = -1\n", "p"),
        ("[material\nkind = C\n", "material"),
    ],
)
def test_invalid_configs_name_the_problem(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_config(text)


def test_missing_file_is_a_config_error(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "absent.ini")


def test_plane_element():
    cfg = load_config(CONFIGS / "cc_c_p5_q4.ini")
    assert cfg.is_plane and (cfg.mesh_mx, cfg.mesh_my) == (201, 50)
    plane = cfg.plane_model()
    assert plane.boundary is BoundaryCase.CC and plane.q0 == 5000.0
    with pytest.raises(ConfigError):
        cfg.model()


def test_model_overrides():
    cfg = load_config(CONFIGS / "cf_b_p5.ini")
    m = cfg.model(element="dts", elements=8)
    assert m.kind is ElementKind.DTS and m.n_elements == 8
    assert m.load.nodal == {8: (0.0, 5e5, 0.0)}


@pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.ini")), ids=lambda p: p.stem)
def test_shipped_configs_round_trip(path):
    cfg = load_config(path)
    assert parse_config(dump_config(cfg)) == cfg


def test_shipped_configs_cover_every_case():
    stems = {p.stem for p in CONFIGS.glob("*.ini")}
    for b in ("cf", "ss", "cc"):
        for k in ("a", "b", "c"):
            for p in ("0", "0_5", "1", "5", "10"):
                assert f"{b}_{k}_p{p}" in stems


finite = dict(allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(
    kind=st.sampled_from(list(FGKind)),
    p=st.floats(0.0, 20.0, **finite),
    element=st.sampled_from([*ElementKind, "q4"]),
    boundary=st.sampled_from(list(BoundaryCase)),
    length=st.floats(10.0, 5000.0, **finite),
    width=st.floats(1.0, 200.0, **finite),
    elements=st.integers(1, 1024),
    tip=st.floats(-1e7, 1e7, **finite),
    q0=st.floats(-1e5, 1e5, **finite),
    fractions=st.lists(st.floats(0.0, 1.0, **finite), max_size=4),
    quad=st.integers(8, 128),
    lv=st.sampled_from(["lumped", "consistent"]),
)
def test_round_trip_property(kind, p, element, boundary, length, width, elements, tip, q0, fractions, quad, lv):
    cfg = AnalysisConfig(
        kind=kind, p=p, element=element, boundary=boundary, length=length, width=width, elements=elements,
        tip_load=tip, q0=q0, profile_x=tuple(f * length for f in fractions), quadrature_order=quad, load_vector=lv,
        directory="out/x y",
    )
    back = parse_config(dump_config(cfg))  # fills the default breakpoints
    for name in ("kind", "p", "element", "boundary", "length", "width", "elements", "tip_load", "q0", "profile_x"):
        assert getattr(back, name) == getattr(cfg, name)
    text = dump_config(back)
    assert parse_config(text) == back
    assert dump_config(parse_config(text)) == text
