"""INI analysis configuration.

Example::

    [geometry]
    length = 1000
    width = 50

    [material]
    kind = B
    p = 5

    [analysis]
    element = pfts
    elements = 1
    boundary = CF

    [loads]
    tip_load = 5e5

    [output]
    directory = out/cf_b5
    profile_x = 50, 500, 900

Every key is optional except ``material.kind`` and ``material.p``; missing
values take the benchmark defaults of :mod:`fgbeam.conventions`.  Without
any load key the benchmark load applies: the tip load for a cantilever,
the uniform load otherwise.  Unknown sections or keys are rejected.
"""
from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import conventions as cv
from .assembly import BoundaryCase, make_model
from .classic import ElementKind
from .errors import ConfigError, FGBeamError
from .material import FGKind, FGMaterial
from .section import QuadratureSpec

__all__ = ["AnalysisConfig", "parse_config", "load_config", "dump_config"]


@dataclass(frozen=True)
class AnalysisConfig:
    # [material]
    kind: FGKind
    p: float
    E_m: float = cv.E_METAL
    E_c: float = cv.E_CERAMIC
    nu: float = cv.POISSON
    breakpoints: tuple = ()
    # [geometry]
    length: float = 0.0
    width: float = cv.WIDTH
    # [analysis]
    element: ElementKind | str = ElementKind.PFTS
    elements: int = 1
    boundary: BoundaryCase = BoundaryCase.CF
    quadrature_order: int = 64
    load_vector: str = "lumped"
    mesh_mx: int = 101
    mesh_my: int = 100
    # [loads]; both None means the benchmark load of the boundary case
    tip_load: float | None = None
    q0: float | None = None
    # [output]
    directory: str = "."
    profile_x: tuple = field(default_factory=tuple)

    def material(self) -> FGMaterial:
        return FGMaterial(self.kind, self.E_m, self.E_c, self.nu, self.p, self.breakpoints)

    @property
    def is_plane(self) -> bool:
        return self.element == "q4"

    def model(self, element=None, elements=None):
        """Beam model for this configuration (element kind/count overridable)."""
        element = self.element if element is None else element
        if element == "q4":
            raise ConfigError("element = q4 has no beam model; use plane_model()")
        return make_model(
            self.material(),
            element,
            self.boundary,
            self.elements if elements is None else elements,
            length=self.length,
            width=self.width,
            q0=self.q0,
            tip_load=self.tip_load,
            quad=QuadratureSpec(self.quadrature_order),
            load_vector=self.load_vector,
        )

    def plane_model(self):
        from .q4 import PlaneModel

        return PlaneModel(self.material(), self.length, self.width, self.mesh_mx, self.mesh_my, self.boundary, self.tip_load, self.q0)


_SECTIONS = {
    "geometry": ("length", "width"),
    "material": ("kind", "p", "E_m", "E_c", "nu", "breakpoints"),
    "analysis": ("element", "elements", "boundary", "quadrature_order", "load_vector", "mesh_mx", "mesh_my"),
    "loads": ("tip_load", "q0"),
    "output": ("directory", "profile_x"),
}


def _float_list(text: str) -> tuple:
    items = [t for t in (s.strip() for s in text.replace(";", ",").split(",")) if t]
    return tuple(float(t) for t in items)


def _element(text: str):
    """Beam element kind, or ``"q4"`` for the plane-stress reference model."""
    return "q4" if text.strip().lower() == "q4" else ElementKind.parse(text)


_CONVERT = {
    "kind": FGKind.parse,
    "element": _element,
    "boundary": BoundaryCase.parse,
    "breakpoints": _float_list,
    "profile_x": _float_list,
    "elements": int,
    "quadrature_order": int,
    "mesh_mx": int,
    "mesh_my": int,
    "directory": str,
    "load_vector": str,
}


def parse_config(text: str, source: str = "<string>") -> AnalysisConfig:
    """Parse and validate INI text.

    Raises
    ------
    ConfigError
        On syntax errors, unknown sections/keys, bad values or an invalid
        model; the message names the offending key.
    """
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str  # keep E_m / E_c case
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    values = {}
    for sec in cp.sections():
        if sec not in _SECTIONS:
            raise ConfigError(f"{source}: unknown section [{sec}]; expected one of {', '.join(_SECTIONS)}")
        for key, raw in cp.items(sec):
            if key not in _SECTIONS[sec]:
                raise ConfigError(f"{source}: unknown key '{key}' in [{sec}]; allowed: {', '.join(_SECTIONS[sec])}")
            try:
                values[key] = _CONVERT.get(key, float)(raw.strip())
            except (ValueError, FGBeamError) as exc:
                raise ConfigError(f"{source}: [{sec}] {key} = {raw!r}: {exc}") from None
    for req in ("kind", "p"):
        if req not in values:
            raise ConfigError(f"{source}: [material] {req} is required")
    cfg = AnalysisConfig(**values)
    return _resolve(cfg, source)


def _resolve(cfg: AnalysisConfig, source: str) -> AnalysisConfig:
    """Fill benchmark defaults and validate the assembled model."""
    if not cfg.breakpoints:
        bps = cv.ISOTROPIC_BREAKPOINTS if cfg.kind is FGKind.A else cv.SANDWICH_BREAKPOINTS
        cfg = replace(cfg, breakpoints=tuple(bps))
    if cfg.tip_load is None and cfg.q0 is None:
        if cfg.boundary is BoundaryCase.CF:
            cfg = replace(cfg, tip_load=cv.TIP_LOAD, q0=0.0)
        else:
            cfg = replace(cfg, tip_load=0.0, q0=cv.UNIFORM_LOAD)
    cfg = replace(cfg, tip_load=cfg.tip_load or 0.0, q0=cfg.q0 or 0.0)
    if cfg.length == 0.0:
        cfg = replace(cfg, length=cv.CANTILEVER_LENGTH if cfg.boundary is BoundaryCase.CF else cv.SUPPORTED_LENGTH)
    if cfg.load_vector not in ("lumped", "consistent"):
        raise ConfigError(f"{source}: [analysis] load_vector must be 'lumped' or 'consistent'")
    if cfg.elements < 1:
        raise ConfigError(f"{source}: [analysis] elements must be >= 1")
    if cfg.mesh_mx < 1 or cfg.mesh_my < 1:
        raise ConfigError(f"{source}: [analysis] mesh_mx and mesh_my must be >= 1")
    if cfg.length <= 0 or cfg.width <= 0:
        raise ConfigError(f"{source}: [geometry] length and width must be positive")
    if any(not 0.0 <= x <= cfg.length for x in cfg.profile_x):
        raise ConfigError(f"{source}: [output] profile_x entries must lie in [0, {cfg.length:g}]")
    try:
        cfg.material()
        QuadratureSpec(cfg.quadrature_order)
    except (FGBeamError, ValueError) as exc:
        raise ConfigError(f"{source}: {exc}") from None
    return cfg


def load_config(path) -> AnalysisConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, str(path))


def _fmt(v) -> str:
    if isinstance(v, tuple):
        return ", ".join(_fmt(x) for x in v)
    if hasattr(v, "value"):
        return str(v.value)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def dump_config(cfg: AnalysisConfig) -> str:
    """Effective configuration as INI text; parses back to an equal config."""
    out = io.StringIO()
    for sec, keys in _SECTIONS.items():
        out.write(f"[{sec}]\n")
        for k in keys:
            out.write(f"{k} = {_fmt(getattr(cfg, k))}\n")
        out.write("\n")
    return out.getvalue()
