"""Force-based third-order beam elements for graded sandwich beams.

Typical use::

    from fgbeam import benchmark_material, make_model, solve
    sol = solve(make_model(benchmark_material("B", 5.0), "pfts", "CF", 1))
    sol.tip_w
"""
from .assembly import BeamModel, BoundaryCase, Solution, make_model, solve
from .classic import ElementKind
from .config import AnalysisConfig, dump_config, load_config, parse_config
from .errors import (
    ConfigError,
    FGBeamError,
    InvalidCase,
    InvalidModel,
    NonPositiveDefinite,
    OutOfThickness,
    SingularSystem,
    TooCloseToBoundary,
    UnsupportedEigenBranch,
)
from .material import FGKind, FGMaterial, benchmark_material, shear_modulus, youngs_modulus
from .pfts import LoadCase
from .recovery import StressProfile, max_shear_stress, normal_stress, section_resultants, shear_stress, stress_profile
from .section import QuadratureSpec, SectionConstants, SectionGeometry, compute_constants

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "BeamModel",
    "BoundaryCase",
    "ConfigError",
    "ElementKind",
    "FGBeamError",
    "FGKind",
    "FGMaterial",
    "InvalidCase",
    "InvalidModel",
    "LoadCase",
    "NonPositiveDefinite",
    "OutOfThickness",
    "QuadratureSpec",
    "SectionConstants",
    "SectionGeometry",
    "SingularSystem",
    "Solution",
    "StressProfile",
    "TooCloseToBoundary",
    "UnsupportedEigenBranch",
    "benchmark_material",
    "compute_constants",
    "dump_config",
    "load_config",
    "make_model",
    "max_shear_stress",
    "normal_stress",
    "parse_config",
    "section_resultants",
    "shear_modulus",
    "shear_stress",
    "solve",
    "stress_profile",
    "youngs_modulus",
]
