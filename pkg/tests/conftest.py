from functools import lru_cache

import pytest

from fgbeam.assembly import make_model, solve
from fgbeam.material import benchmark_material
from fgbeam.section import SectionGeometry, compute_constants


@lru_cache(maxsize=None)
def solved(kind, p, element, boundary, n):
    """Benchmark beam solution, cached across tests (solutions are read-only)."""
    return solve(make_model(benchmark_material(kind, p), element, boundary, n))


@lru_cache(maxsize=None)
def constants(kind, p):
    return compute_constants(SectionGeometry(50.0, benchmark_material(kind, p)))


@pytest.fixture
def cached_solution():
    return solved


@pytest.fixture
def cached_constants():
    return constants
