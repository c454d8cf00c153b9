import numpy as np
import pytest

from fgbeam.assembly import (
    DENSE_LIMIT,
    BoundaryCase,
    _solve_linear,
    apply_boundary,
    assemble_displacement_based,
    assemble_force_based,
    make_model,
    solve,
)
from fgbeam.errors import InvalidCase, SingularSystem
from fgbeam.material import benchmark_material
from fgbeam.pfts import LoadCase

KINDS = [("pfts", 3), ("pfts_t", 2), ("dts", 16), ("dfs", 16), ("deb", 8)]


def _applied(model):
    """Applied transverse forces as (x, F) pairs, uniform load in closed form."""
    L, q = model.length, model.load.q0
    pts = [(i * model.element_length, v[1]) for i, v in model.load.nodal.items()]
    return pts, q * L, q * L * L / 2


@pytest.mark.parametrize("n", [1, 2, 7])
def test_force_based_system_size(n, cached_constants):
    model = make_model(benchmark_material("B", 1.0), "pfts", "SS", n)
    system = assemble_force_based(model)
    assert system.size == 4 * (n + 1) + 5 * n
    assert system.A.shape == (system.size, system.size)


def test_assemblers_reject_wrong_family():
    with pytest.raises(InvalidCase):
        assemble_force_based(make_model(benchmark_material("A", 1.0), "dts", "CF", 2))
    with pytest.raises(InvalidCase):
        assemble_displacement_based(make_model(benchmark_material("A", 1.0), "pfts", "CF", 2))


def test_boundary_parsing():
    assert BoundaryCase.parse("c-f") is BoundaryCase.CF
    assert BoundaryCase.parse("ss") is BoundaryCase.SS
    with pytest.raises(InvalidCase):
        BoundaryCase.parse("free")


def test_apply_boundary_keeps_original_rows():
    model = make_model(benchmark_material("C", 5.0), "pfts", "CC", 2)
    system = assemble_force_based(model)
    con = apply_boundary(system, "CC")
    assert len(con.fixed) == 8
    for row, d in enumerate(con.fixed):
        np.testing.assert_array_equal(con.original_rows[row], system.A[d])
        assert con.A[d, d] == 1.0 and np.count_nonzero(con.A[d]) == 1 and con.rhs[d] == 0.0


@pytest.mark.parametrize("kind,n", KINDS)
@pytest.mark.parametrize("boundary", ["CF", "SS", "CC"])
def test_global_equilibrium_of_reactions(kind, n, boundary, cached_solution):
    sol = cached_solution("C", 5.0, kind, boundary, n)
    m = sol.model
    R = sol.reactions
    pts, q_total, q_moment = _applied(m)
    Fw = sum(v for (node, d), v in R.items() if d == "w") + sum(F for _, F in pts) + q_total
    Fu = sum(v for (node, d), v in R.items() if d == "u")
    Mr = sum(v for (node, d), v in R.items() if d in ("w_x", "theta"))
    Mx = sum(m.node_x[node] * v for (node, d), v in R.items() if d == "w") + sum(x * F for x, F in pts) + q_moment
    scale = 5e5 * m.length
    assert abs(Fw) <= 1e-8 * 5e6
    assert abs(Fu) <= 1e-8 * 5e6
    assert abs(Mr - Mx) <= 1e-8 * scale
    assert sol.residual < 1e-10


@pytest.mark.parametrize("kind,n", KINDS)
def test_cantilever_root_reactions(kind, n, cached_solution):
    R = cached_solution("B", 5.0, kind, "CF", n).reactions
    assert R[(0, "w")] == pytest.approx(-5e5, rel=1e-10)
    moment = sum(v for (node, d), v in R.items() if d in ("w_x", "theta"))
    assert moment == pytest.approx(5e5 * 1000.0, rel=1e-10)


@pytest.mark.parametrize("kind,n", KINDS)
def test_simply_supported_reactions_share_the_load(kind, n, cached_solution):
    R = cached_solution("A", 1.0, kind, "SS", n).reactions
    assert R[(0, "w")] == pytest.approx(-5000.0 * 2000.0 / 2, rel=1e-10)
    assert R[(n, "w")] == pytest.approx(-5000.0 * 2000.0 / 2, rel=1e-10)


def test_force_based_clamped_moment_is_exact(cached_solution):
    R = cached_solution("C", 5.0, "pfts", "CC", 2).reactions
    moment = R[(0, "w_x")] + R[(0, "theta")]
    assert moment == pytest.approx(5000.0 * 2000.0**2 / 12, rel=1e-9)


@pytest.mark.parametrize("kind", ["pfts", "pfts_t"])
def test_interior_node_force_continuity(kind, cached_solution):
    sol = cached_solution("C", 5.0, kind, "CC", 5)
    P0, F0 = sol.basis.end_forces(0.0)
    PL, FL = sol.basis.end_forces(sol.basis.L)
    q = sol.model.load.q0
    scale = np.abs(PL @ sol.beta[0]).max()
    for e in range(sol.model.n_elements - 1):
        left = PL @ sol.beta[e] + q * FL
        right = P0 @ sol.beta[e + 1] + q * F0
        assert np.abs(left - right).max() <= 1e-8 * scale


@pytest.mark.parametrize("kind,n", KINDS)
@pytest.mark.parametrize("boundary", ["CF", "SS", "CC"])
def test_zero_load_gives_zero_state(kind, n, boundary):
    sol = solve(make_model(benchmark_material("B", 2.0), kind, boundary, n, q0=0.0, tip_load=0.0))
    finite = sol.nodes[np.isfinite(sol.nodes)]
    assert np.all(finite == 0.0)
    assert all(v == 0.0 for v in sol.reactions.values())
    if sol.beta is not None:
        assert np.all(sol.beta == 0.0)


def test_sparse_path_agrees_with_dense(cached_solution):
    ref = cached_solution("C", 5.0, "pfts", "SS", 1)
    n = 256
    assert 4 * (n + 1) + 5 * n > DENSE_LIMIT
    big = cached_solution("C", 5.0, "pfts", "SS", n)
    assert big.midspan_w == pytest.approx(ref.midspan_w, rel=1e-9)
    xs = np.linspace(0, 2000, 17)
    np.testing.assert_allclose(big.displacement("w", xs), ref.displacement("w", xs), rtol=1e-9, atol=1e-9 * ref.midspan_w)


def test_singular_system_is_reported():
    A = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(SingularSystem):
        _solve_linear(A, np.array([1.0, 0.0]))


def test_nodal_load_outside_mesh_rejected():
    m = make_model(benchmark_material("A", 0.0), "pfts", "CF", 2)
    with pytest.raises(ValueError):
        m.with_load(LoadCase(0.0, {5: (0.0, 1.0, 0.0)}))


def test_locate_and_domain(cached_solution):
    sol = cached_solution("A", 1.0, "pfts", "CF", 4)
    e, xl = sol.locate(np.array([0.0, 250.0, 999.0, 1000.0]))
    np.testing.assert_array_equal(e, [0, 1, 3, 3])
    np.testing.assert_allclose(xl, [0.0, 0.0, 249.0, 250.0])
    with pytest.raises(ValueError):
        sol.displacement("w", 1001.0)


@pytest.mark.parametrize(
    "fg,p,boundary,expected",
    [("C", 5.0, "CF", 37.232), ("B", 10.0, "SS", 314.86), ("C", 10.0, "CC", 51.550), ("A", 0.0, "CF", 13.564)],
)
def test_force_based_reference_deflections(fg, p, boundary, expected, cached_solution):
    assert cached_solution(fg, p, "pfts", boundary, 1).reported_w == pytest.approx(expected, rel=2e-4)


@pytest.mark.parametrize("kind", ["dfs", "dts", "pfts", "pfts_t"])
def test_shear_deformable_kinds_exceed_euler_clamped(kind, cached_solution):
    n = 1 if kind.startswith("pfts") else 512
    assert cached_solution("A", 0.0, kind, "CC", n).midspan_w >= 16.447
