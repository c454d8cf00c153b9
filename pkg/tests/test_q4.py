import numpy as np
import pytest

from fgbeam import q4
from fgbeam.errors import SingularSystem, TooCloseToBoundary
from fgbeam.material import benchmark_material
from fgbeam.q4 import PlaneModel, assemble_plane, solve_plane, stress_profile, structured_mesh

E, NU, B, H, P = 380000.0, 0.3, 50.0, 200.0, 5e5


def _cantilever(kind="A", p=0.0, mx=101, my=100, load=P):
    return PlaneModel(benchmark_material(kind, p), 1000.0, B, mx, my, "CF", tip_load=load)


@pytest.fixture(scope="module")
def homogeneous_cf():
    return solve_plane(_cantilever())


@pytest.fixture(scope="module")
def graded_cf():
    return solve_plane(_cantilever("C", 5.0))


def test_mesh_numbering():
    mesh = structured_mesh(benchmark_material("C", 5.0), 1000.0, B, 4, 3)
    assert mesh.n_nodes == 20 and mesh.n_elements == 12
    np.testing.assert_allclose(mesh.x_lines, [0, 250, 500, 750, 1000])
    np.testing.assert_allclose(mesh.y_lines, np.linspace(-100, 100, 4))
    xy = mesh.element_xy()
    # counter-clockwise: positive signed area for every element
    area = 0.5 * np.sum(xy[:, :, 0] * np.roll(xy[:, :, 1], -1, 1) - np.roll(xy[:, :, 0], -1, 1) * xy[:, :, 1], axis=1)
    np.testing.assert_allclose(area, 250.0 * 200.0 / 3)
    with pytest.raises(ValueError):
        structured_mesh(benchmark_material("C", 5.0), 1000.0, B, 0, 3)


def test_load_vector_totals():
    K, F = assemble_plane(PlaneModel(benchmark_material("B", 1.0), 2000.0, B, 8, 4, "SS", tip_load=3.0, q0=7.0))
    assert F[1::2].sum() == pytest.approx(3.0 + 7.0 * 2000.0, rel=1e-13)
    assert np.all(F[0::2] == 0.0)
    assert abs(K - K.T).max() <= 1e-9 * abs(K).max()


@pytest.mark.parametrize("boundary", ["CF", "SS", "CC"])
def test_unloaded_plane_stays_at_rest(boundary):
    sol = solve_plane(PlaneModel(benchmark_material("C", 5.0), 1000.0, B, 20, 8, boundary))
    assert np.all(sol.u == 0.0)
    assert np.all(sol.centroid_stresses == 0.0)


@pytest.mark.parametrize("boundary,kw", [("CF", {"tip_load": P}), ("SS", {"q0": 5000.0}), ("CC", {"q0": 5000.0})])
def test_energy_balance_and_reactions(boundary, kw):
    sol = solve_plane(PlaneModel(benchmark_material("B", 5.0), 2000.0, B, 60, 20, boundary, **kw))
    assert sol.external_work == pytest.approx(sol.strain_energy, rel=1e-9)
    applied = kw.get("tip_load", 0.0) + kw.get("q0", 0.0) * 2000.0
    assert sol.reactions[:, 1].sum() == pytest.approx(-applied, rel=1e-8)
    assert abs(sol.reactions[:, 0].sum()) <= 1e-9 * applied


def test_homogeneous_cantilever_near_timoshenko(homogeneous_cf):
    G = E / (2 * (1 + NU))
    I = B * H**3 / 12
    timoshenko = P * 1000.0**3 / (3 * E * I) + P * 1000.0 / (5 / 6 * G * B * H)
    assert homogeneous_cf.tip_w == pytest.approx(timoshenko, rel=2e-2)


def test_homogeneous_peak_shear(homogeneous_cf):
    prof = stress_profile(homogeneous_cf, 500.0)
    assert prof.max_abs_tau == pytest.approx(74.935, rel=2e-2)
    assert prof.max_abs_tau == pytest.approx(1.5 * P / (B * H), rel=2e-2)


def test_graded_peak_shear(graded_cf):
    assert stress_profile(graded_cf, 500.0).max_abs_tau == pytest.approx(77.473, rel=2e-2)


@pytest.mark.parametrize("fixture", ["homogeneous_cf", "graded_cf"])
def test_profile_faces_and_resultant(fixture, request):
    sol = request.getfixturevalue(fixture)
    prof = stress_profile(sol, 500.0)
    assert prof.method == "plane" and prof.element_kind == "q4"
    # face values are extrapolated from the two outer element rows
    assert abs(prof.tau_xy[0]) <= 5e-3 * prof.max_abs_tau
    assert abs(prof.tau_xy[-1]) <= 5e-3 * prof.max_abs_tau
    assert prof.shear_resultant() == pytest.approx(P, rel=1e-2)
    _, M = prof.axial_resultants()
    assert M == pytest.approx(-P * 500.0, rel=1e-2)


def test_mesh_refinement_is_second_order():
    w = [solve_plane(_cantilever("C", 5.0, 25 * k, 10 * k)).tip_w for k in (2, 4, 8)]
    d1, d2 = w[1] - w[0], w[2] - w[1]
    assert d1 > 0 and d2 > 0
    assert 3.0 < d1 / d2 < 5.0
    extrapolated = w[2] + d2 / 3
    assert abs(extrapolated - w[2]) < 0.5 * abs(w[2] - w[1])


def test_warns_next_to_ends(homogeneous_cf):
    with pytest.warns(TooCloseToBoundary):
        stress_profile(homogeneous_cf, 5.0)
    with pytest.warns(TooCloseToBoundary):
        stress_profile(homogeneous_cf, 995.0)
    with pytest.raises(ValueError):
        stress_profile(homogeneous_cf, 1001.0)


def test_profile_interpolates_between_columns(homogeneous_cf):
    s = homogeneous_cf.centroid_stresses
    xc = (np.arange(101) + 0.5) * 1000.0 / 101
    prof = stress_profile(homogeneous_cf, xc[40])
    np.testing.assert_allclose(prof.tau_xy[1:-1], s[:, 40, 2], rtol=1e-12)
    mid = stress_profile(homogeneous_cf, 0.5 * (xc[40] + xc[41]))
    np.testing.assert_allclose(mid.tau_xy[1:-1], 0.5 * (s[:, 40, 2] + s[:, 41, 2]), rtol=1e-12)


def test_missing_supports_are_reported(monkeypatch):
    monkeypatch.setattr(q4, "_constrained_dofs", lambda mesh, case: np.array([], dtype=int))
    with pytest.raises(SingularSystem):
        solve_plane(_cantilever(mx=6, my=3))
