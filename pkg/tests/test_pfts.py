import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from fgbeam.assembly import BeamModel, make_model, solve
from fgbeam.classic import ElementKind
from fgbeam.material import benchmark_material
from fgbeam.pfts import (
    Expansion,
    ForceFieldBasis,
    LoadCase,
    displacement_shapes,
    element_system,
    resultant_fields,
    solve_element,
    tau_parameters,
)

FIELDS = ("N", "M_w", "M_theta", "Q_theta", "M", "Q")


@pytest.fixture(scope="module")
def basis_c5():
    from conftest import constants

    return ForceFieldBasis(constants("C", 5.0), 700.0)


def _coef(rng):
    return rng.standard_normal(5) * np.array([1e5, 1e5, 1e8, 1e6, 1e6])


def test_zero_state_has_zero_fields(basis_c5):
    xs = np.linspace(0, basis_c5.L, 7)
    out = resultant_fields(basis_c5, np.zeros(5), 0.0, xs)
    for name in FIELDS:
        assert np.all(out[name] == 0.0)
    assert np.all(tau_parameters(basis_c5, np.zeros(5), 0.0, xs) == 0.0)


def test_equilibrium_residuals_vanish(basis_c5):
    """N' = 0, M_w'' + Q_th' + q = 0, M_th' = Q_th, Q_th' = a1 N + a2 M_w + a3 M_th."""
    b = basis_c5
    rng = np.random.default_rng(1)
    xs = np.linspace(0, b.L, 50)
    for _ in range(5):
        beta, q0 = _coef(rng), rng.uniform(-1e4, 1e4)
        c = np.append(beta, q0)
        N, Mw, Mth, Qth = (f(xs) @ c for f in (b.N, b.Mw, b.Mth, b.Qth))
        dN = b.N.derivative()(xs) @ c
        d2Mw = b.dMw.derivative()(xs) @ c
        dQth = b.Qth.derivative()(xs) @ c
        dMth = b.dMth(xs) @ c
        scale = max(np.abs(v).max() for v in (N, Mw, Mth, Qth))
        assert np.abs(dN).max() <= 1e-8 * scale
        assert np.abs(d2Mw + dQth + q0).max() <= 1e-8 * scale
        assert np.abs(dMth - Qth).max() <= 1e-8 * scale
        assert np.abs(dQth - (b.a1 * N + b.a2 * Mw + b.a3 * Mth)).max() <= 1e-8 * scale


def test_tau_parameters_match_finite_difference_of_moment(basis_c5):
    b = basis_c5
    rng = np.random.default_rng(2)
    beta, q0 = _coef(rng), 3000.0
    xs = np.linspace(0.05 * b.L, 0.95 * b.L, 20)
    step = 1e-3
    for field, col in (("M_w", 0), ("M_theta", 1)):
        fd = (resultant_fields(b, beta, q0, xs + step)[field] - resultant_fields(b, beta, q0, xs - step)[field]) / (2 * step)
        an = tau_parameters(b, beta, q0, xs)[:, col]
        np.testing.assert_allclose(an, fd, rtol=1e-6, atol=1e-6 * np.abs(an).max())
    total = tau_parameters(b, beta, q0, xs).sum(axis=1)
    M = lambda x: resultant_fields(b, beta, q0, x)["M"]
    fd = (M(xs + step) - M(xs - step)) / (2 * step)
    np.testing.assert_allclose(total, fd, rtol=1e-6)
    np.testing.assert_allclose(total, resultant_fields(b, beta, q0, xs)["Q"], rtol=1e-10, atol=1e-10 * np.abs(total).max())


def test_moment_rows_sum_to_total_moment(basis_c5):
    b = basis_c5
    xs = np.linspace(0, b.L, 9)
    rows = b.Mw(xs) + b.Mth(xs)
    expected = np.zeros((xs.size, 6))
    expected[:, 1] = xs
    expected[:, 2] = 1.0
    expected[:, 5] = -0.5 * xs**2
    np.testing.assert_allclose(rows, expected, atol=1e-12 * b.L**2)


def test_scaled_basis_stays_bounded():
    from conftest import constants

    c = constants("B", 5.0)
    L = 2000.0  # lam * L ~ 260: the unscaled exponential would overflow
    b = ForceFieldBasis(c, L)
    xs = np.linspace(0, L, 401)
    P, _ = b.end_forces(xs)
    bound = max(1.0, L) * (1.0 + max(abs(c.a1), abs(c.a2), abs(c.a3)) / abs(c.g))
    assert np.all(np.isfinite(P))
    assert np.abs(P).max() <= bound
    assert np.abs(P[..., 3:]).max() <= 1.0 + 1e-12


def test_expansion_integral_against_quadrature():
    e = Expansion(0.01, 300.0)
    e.poly[:4, 0] = [1.0, -0.2, 3e-3, 1e-6]
    e.ep[0], e.em[0] = 2.0, -5.0
    I = e.integral()
    for x in (0.0, 17.0, 150.0, 300.0):
        ref = quad(lambda t: e(t)[0], 0.0, x, epsabs=0, epsrel=1e-13)[0]
        assert I(x)[0] == pytest.approx(ref, rel=1e-11, abs=1e-11)
    np.testing.assert_allclose(I.derivative()(np.linspace(0, 300, 7)), e(np.linspace(0, 300, 7)), rtol=1e-12, atol=1e-12)


def test_expansion_rejects_degree_overflow():
    e = Expansion(0.1, 1.0)
    e.poly[5, 0] = 1.0
    with pytest.raises(OverflowError):
        e.integral()


def test_displacement_shapes_vanish_at_origin(basis_c5):
    sh = displacement_shapes(basis_c5)
    scale = np.abs(sh.at(basis_c5.L)).max()
    assert np.abs(sh.at(0.0)).max() <= 1e-14 * scale


def test_displacement_shapes_against_adaptive_quadrature(basis_c5):
    b = basis_c5
    Fn = b.constants.Fn
    rng = np.random.default_rng(3)
    c = np.append(_coef(rng), 2500.0)
    sh = displacement_shapes(b)

    def strain(i, x):
        sig = np.array([b.N(x) @ c, b.Mw(x) @ c, b.Mth(x) @ c])
        return Fn[i] @ sig

    x = b.L / 3
    u_ref = quad(lambda t: strain(0, t), 0, x, epsabs=0, epsrel=1e-13)[0]
    assert sh.u(x) @ c == pytest.approx(u_ref, rel=1e-9)

    slope = lambda s: quad(lambda t: -strain(1, t), 0, s, epsabs=1e-15, epsrel=1e-11)[0]
    w_ref = quad(slope, 0, b.L, epsabs=0, epsrel=1e-12)[0]
    assert sh.w(b.L) @ c == pytest.approx(w_ref, rel=1e-8)


def test_single_element_cantilever_system():
    from conftest import constants

    b = ForceFieldBasis(constants("B", 5.0), 1000.0)
    sys_ = element_system(b, 0.0, nodal_loads=(np.zeros(4), np.array([0.0, 5e5, 0.0, 0.0])))
    assert sys_.A.shape == (13, 13)
    z = solve_element(b, sys_, fixed=range(4))
    assert z[5] == pytest.approx(45.102, rel=1e-3)
    resid = sys_.A[4:] @ z - sys_.rhs[4:]
    assert np.abs(resid).max() <= 1e-10 * np.abs(sys_.A[4:] @ z).max()


@pytest.mark.parametrize(
    "kind,p,boundary,element,expected",
    [
        ("B", 5.0, "CF", "pfts", 45.102),
        ("B", 5.0, "CF", "pfts_t", 45.088),
        ("C", 5.0, "CF", "pfts", 37.232),
        ("C", 5.0, "CF", "pfts_t", 37.095),
        ("C", 5.0, "SS", "pfts", 231.39),
        ("C", 5.0, "SS", "pfts_t", 230.70),
        ("C", 5.0, "CC", "pfts", 50.606),
        ("C", 5.0, "CC", "pfts_t", 49.929),
    ],
)
def test_single_element_reproduces_converged_values(kind, p, boundary, element, expected, cached_solution):
    assert cached_solution(kind, p, element, boundary, 1).reported_w == pytest.approx(expected, rel=1e-3)


@pytest.mark.parametrize("boundary", ["CF", "SS", "CC"])
@pytest.mark.parametrize("element", ["pfts", "pfts_t"])
def test_mesh_independence(boundary, element, cached_solution):
    ref = cached_solution("C", 5.0, element, boundary, 1)
    L = ref.model.length
    xs = np.linspace(0, L, 9)
    for n in (2, 8):
        sol = cached_solution("C", 5.0, element, boundary, n)
        for name in ("u", "w", "w_x", "theta"):
            a, b = sol.displacement(name, xs), ref.displacement(name, xs)
            scale = max(np.abs(b).max(), 1e-30)
            assert np.abs(a - b).max() <= 1e-8 * scale + 1e-12, (n, name)


@pytest.mark.parametrize("boundary", ["CF", "SS", "CC"])
def test_bending_and_shear_recoveries_of_w_agree(boundary, cached_solution):
    sol = cached_solution("B", 5.0, "pfts", boundary, 4)
    L = sol.model.length
    le = sol.model.element_length
    # at every element end the two transverse-displacement recoveries coincide
    for e in range(sol.model.n_elements):
        x = (e + 1) * le * (1 - 1e-12)
        w, ws = sol.displacement("w", x), sol.displacement("w_s", x)
        assert abs(w - ws) <= 1e-9 * max(abs(sol.reported_w), 1.0)
    assert abs(sol.displacement("w", L) - sol.nodes[-1, 1]) <= 1e-9 * abs(sol.reported_w)


def test_traditional_variant_equals_overridden_shear_stiffness(cached_solution):
    ref = cached_solution("C", 5.0, "pfts_t", "CC", 2)
    m = ref.model
    swapped = BeamModel(
        m.length, m.n_elements, m.geometry, m.constants.traditional(), ElementKind.PFTS, m.load, m.boundary
    )
    sol = solve(swapped)
    np.testing.assert_array_equal(sol.nodes, ref.nodes)
    np.testing.assert_array_equal(sol.beta, ref.beta)


def test_complementary_energy_gives_tip_deflection(cached_solution):
    """For a cantilever, P * w_tip = int (sigma . Fn sigma + Q_th^2 / Ds) dx."""
    sol = cached_solution("C", 10.0, "pfts", "CF", 1)
    c = sol.model.element_constants

    def density(x):
        r = sol.resultants(x)
        s = np.array([r["N"], r["M_w"], r["M_theta"]])
        return s @ c.Fn @ s + r["Q_theta"] ** 2 / c.Ds

    L = sol.model.length
    work = quad(density, 0, L, epsabs=0, epsrel=1e-12, limit=200)[0]
    assert sol.tip_w == pytest.approx(work / 5e5, rel=1e-9)


@settings(max_examples=20, deadline=None)
@given(
    kind=st.sampled_from(["A", "B", "C"]),
    p=st.sampled_from([0.0, 0.5, 1.0, 2.0, 5.0, 10.0]),
    L=st.floats(min_value=50.0, max_value=5000.0),
    P=st.floats(min_value=-1e6, max_value=1e6).filter(lambda v: abs(v) > 1.0),
)
def test_cantilever_energy_identity_for_random_beams(kind, p, L, P):
    sol = solve(make_model(benchmark_material(kind, p), "pfts", "CF", 1, length=L, tip_load=P))
    c = sol.model.element_constants

    def density(x):
        r = sol.resultants(x)
        s = np.array([r["N"], r["M_w"], r["M_theta"]])
        return s @ c.Fn @ s + r["Q_theta"] ** 2 / c.Ds

    work = quad(density, 0, L, epsabs=0, epsrel=1e-11, limit=400)[0]
    assert sol.tip_w * P == pytest.approx(work, rel=1e-7)
    assert sol.residual < 1e-10


@pytest.mark.parametrize("boundary", ["CF", "SS", "CC"])
def test_linear_in_load(boundary, cached_solution):
    sol = cached_solution("B", 1.0, "pfts", boundary, 3)
    m = sol.model
    doubled = solve(m.with_load(m.load.scaled(2.0)))
    np.testing.assert_allclose(doubled.nodes, 2 * sol.nodes, rtol=1e-12, atol=1e-12 * np.abs(sol.nodes).max())
    np.testing.assert_allclose(doubled.beta, 2 * sol.beta, rtol=1e-12, atol=1e-12 * np.abs(sol.beta).max())


def test_domain_check():
    from conftest import constants

    b = ForceFieldBasis(constants("A", 1.0), 10.0)
    with pytest.raises(ValueError):
        resultant_fields(b, np.zeros(5), 0.0, 11.0)
    with pytest.raises(ValueError):
        ForceFieldBasis(constants("A", 1.0), 0.0)


def test_load_case_scaling():
    lc = LoadCase(10.0, {3: (1.0, 2.0, 3.0)})
    s = lc.scaled(-2.0)
    assert s.q0 == -20.0
    np.testing.assert_array_equal(s.nodal_vector(3), [-2.0, -4.0, 0.0, -6.0])
    np.testing.assert_array_equal(s.nodal_vector(0), np.zeros(4))
