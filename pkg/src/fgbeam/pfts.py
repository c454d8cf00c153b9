"""Force-based third-order beam element with closed-form internal forces.

Inside an element the resultants solve the equilibrium equations exactly::

    N      = c0
    Q      = c1 - q0 x
    M      = c2 + c1 x - q0 x^2 / 2
    M_w    = -(a1 c0 + a3 (c1 x + c2)) / g + d3 e+(x) + d4 e-(x)
             + q0 (a3 x^2 / 2 - a2 / g) / g
    M_th   = M - M_w
    Q_th   = Q - M_w,x

with ``e+(x) = exp(lam (x - L))`` and ``e-(x) = exp(-lam x)``.  Both
exponentials stay in ``(0, 1]`` on ``[0, L]``, so ``d3`` is the growing
coefficient rescaled by ``exp(lam L)``; the unscaled one is never formed
(``lam L`` reaches ~180 for the benchmark beams).

Every field is held as an :class:`Expansion` over ``{1, x, .., x^5, e+, e-}``
whose coefficients are rows of six numbers: the five force parameters
``beta = (c0, c1, c2, d3, d4)`` followed by the uniform load ``q0``.
Integrals from 0 and derivatives are then exact and closed form.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import SingularSystem
from .section import SectionConstants

__all__ = [
    "LoadCase",
    "Expansion",
    "ForceFieldBasis",
    "DisplacementShapes",
    "ElementSystem",
    "resultant_fields",
    "tau_parameters",
    "displacement_shapes",
    "element_system",
    "solve_element",
]

NCOL = 6  # beta (5) + q0
_NPOLY = 6


@dataclass(frozen=True)
class LoadCase:
    """Uniform transverse load and nodal loads.

    ``nodal`` maps node index to ``(P_x, P_y, M)``; ``P_y`` and ``q0`` act
    along ``+w``; ``M`` is conjugate to the section rotation with the
    nodal-equilibrium convention of :mod:`fgbeam.conventions`.
    """

    q0: float = 0.0
    nodal: dict = field(default_factory=dict)

    def scaled(self, factor: float) -> "LoadCase":
        return LoadCase(self.q0 * factor, {k: tuple(factor * np.asarray(v)) for k, v in self.nodal.items()})

    def nodal_vector(self, node: int) -> np.ndarray:
        """Applied ``(N, Q, M_w, M_theta)``-ordered load at ``node``."""
        px, py, m = self.nodal.get(node, (0.0, 0.0, 0.0))
        return np.array([px, py, 0.0, m], dtype=float)


class Expansion:
    """Exponential-polynomial field with coefficient rows over (beta, q0)."""

    __slots__ = ("poly", "ep", "em", "lam", "L")

    def __init__(self, lam, L, poly=None, ep=None, em=None):
        self.lam = float(lam)
        self.L = float(L)
        self.poly = np.zeros((_NPOLY, NCOL)) if poly is None else np.array(poly, dtype=float)
        self.ep = np.zeros(NCOL) if ep is None else np.array(ep, dtype=float)
        self.em = np.zeros(NCOL) if em is None else np.array(em, dtype=float)

    def _like(self, poly, ep, em):
        return Expansion(self.lam, self.L, poly, ep, em)

    def __add__(self, other):
        return self._like(self.poly + other.poly, self.ep + other.ep, self.em + other.em)

    def __sub__(self, other):
        return self._like(self.poly - other.poly, self.ep - other.ep, self.em - other.em)

    def __mul__(self, s):
        return self._like(self.poly * s, self.ep * s, self.em * s)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def basis(self, x):
        """Basis values ``[1, x, .., x^5, e+, e-]`` along the last axis."""
        x = np.asarray(x, dtype=float)
        powers = x[..., None] ** np.arange(_NPOLY)
        ep = np.exp(self.lam * (x - self.L))[..., None]
        em = np.exp(-self.lam * x)[..., None]
        return np.concatenate([powers, ep, em], axis=-1)

    def coeffs(self):
        return np.vstack([self.poly, self.ep, self.em])

    def __call__(self, x):
        """Coefficient row(s) at ``x``: shape ``x.shape + (6,)``."""
        return self.basis(x) @ self.coeffs()

    def derivative(self):
        k = np.arange(1, _NPOLY)[:, None]
        poly = np.zeros_like(self.poly)
        poly[:-1] = k * self.poly[1:]
        return self._like(poly, self.lam * self.ep, -self.lam * self.em)

    def integral(self):
        """Antiderivative vanishing at ``x = 0``."""
        if np.any(self.poly[-1] != 0.0):
            raise OverflowError("polynomial degree exceeds expansion capacity")
        k = np.arange(1, _NPOLY)[:, None]
        poly = np.zeros_like(self.poly)
        poly[1:] = self.poly[:-1] / k
        lam = self.lam
        # int_0^x e+ = (e+(x) - e^{-lam L}) / lam ; int_0^x e- = (1 - e-(x)) / lam
        poly[0] += -self.ep * np.exp(-lam * self.L) / lam + self.em / lam
        return self._like(poly, self.ep / lam, -self.em / lam)

    def split(self, x, q0):
        """``(row over beta, load term)`` at ``x`` for load ``q0``."""
        v = self(x)
        return v[..., :5], v[..., 5] * q0


class ForceFieldBasis:
    """Closed-form internal-force fields of one element of length ``L``.

    Parameters
    ----------
    constants : SectionConstants
        Section constants; their ``Ds`` selects PFTS (modified) or PFTS-T
        (``constants.traditional()``).
    L : float
        Element length (mm).
    """

    def __init__(self, constants: SectionConstants, L: float):
        if not L > 0:
            raise ValueError("element length must be positive")
        self.constants = constants
        self.L = float(L)
        c = constants
        a1, a2, a3, g, lam = c.a1, c.a2, c.a3, c.g, c.lam
        self.a1, self.a2, self.a3, self.g, self.lam = a1, a2, a3, g, lam

        def ex():
            return Expansion(lam, self.L)

        N = ex()
        N.poly[0, 0] = 1.0

        Q = ex()
        Q.poly[0, 1] = 1.0
        Q.poly[1, 5] = -1.0

        M = ex()
        M.poly[0, 2] = 1.0
        M.poly[1, 1] = 1.0
        M.poly[2, 5] = -0.5

        Mw = ex()
        Mw.poly[0, 0] = -a1 / g
        Mw.poly[1, 1] = -a3 / g
        Mw.poly[0, 2] = -a3 / g
        Mw.ep[3] = 1.0
        Mw.em[4] = 1.0
        # particular solution for uniform q: a3/g * x^2/2 - a2/g^2
        Mw.poly[2, 5] = 0.5 * a3 / g
        Mw.poly[0, 5] = -a2 / g**2

        self.N, self.Q, self.M, self.Mw = N, Q, M, Mw
        self.Mth = M - Mw
        self.dMw = Mw.derivative()
        self.dMth = self.Mth.derivative()
        self.Qth = Q - self.dMw

    # -- matrices in the block notation of the element equations -------------
    def sigma(self, x):
        """``(N_sigma (3x5), F_sigma per unit q0 (3,))`` at ``x``."""
        rows = np.stack([self.N(x), self.Mw(x), self.Mth(x)], axis=-2)
        return rows[..., :5], rows[..., 5]

    def shear(self, x):
        """``(N_r (5,), F_r per unit q0)`` for ``Q_theta`` at ``x``."""
        v = self.Qth(x)
        return v[..., :5], v[..., 5]

    def end_forces(self, x):
        """``(P (4x5), F per unit q0 (4,))`` for ``S = (N, Q, M_w, M_theta)``."""
        rows = np.stack([self.N(x), self.Q(x), self.Mw(x), self.Mth(x)], axis=-2)
        return rows[..., :5], rows[..., 5]

    def tau(self, x):
        """``(N_tau (2x5), F_tau per unit q0 (2,))`` for ``(M_w,x, M_theta,x)``."""
        rows = np.stack([self.dMw(x), self.dMth(x)], axis=-2)
        return rows[..., :5], rows[..., 5]


def resultant_fields(basis: ForceFieldBasis, beta, load: LoadCase | float, x) -> dict:
    """All section resultants at ``x`` for force parameters ``beta``."""
    q0 = load.q0 if isinstance(load, LoadCase) else float(load)
    _check_domain(basis, x)
    coef = np.append(np.asarray(beta, dtype=float), q0)
    return {
        name: getattr(basis, attr)(x) @ coef
        for name, attr in (("N", "N"), ("M_w", "Mw"), ("M_theta", "Mth"), ("Q_theta", "Qth"), ("M", "M"), ("Q", "Q"))
    }


def tau_parameters(basis: ForceFieldBasis, beta, load: LoadCase | float, x):
    """``(M_w,x, M_theta,x)`` at ``x``; their sum is the shear force."""
    q0 = load.q0 if isinstance(load, LoadCase) else float(load)
    _check_domain(basis, x)
    coef = np.append(np.asarray(beta, dtype=float), q0)
    return np.stack([basis.dMw(x) @ coef, basis.dMth(x) @ coef], axis=-1)


def _check_domain(basis, x):
    xa = np.asarray(x, dtype=float)
    tol = 1e-9 * basis.L
    if np.any(xa < -tol) or np.any(xa > basis.L + tol):
        raise ValueError(f"x outside element [0, {basis.L:g}]")


@dataclass(frozen=True)
class DisplacementShapes:
    """Displacement fields of an element as expansions over ``(beta, q0)``.

    Each field is measured from the start-node value, e.g.
    ``u(x) = u_a + u(x) @ (beta, q0)``; ``w`` additionally needs
    ``+ x w_x,a`` and ``w_s`` needs ``+ x theta_a``.
    """

    u: Expansion
    theta: Expansion
    w_x: Expansion
    w: Expansion
    w_s: Expansion

    def at(self, x):
        """Stacked rows for ``(u, w, w_x, theta, w_s)`` at ``x``: shape (5, 6)."""
        return np.stack([self.u(x), self.w(x), self.w_x(x), self.theta(x), self.w_s(x)], axis=-2)


def displacement_shapes(basis: ForceFieldBasis) -> DisplacementShapes:
    """Integrate strains of the force fields into displacement fields."""
    Fn = basis.constants.Fn
    Ds = basis.constants.Ds
    sig = (basis.N, basis.Mw, basis.Mth)

    def strain(i):
        out = sig[0] * Fn[i, 0]
        return out + sig[1] * Fn[i, 1] + sig[2] * Fn[i, 2]

    eps0, kap_w, kap_th = strain(0), strain(1), strain(2)
    u = eps0.integral()
    theta = (-kap_th).integral()
    w_x = (-kap_w).integral()
    w = w_x.integral()
    w_s = (theta + basis.Qth * (1.0 / Ds)).integral()
    return DisplacementShapes(u=u, theta=theta, w_x=w_x, w=w, w_s=w_s)


@dataclass(frozen=True)
class ElementSystem:
    """13x13 element equations, unknowns ``[phi_a(4), phi_b(4), beta(5)]``."""

    A: np.ndarray
    rhs: np.ndarray

    def solve(self, rtol: float = 1e-8) -> np.ndarray:
        return _lu_solve(self.A, self.rhs, rtol)


def compatibility_rows(basis: ForceFieldBasis, shapes: DisplacementShapes | None = None):
    """``(N_a, N_b, N_beta(L), U(L) per unit q0)`` of the compatibility equations."""
    L = basis.L
    shapes = displacement_shapes(basis) if shapes is None else shapes
    Na = np.array(
        [[1, 0, 0, 0], [0, 1, L, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 1, 0, L]],
        dtype=float,
    )
    Nb = -np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 1, 0, 0]],
        dtype=float,
    )
    rows = shapes.at(L)
    return Na, Nb, rows[:, :5], rows[:, 5]


def element_system(basis: ForceFieldBasis, load: LoadCase | float = 0.0, nodal_loads=None) -> ElementSystem:
    """Assemble the single-element equations.

    ``nodal_loads`` is ``(S_a, S_b)``, each ``(N, Q, M_w, M_theta)``-ordered;
    by default they are taken from ``load.nodal`` at nodes 0 and 1.
    """
    q0 = load.q0 if isinstance(load, LoadCase) else float(load)
    if nodal_loads is None:
        lc = load if isinstance(load, LoadCase) else LoadCase(q0)
        S_a, S_b = lc.nodal_vector(0), lc.nodal_vector(1)
    else:
        S_a, S_b = (np.asarray(v, dtype=float) for v in nodal_loads)
    P0, F0 = basis.end_forces(0.0)
    PL, FL = basis.end_forces(basis.L)
    Na, Nb, Nbeta, UL = compatibility_rows(basis)
    A = np.zeros((13, 13))
    A[0:4, 8:13] = -P0
    A[4:8, 8:13] = PL
    A[8:13, 0:4] = Na
    A[8:13, 4:8] = Nb
    A[8:13, 8:13] = Nbeta
    rhs = np.concatenate([S_a + q0 * F0, S_b - q0 * FL, -q0 * UL])
    return ElementSystem(A, rhs)


def _equilibrate(A):
    """Row then column max-abs scale factors of a dense or sparse matrix."""
    absA = abs(A)
    r = np.asarray(absA.max(axis=1).toarray() if hasattr(absA, "toarray") else absA.max(axis=1)).ravel()
    r[r == 0.0] = 1.0
    r = 1.0 / r
    absR = absA.multiply(r[:, None]) if hasattr(absA, "multiply") else absA * r[:, None]
    c = np.asarray(absR.max(axis=0).toarray() if hasattr(absR, "toarray") else absR.max(axis=0)).ravel()
    c[c == 0.0] = 1.0
    return r, 1.0 / c


def backward_error(A, x, b) -> float:
    """``|Ax - b| / (|A| |x| + |b|)`` in the infinity norm."""
    normA = np.max(np.asarray(abs(A).sum(axis=1)).ravel())
    den = normA * np.max(np.abs(x)) + np.max(np.abs(b))
    if den == 0.0:
        return 0.0
    return float(np.max(np.abs(A @ x - b)) / den)


def _lu_solve(A, rhs, rtol):
    # rows mix forces (~1e6 N) and lengths (~1 mm); equilibrate before factoring
    r, c = _equilibrate(A)
    As = (A * r[:, None]) * c[None, :]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
            lu = scipy.linalg.lu_factor(As, check_finite=True)
            y = scipy.linalg.lu_solve(lu, rhs * r)
    except (ValueError, np.linalg.LinAlgError, scipy.linalg.LinAlgError, scipy.linalg.LinAlgWarning) as exc:
        raise SingularSystem(str(exc)) from None
    sol = c * y
    err = backward_error(As, y, rhs * r)
    if not np.all(np.isfinite(sol)) or err > rtol:
        raise SingularSystem(f"relative residual {err:.3e} exceeds {rtol:g}")
    return sol


def solve_element(basis: ForceFieldBasis, system: ElementSystem, fixed=()) -> np.ndarray:
    """Solve one element with the listed node dofs (0..7) held at zero."""
    A = system.A.copy()
    rhs = system.rhs.copy()
    for d in fixed:
        A[d, :] = 0.0
        A[d, d] = 1.0
        rhs[d] = 0.0
    return _lu_solve(A, rhs, 1e-8)
