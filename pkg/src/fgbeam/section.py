"""Cross-section constants of the modified third-order beam theory.

All through-thickness integrals are evaluated layer by layer with
Gauss-Legendre rules.  Power-law layers with a fractional exponent are
integrated in a graded coordinate ``y = origin + span * t**k`` which turns
``((y - origin)/span)**p`` into a smooth function of ``t``; this keeps the
rules spectrally convergent where the modulus has an unbounded derivative
at a layer edge.

Area integrals carry the width ``b``; the cumulative integrals ``S_i(y)``
are per unit width.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InvalidModel, NonPositiveDefinite, OutOfThickness, UnsupportedEigenBranch
from .material import FGMaterial

__all__ = [
    "QuadratureSpec",
    "SectionGeometry",
    "SectionConstants",
    "ShearShape",
    "shape_function",
    "compute_constants",
    "shear_shape",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Legendre points per material layer."""

    order: int = 64

    def __post_init__(self):
        if self.order < 8:
            raise ValueError(f"quadrature order must be >= 8, got {self.order}")


@dataclass(frozen=True)
class SectionGeometry:
    """Rectangular section of width ``b``; the height comes from the material."""

    b: float
    material: FGMaterial

    def __post_init__(self):
        if not self.b > 0:
            raise InvalidModel(f"section width must be positive, got {self.b}")

    @property
    def h(self) -> float:
        return self.material.height

    @property
    def area(self) -> float:
        return self.b * self.h


def shape_function(y, h: float):
    """Cubic warping function ``f(y) = y (1 - 4y^2 / 3h^2)`` and its slope."""
    ya = np.asarray(y, dtype=float)
    if np.any(np.abs(ya) > 0.5 * h * (1 + 1e-9)):
        raise OutOfThickness(f"y outside [-{h / 2:g}, {h / 2:g}]")
    f = ya * (1.0 - 4.0 * ya**2 / (3.0 * h**2))
    fy = 1.0 - 4.0 * ya**2 / h**2
    if f.ndim == 0:
        return float(f), float(fy)
    return f, fy


def _t_vector(y, h):
    """Row vector ``t(y) = [1, y - f, f]`` stacked along the last axis."""
    f = y * (1.0 - 4.0 * y**2 / (3.0 * h**2))
    return np.stack([np.ones_like(y), y - f, f], axis=-1)


@lru_cache(maxsize=None)
def _legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _grading_power(p: float) -> int:
    if p == 0.0 or float(p).is_integer():
        return 1
    frac = Fraction(p).limit_denominator(64)
    if abs(float(frac) - p) < 1e-14 and frac.denominator <= 16:
        return frac.denominator
    return 8


class _LayerMap:
    """Monotone map ``y(t) = origin + span * t**k`` covering one layer."""

    def __init__(self, mat: FGMaterial, i: int):
        a, c = mat.layers[i]
        law, origin, span = mat.layer_law(i)
        self.lo, self.hi = a, c
        self.law = law
        self.k = _grading_power(mat.p) if law == "power" else 1
        if law == "power":
            self.origin, self.span = origin, span
        else:
            self.origin, self.span = a, c - a
        self.E_m, self.E_c, self.p = mat.E_m, mat.E_c, mat.p

    def t_of(self, y):
        s = np.clip((np.asarray(y, dtype=float) - self.origin) / self.span, 0.0, 1.0)
        return s ** (1.0 / self.k)

    def modulus_t(self, t):
        """Young's modulus at graded coordinate ``t``."""
        if self.law == "const0":
            return np.full_like(t, self.E_m)
        if self.law == "const1":
            return np.full_like(t, self.E_c)
        vc = np.ones_like(t) if self.p == 0.0 else t ** (self.k * self.p)
        return self.E_m + (self.E_c - self.E_m) * vc

    def rule(self, y_from, y_to, n):
        """Nodes/weights for ``int_{y_from}^{y_to} (.) dy`` (broadcast over ends).

        Returns ``(y, t, w)`` with a trailing axis of length ``n``.
        """
        x, wx = _legendre(n)
        t0 = self.t_of(y_from)[..., None]
        t1 = self.t_of(y_to)[..., None]
        half = 0.5 * (t1 - t0)
        t = t0 + half * (x + 1.0)
        jac = self.span * self.k * t ** (self.k - 1)
        return self.origin + self.span * t**self.k, t, half * wx * jac


@dataclass(frozen=True)
class SectionConstants:
    """Section constants for one cross-section (units N, mm).

    ``Dn``/``Fn`` relate ``(N, M_w, M_theta)`` to ``(eps0, kappa_w,
    kappa_theta)``; ``Ds_hat`` is the shear stiffness of the constitutive
    shear stress, ``Ds`` the equilibrium-consistent (modified) one.  ``Ds``
    is also the value the force-field constants ``a1..a3, g, lam`` were
    formed with; see :meth:`with_shear_stiffness`.
    """

    b: float
    h: float
    Dn: np.ndarray
    Fn: np.ndarray
    Ds_hat: float
    fs: np.ndarray
    fss: np.ndarray
    Ds: float
    a1: float
    a2: float
    a3: float
    g: float
    lam: float
    # Euler-Bernoulli / Timoshenko section integrals (about y = 0)
    A11: float = 0.0
    B11: float = 0.0
    D11: float = 0.0
    GA: float = 0.0
    Ds_modified: float = field(default=0.0, repr=False)

    def with_shear_stiffness(self, Ds: float) -> "SectionConstants":
        """Copy with the force-field constants rebuilt from shear stiffness ``Ds``."""
        a1, a2, a3, g, lam = _field_constants(self.Fn, Ds)
        return replace(self, Ds=float(Ds), a1=a1, a2=a2, a3=a3, g=g, lam=lam)

    def traditional(self) -> "SectionConstants":
        """Constants using ``Ds_hat``: the PFTS-T variant."""
        return self.with_shear_stiffness(self.Ds_hat)

    def as_dict(self) -> dict:
        return {
            "b": self.b,
            "h": self.h,
            "Dn": self.Dn.tolist(),
            "Fn": self.Fn.tolist(),
            "Ds_hat": self.Ds_hat,
            "fs": self.fs.tolist(),
            "fss": self.fss.tolist(),
            "Ds": self.Ds,
            "a1": self.a1,
            "a2": self.a2,
            "a3": self.a3,
            "g": self.g,
            "lambda": self.lam,
            "A11": self.A11,
            "B11": self.B11,
            "D11": self.D11,
            "GA": self.GA,
        }


def _field_constants(Fn, Ds):
    a1 = Ds * (Fn[0, 2] - Fn[0, 1])
    a2 = Ds * (Fn[1, 2] - Fn[1, 1])
    a3 = Ds * (Fn[2, 2] - Fn[1, 2])
    g = a2 - a3
    if not g < 0.0:
        raise UnsupportedEigenBranch(
            f"g = {g:.6g} >= 0: only the g < 0 branch of r^2 + g = 0 (real roots) is implemented"
        )
    return float(a1), float(a2), float(a3), float(g), float(np.sqrt(-g))


def _check_spd(name, m):
    try:
        np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        raise NonPositiveDefinite(f"{name} is not positive definite") from None


class ShearShape:
    """Equilibrium shear-stress shape functions ``S_w(y)``, ``S_theta(y)``.

    ``tau_xy(x, y) = S_w(y) M_w,x(x) + S_theta(y) M_theta,x(x)``.
    """

    def __init__(self, geom: SectionGeometry, Fn: np.ndarray, quad: QuadratureSpec = QuadratureSpec()):
        self.geom = geom
        self.Fn = np.array(Fn, dtype=float)
        self.n = quad.order
        mat = geom.material
        self._maps = [_LayerMap(mat, i) for i in range(len(mat.layers))]
        # S_1..S_3 at every layer start
        starts = [np.zeros(3)]
        for lm in self._maps:
            starts.append(starts[-1] + self._partial(lm, np.array(lm.hi)))
        self._starts = np.array(starts)

    def _partial(self, lm: _LayerMap, y):
        yy, t, w = lm.rule(np.full_like(y, lm.lo, dtype=float), y, self.n)
        E = lm.modulus_t(t)
        tv = _t_vector(yy, self.geom.h)
        return -np.einsum("...n,...nk->...k", E * w, tv)

    def s123(self, y):
        """``(S_1, S_2, S_3)`` per unit width, last axis of length 3."""
        ya = np.asarray(y, dtype=float)
        mat = self.geom.material
        tol = 1e-9 * mat.height
        if np.any(ya < mat.breakpoints[0] - tol) or np.any(ya > mat.breakpoints[-1] + tol):
            raise OutOfThickness("y outside the section")
        ya = np.clip(ya, mat.breakpoints[0], mat.breakpoints[-1])
        idx = mat.layer_index(ya)
        out = np.empty(ya.shape + (3,))
        for i, lm in enumerate(self._maps):
            sel = idx == i
            if np.any(sel):
                out[sel] = self._starts[i] + self._partial(lm, ya[sel])
        return out

    def __call__(self, y):
        s = self.s123(y) @ self.Fn[:, 1:3]
        if s.ndim == 1:
            return float(s[0]), float(s[1])
        return s[..., 0], s[..., 1]


def _section_nodes(geom: SectionGeometry, n: int):
    """Full-section nodes ``y``, weights and moduli concatenated over layers."""
    ys, ws, Es = [], [], []
    for i in range(len(geom.material.layers)):
        lm = _LayerMap(geom.material, i)
        y, t, w = lm.rule(np.array(lm.lo), np.array(lm.hi), n)
        ys.append(y.ravel())
        ws.append(w.ravel())
        Es.append(lm.modulus_t(t).ravel())
    return np.concatenate(ys), np.concatenate(ws), np.concatenate(Es)


def compute_constants(
    geom: SectionGeometry, quad: QuadratureSpec = QuadratureSpec(), check_branch: bool = True
) -> SectionConstants:
    """Integrate every section constant of ``geom``.

    Raises
    ------
    NonPositiveDefinite
        ``Dn`` or ``fss`` is not positive definite.
    UnsupportedEigenBranch
        ``g >= 0`` (unless ``check_branch`` is false, in which case the
        force-field constants are left as NaN).
    """
    b, h = geom.b, geom.h
    nu = geom.material.nu
    y, w, E = _section_nodes(geom, quad.order)
    G = E / (2.0 * (1.0 + nu))
    tv = _t_vector(y, h)
    _, fy = shape_function(y, h)

    Dn = b * np.einsum("n,ni,nj->ij", E * w, tv, tv)
    Dn = 0.5 * (Dn + Dn.T)
    _check_spd("Dn", Dn)
    Fn = np.linalg.inv(Dn)
    Fn = 0.5 * (Fn + Fn.T)
    Ds_hat = b * np.sum(fy**2 * G * w)

    shape = ShearShape(geom, Fn, quad)
    S = shape.s123(y) @ Fn[:, 1:3]
    fs = b * np.einsum("n,nk->k", fy * w, S)
    fss = b * np.einsum("n,ni,nj->ij", w / G, S, S)
    fss = 0.5 * (fss + fss.T)
    _check_spd("fss", fss)
    Ds = float(fs @ np.linalg.solve(fss, fs))

    try:
        a1, a2, a3, g, lam = _field_constants(Fn, Ds)
    except UnsupportedEigenBranch:
        if check_branch:
            raise
        a1 = a2 = a3 = g = lam = float("nan")

    return SectionConstants(
        b=b,
        h=h,
        Dn=Dn,
        Fn=Fn,
        Ds_hat=float(Ds_hat),
        fs=fs,
        fss=fss,
        Ds=Ds,
        a1=a1,
        a2=a2,
        a3=a3,
        g=g,
        lam=lam,
        A11=float(b * np.sum(E * w)),
        B11=float(b * np.sum(E * y * w)),
        D11=float(b * np.sum(E * y * y * w)),
        GA=float(b * np.sum(G * w)),
        Ds_modified=Ds,
    )


def shear_shape(geom: SectionGeometry, constants: SectionConstants, y, quad: QuadratureSpec = QuadratureSpec()):
    """``(S_w(y), S_theta(y))`` for the section."""
    return ShearShape(geom, constants.Fn, quad)(y)
