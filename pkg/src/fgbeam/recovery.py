"""Pointwise stresses and section resultants recovered from a solved beam.

Two shear-stress measures are available:

``equilibrium``
    ``tau_xy = S_w(y) M_w,x + S_theta(y) M_theta,x``, from integrating the
    axial equilibrium of a slice; force-based solutions only.  The
    contribution of ``N,x`` is dropped (zero for the transverse-load cases).
``constitutive``
    ``tau_xy = G(y) f,y(y) gamma0`` for the third-order kinds and
    ``G(y) gamma0`` for DFS.  DEB has no shear strain.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import minimize_scalar

from .assembly import Solution
from .classic import ElementKind
from .errors import InvalidCase
from .material import FGMaterial, shear_modulus, youngs_modulus
from .section import ShearShape, _t_vector, shape_function

__all__ = [
    "StressProfile",
    "thickness_samples",
    "normal_stress",
    "shear_stress",
    "section_resultants",
    "stress_profile",
    "max_shear_stress",
    "write_profiles_csv",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("x_mm", "y_mm", "sigma_x", "tau_xy", "element_kind")
METHODS = ("equilibrium", "constitutive")


@dataclass(frozen=True)
class StressProfile:
    """Stresses along one vertical line ``x = const`` of the beam.

    ``ys`` may repeat an interface ordinate: the first copy belongs to the
    layer below, the second to the layer above.
    """

    x: float
    ys: np.ndarray
    sigma_x: np.ndarray
    tau_xy: np.ndarray
    element_kind: str
    width: float
    method: str = "equilibrium"

    def shear_resultant(self) -> float:
        """``b * int tau_xy dy`` by the trapezoid rule over the samples."""
        return float(self.width * np.trapezoid(self.tau_xy, self.ys))

    def axial_resultants(self) -> tuple[float, float]:
        """``(b int sigma_x dy, b int y sigma_x dy)`` by the trapezoid rule."""
        b = self.width
        return float(b * np.trapezoid(self.sigma_x, self.ys)), float(b * np.trapezoid(self.ys * self.sigma_x, self.ys))

    @property
    def max_abs_tau(self) -> float:
        return float(np.max(np.abs(self.tau_xy)))

    def rows(self):
        for y, s, t in zip(self.ys, self.sigma_x, self.tau_xy):
            yield (self.x, float(y), float(s), float(t), self.element_kind)


def _chebyshev_lobatto(a, c, n):
    k = np.arange(n)
    return 0.5 * (a + c) - 0.5 * (c - a) * np.cos(np.pi * k / (n - 1))


def thickness_samples(material: FGMaterial, n: int = 201):
    """Sample ordinates clustered at layer edges.

    Every layer gets Chebyshev-Lobatto points in proportion to its
    thickness, so interior interfaces appear twice.

    Returns
    -------
    ys : ndarray, shape (n,)
    layer : ndarray of int, shape (n,)
        Layer each sample is evaluated in.
    """
    layers = material.layers
    if n < 3 * len(layers):
        raise ValueError(f"need at least {3 * len(layers)} samples, got {n}")
    h = material.height
    counts = [max(3, int(round(n * (c - a) / h))) for a, c in layers]
    counts[int(np.argmax(counts))] += n - sum(counts)
    ys = [_chebyshev_lobatto(a, c, m) for (a, c), m in zip(layers, counts)]
    for arr, (a, c) in zip(ys, layers):
        arr[0], arr[-1] = a, c
    layer = np.concatenate([np.full(m, i) for i, m in enumerate(counts)])
    return np.concatenate(ys), layer


def _layers_for(material, y, layer):
    y = np.asarray(y, dtype=float)
    return material.layer_index(y) if layer is None else np.broadcast_to(np.asarray(layer), y.shape)


def normal_stress(solution: Solution, x, y, layer=None):
    """Axial stress ``E(y) t(y) . (eps0, kappa_w, kappa_theta)`` at ``(x, y)``.

    ``x`` is a scalar, ``y`` scalar or array.
    """
    mat = solution.model.geometry.material
    y = np.asarray(y, dtype=float)
    E = youngs_modulus(mat, y, _layers_for(mat, y, layer))
    strains = solution.generalized_strains(float(x))
    out = E * (_t_vector(y, mat.height) @ strains)
    return out if out.ndim else float(out)


def _default_method(kind: ElementKind) -> str:
    return "equilibrium" if kind.force_based else "constitutive"


def shear_stress(solution: Solution, x, y, method: str | None = None, layer=None):
    """Transverse shear stress at ``(x, y)``; see the module notes for ``method``."""
    method = _default_method(solution.kind) if method is None else method
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    mat = solution.model.geometry.material
    y = np.asarray(y, dtype=float)
    if method == "equilibrium":
        if not solution.kind.force_based:
            raise InvalidCase(f"equilibrium shear stress needs a force-based solution, not {solution.kind.value}")
        Sw, Sth = _shear_shape(solution)(y)
        dMw, dMth = solution.tau_parameters(float(x))
        out = np.asarray(Sw * dMw + Sth * dMth)
    else:
        if solution.kind is ElementKind.DEB:
            raise InvalidCase("DEB carries no shear strain")
        G = shear_modulus(mat, y, _layers_for(mat, y, layer))
        gamma = float(solution.shear_strain(float(x)))
        _, fy = shape_function(y, mat.height)
        out = G * gamma * (1.0 if solution.kind is ElementKind.DFS else fy)
    out = np.asarray(out, dtype=float)
    return out if out.ndim else float(out)


def _shear_shape(solution: Solution) -> ShearShape:
    cache = solution.__dict__.setdefault("_recovery_cache", {})
    if "shear_shape" not in cache:
        cache["shear_shape"] = ShearShape(solution.model.geometry, solution.model.element_constants.Fn)
    return cache["shear_shape"]


def section_resultants(solution: Solution, x) -> dict:
    """``N, M, Q`` and, where the kind defines them, ``M_w, M_theta, Q_theta``.

    For force-based solutions ``M = M_w + M_theta`` and
    ``Q = M_w,x + Q_theta`` hold identically.
    """
    return {k: float(v) if np.ndim(v) == 0 else v for k, v in solution.resultants(x).items()}


def stress_profile(solution: Solution, x: float, n: int = 201, method: str | None = None) -> StressProfile:
    """Sample ``sigma_x`` and ``tau_xy`` across the thickness at ``x``."""
    method = _default_method(solution.kind) if method is None else method
    mat = solution.model.geometry.material
    ys, layer = thickness_samples(mat, n)
    sig = normal_stress(solution, x, ys, layer)
    if solution.kind is ElementKind.DEB:
        tau = np.full_like(ys, np.nan)
    else:
        tau = shear_stress(solution, x, ys, method, layer)
    return StressProfile(float(x), ys, sig, tau, solution.kind.value, solution.model.geometry.b, method)


def max_shear_stress(solution: Solution, x: float, method: str | None = None, n: int = 201) -> tuple[float, float]:
    """``(y, |tau|)`` at the peak of ``|tau_xy|`` over the thickness at ``x``.

    The densest sample is refined with a bounded scalar search between its
    neighbours inside the same layer.
    """
    prof = stress_profile(solution, x, n, method)
    mat = solution.model.geometry.material
    ys, layer = thickness_samples(mat, n)
    k = int(np.argmax(np.abs(prof.tau_xy)))
    lo = ys[k - 1] if k > 0 and layer[k - 1] == layer[k] else ys[k]
    hi = ys[k + 1] if k + 1 < len(ys) and layer[k + 1] == layer[k] else ys[k]
    best_y, best = float(ys[k]), float(abs(prof.tau_xy[k]))
    if hi > lo:
        res = minimize_scalar(
            lambda yy: -abs(shear_stress(solution, x, yy, prof.method, layer[k])),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-10 * mat.height},
        )
        if -res.fun > best:
            best_y, best = float(res.x), float(-res.fun)
    return best_y, best


def write_profiles_csv(profiles, target) -> None:
    """Write profiles in the shared CSV layout to a path or text stream."""
    if isinstance(target, (str, Path)):
        with open(target, "w", newline="") as fh:
            write_profiles_csv(profiles, fh)
        return
    w = csv.writer(target, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for prof in profiles:
        for x, y, s, t, kind in prof.rows():
            w.writerow([_fmt(x), _fmt(y), _fmt(s), _fmt(t), kind])


def profiles_csv_text(profiles) -> str:
    buf = io.StringIO()
    write_profiles_csv(profiles, buf)
    return buf.getvalue()


def _fmt(v: float) -> str:
    return "nan" if not np.isfinite(v) else f"{v:.10g}"
