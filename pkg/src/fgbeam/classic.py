"""Displacement-based comparison elements: DEB, DFS and DTS.

=====  ===================  =====================  ==============================
kind   node dofs            interpolation          section law
=====  ===================  =====================  ==============================
DEB    u, w, w_x            linear u, Hermite w    A11/B11/D11 about y = 0
DFS    u, w, theta          linear u, w, theta     A11/B11/D11 + 5/6 * b int G dy
DTS    u, w, w_x, theta     linear u, theta,       Dn and Ds_hat
                            Hermite w
=====  ===================  =====================  ==============================

DFS is fully integrated on purpose: it locks on coarse meshes, which is the
behaviour of the comparison baseline.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidCase
from .section import SectionConstants

__all__ = [
    "ElementKind",
    "StiffnessElement",
    "shape_rows",
    "build_deb",
    "build_dfs",
    "build_dts",
    "build_element",
    "SHEAR_CORRECTION",
]

SHEAR_CORRECTION = 5.0 / 6.0


class ElementKind(str, enum.Enum):
    DEB = "deb"
    DFS = "dfs"
    DTS = "dts"
    PFTS = "pfts"
    PFTS_T = "pfts_t"

    @classmethod
    def parse(cls, value) -> "ElementKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            raise InvalidCase(f"unknown element kind {value!r}") from None

    @property
    def force_based(self) -> bool:
        return self in (ElementKind.PFTS, ElementKind.PFTS_T)


NODE_DOFS = {
    ElementKind.DEB: ("u", "w", "w_x"),
    ElementKind.DFS: ("u", "w", "theta"),
    ElementKind.DTS: ("u", "w", "w_x", "theta"),
}


@dataclass(frozen=True)
class StiffnessElement:
    kind: ElementKind
    L: float
    K: np.ndarray
    f_ext: np.ndarray
    node_dofs: tuple

    @property
    def ndof(self) -> int:
        return len(self.node_dofs)


def shape_rows(kind: ElementKind, L: float, xi) -> dict:
    """Interpolation rows at local coordinate ``xi`` in [0, 1].

    Returns arrays of shape ``xi.shape + (2 * ndof,)`` for every field the
    kind carries: ``u, du, w, dw, d2w, d3w, th, dth``.
    """
    kind = ElementKind.parse(kind)
    xi = np.asarray(xi, dtype=float)
    names = NODE_DOFS[kind]
    nd = len(names)
    z = np.zeros(xi.shape + (2 * nd,))

    def put(rows, dof, vals_a, vals_b):
        i = names.index(dof)
        rows[..., i] = vals_a
        rows[..., nd + i] = vals_b

    out = {k: z.copy() for k in ("u", "du", "w", "dw", "d2w", "d3w", "th", "dth")}
    lin = (1.0 - xi, xi)
    dlin = (np.full_like(xi, -1.0 / L), np.full_like(xi, 1.0 / L))
    put(out["u"], "u", *lin)
    put(out["du"], "u", *dlin)
    if "w_x" in names:
        # cubic Hermite on (w_a, w_x,a, w_b, w_x,b)
        H = [1 - 3 * xi**2 + 2 * xi**3, L * (xi - 2 * xi**2 + xi**3), 3 * xi**2 - 2 * xi**3, L * (xi**3 - xi**2)]
        dH = [(-6 * xi + 6 * xi**2) / L, 1 - 4 * xi + 3 * xi**2, (6 * xi - 6 * xi**2) / L, 3 * xi**2 - 2 * xi]
        d2H = [(-6 + 12 * xi) / L**2, (-4 + 6 * xi) / L, (6 - 12 * xi) / L**2, (6 * xi - 2) / L]
        d3H = [np.full_like(xi, 12 / L**3), np.full_like(xi, 6 / L**2), np.full_like(xi, -12 / L**3), np.full_like(xi, 6 / L**2)]
        for key, vals in (("w", H), ("dw", dH), ("d2w", d2H), ("d3w", d3H)):
            put(out[key], "w", vals[0], vals[2])
            put(out[key], "w_x", vals[1], vals[3])
    else:
        put(out["w"], "w", *lin)
        put(out["dw"], "w", *dlin)
    if "theta" in names:
        put(out["th"], "theta", *lin)
        put(out["dth"], "theta", *dlin)
    elif kind is ElementKind.DEB:
        # Euler kinematics: the section rotation is the slope
        out["th"] = out["dw"].copy()
        out["dth"] = out["d2w"].copy()
    return out


def _gauss(n, L):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * L * w


def _load_vector(kind, L, q0, load_vector):
    nd = len(NODE_DOFS[kind])
    f = np.zeros(2 * nd)
    if q0 == 0.0:
        return f
    if load_vector == "lumped":
        i = NODE_DOFS[kind].index("w")
        f[i] = f[nd + i] = 0.5 * q0 * L
        return f
    if load_vector != "consistent":
        raise ValueError(f"load_vector must be 'lumped' or 'consistent', got {load_vector!r}")
    xi, wt = _gauss(4, L)
    rows = shape_rows(kind, L, xi)["w"]
    return q0 * wt @ rows


def build_deb(section: SectionConstants, L: float, q0: float = 0.0, load_vector: str = "lumped") -> StiffnessElement:
    """Euler-Bernoulli frame element with axial-bending coupling ``B11``."""
    kind = ElementKind.DEB
    xi, wt = _gauss(2, L)
    r = shape_rows(kind, L, xi)
    B = np.stack([r["du"], -r["d2w"]], axis=1)  # (ng, 2, 6)
    D = np.array([[section.A11, section.B11], [section.B11, section.D11]])
    K = np.einsum("g,gia,ij,gjb->ab", wt, B, D, B)
    return StiffnessElement(kind, L, 0.5 * (K + K.T), _load_vector(kind, L, q0, load_vector), NODE_DOFS[kind])


def build_dfs(
    section: SectionConstants, L: float, q0: float = 0.0, load_vector: str = "lumped", kappa: float = SHEAR_CORRECTION
) -> StiffnessElement:
    """Linear first-order shear element, full (2-point) integration."""
    kind = ElementKind.DFS
    xi, wt = _gauss(2, L)
    r = shape_rows(kind, L, xi)
    B = np.stack([r["du"], -r["dth"]], axis=1)
    D = np.array([[section.A11, section.B11], [section.B11, section.D11]])
    K = np.einsum("g,gia,ij,gjb->ab", wt, B, D, B)
    gam = r["dw"] - r["th"]
    K += kappa * section.GA * np.einsum("g,ga,gb->ab", wt, gam, gam)
    return StiffnessElement(kind, L, 0.5 * (K + K.T), _load_vector(kind, L, q0, load_vector), NODE_DOFS[kind])


def build_dts(section: SectionConstants, L: float, q0: float = 0.0, load_vector: str = "lumped") -> StiffnessElement:
    """Traditional third-order element: ``Dn`` for bending, ``Ds_hat`` for shear."""
    kind = ElementKind.DTS
    xi, wt = _gauss(4, L)
    r = shape_rows(kind, L, xi)
    B = np.stack([r["du"], -r["d2w"], -r["dth"]], axis=1)
    K = np.einsum("g,gia,ij,gjb->ab", wt, B, section.Dn, B)
    gam = r["dw"] - r["th"]
    K += section.Ds_hat * np.einsum("g,ga,gb->ab", wt, gam, gam)
    return StiffnessElement(kind, L, 0.5 * (K + K.T), _load_vector(kind, L, q0, load_vector), NODE_DOFS[kind])


_BUILDERS = {ElementKind.DEB: build_deb, ElementKind.DFS: build_dfs, ElementKind.DTS: build_dts}


def build_element(kind, section: SectionConstants, L: float, q0: float = 0.0, load_vector: str = "lumped"):
    kind = ElementKind.parse(kind)
    if kind.force_based:
        raise InvalidCase(f"{kind.value} is force based; use fgbeam.pfts")
    return _BUILDERS[kind](section, L, q0, load_vector=load_vector)
