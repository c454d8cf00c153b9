"""Batched bilinear-quadrilateral kernels with numba and numpy back ends.

Both back ends compute the same thing; the numba one is used when numba
imports and ``FGBEAM_NO_NUMBA`` is not set to ``1``.  Element node order is
counter-clockwise: ``(-1,-1), (1,-1), (1,1), (-1,1)`` in ``(xi, eta)``.
"""
from __future__ import annotations

import os

import numpy as np

__all__ = [
    "BACKEND",
    "element_stiffness_batch",
    "centroid_stress_batch",
    "stiffness_numpy",
    "centroid_stress_numpy",
    "stiffness_numba",
    "centroid_stress_numba",
    "numba_available",
]

_XI = np.array([-1.0, 1.0, 1.0, -1.0])
_ETA = np.array([-1.0, -1.0, 1.0, 1.0])
_G = 1.0 / np.sqrt(3.0)
_GAUSS = np.array([[-_G, -_G], [_G, -_G], [_G, _G], [-_G, _G]])


def plane_stress_matrix(nu: float) -> np.ndarray:
    """Plane-stress elasticity matrix per unit Young's modulus."""
    return np.array([[1.0, nu, 0.0], [nu, 1.0, 0.0], [0.0, 0.0, 0.5 * (1.0 - nu)]]) / (1.0 - nu * nu)


# -- numpy ---------------------------------------------------------------------


def _b_matrices(xy, xi, eta):
    """Strain-displacement matrices ``(ne, 3, 8)`` and ``det J`` at one point."""
    dxi = 0.25 * _XI * (1.0 + eta * _ETA)
    deta = 0.25 * _ETA * (1.0 + xi * _XI)
    J = np.stack([dxi @ xy, deta @ xy], axis=1)  # (ne, 2, 2)
    det = J[:, 0, 0] * J[:, 1, 1] - J[:, 0, 1] * J[:, 1, 0]
    if np.any(det <= 0.0):
        raise ValueError("non-positive Jacobian: element is inverted or degenerate")
    dNx = (J[:, 1, 1, None] * dxi - J[:, 0, 1, None] * deta) / det[:, None]
    dNy = (-J[:, 1, 0, None] * dxi + J[:, 0, 0, None] * deta) / det[:, None]
    B = np.zeros((xy.shape[0], 3, 8))
    B[:, 0, 0::2] = dNx
    B[:, 1, 1::2] = dNy
    B[:, 2, 0::2] = dNy
    B[:, 2, 1::2] = dNx
    return B, det


def stiffness_numpy(xy, E, nu, thickness):
    """Element stiffness matrices, shape ``(ne, 8, 8)``, 2x2 Gauss."""
    xy = np.ascontiguousarray(xy, dtype=float)
    D = plane_stress_matrix(nu)
    K = np.zeros((xy.shape[0], 8, 8))
    for xi, eta in _GAUSS:
        B, det = _b_matrices(xy, xi, eta)
        K += np.einsum("eia,ij,ejb->eab", B, D, B) * (E * det * thickness)[:, None, None]
    return K


def centroid_stress_numpy(xy, E, nu, ue):
    """``(sigma_x, sigma_y, tau_xy)`` at each element centre, shape ``(ne, 3)``."""
    B, _ = _b_matrices(np.ascontiguousarray(xy, dtype=float), 0.0, 0.0)
    eps = np.einsum("eia,ea->ei", B, ue)
    return E[:, None] * (eps @ plane_stress_matrix(nu).T)


# -- numba ---------------------------------------------------------------------

try:
    import numba

    numba_available = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_available = False


if numba_available:

    @numba.njit(cache=True)
    def _b_point(x, y, xi, eta, B):
        dxi = np.empty(4)
        deta = np.empty(4)
        for a in range(4):
            dxi[a] = 0.25 * _XI[a] * (1.0 + eta * _ETA[a])
            deta[a] = 0.25 * _ETA[a] * (1.0 + xi * _XI[a])
        j00 = j01 = j10 = j11 = 0.0
        for a in range(4):
            j00 += dxi[a] * x[a]
            j01 += dxi[a] * y[a]
            j10 += deta[a] * x[a]
            j11 += deta[a] * y[a]
        det = j00 * j11 - j01 * j10
        B[:, :] = 0.0
        for a in range(4):
            nx = (j11 * dxi[a] - j01 * deta[a]) / det
            ny = (-j10 * dxi[a] + j00 * deta[a]) / det
            B[0, 2 * a] = nx
            B[1, 2 * a + 1] = ny
            B[2, 2 * a] = ny
            B[2, 2 * a + 1] = nx
        return det

    @numba.njit(cache=True)
    def _stiffness_loop(xy, E, D, thickness, gauss):
        ne = xy.shape[0]
        K = np.zeros((ne, 8, 8))
        B = np.empty((3, 8))
        DB = np.empty((3, 8))
        for e in range(ne):
            x = xy[e, :, 0]
            y = xy[e, :, 1]
            for g in range(gauss.shape[0]):
                det = _b_point(x, y, gauss[g, 0], gauss[g, 1], B)
                if det <= 0.0:
                    raise ValueError("non-positive Jacobian")
                s = E[e] * det * thickness
                for i in range(3):
                    for b in range(8):
                        acc = 0.0
                        for j in range(3):
                            acc += D[i, j] * B[j, b]
                        DB[i, b] = acc
                for a in range(8):
                    for b in range(8):
                        acc = 0.0
                        for i in range(3):
                            acc += B[i, a] * DB[i, b]
                        K[e, a, b] += s * acc
        return K

    @numba.njit(cache=True)
    def _centroid_loop(xy, E, D, ue):
        ne = xy.shape[0]
        out = np.empty((ne, 3))
        B = np.empty((3, 8))
        eps = np.empty(3)
        for e in range(ne):
            _b_point(xy[e, :, 0], xy[e, :, 1], 0.0, 0.0, B)
            for i in range(3):
                acc = 0.0
                for a in range(8):
                    acc += B[i, a] * ue[e, a]
                eps[i] = acc
            for i in range(3):
                acc = 0.0
                for j in range(3):
                    acc += D[i, j] * eps[j]
                out[e, i] = E[e] * acc
        return out

    def stiffness_numba(xy, E, nu, thickness):
        xy = np.ascontiguousarray(xy, dtype=np.float64)
        return _stiffness_loop(xy, np.ascontiguousarray(E, dtype=np.float64), plane_stress_matrix(nu), float(thickness), _GAUSS)

    def centroid_stress_numba(xy, E, nu, ue):
        return _centroid_loop(
            np.ascontiguousarray(xy, dtype=np.float64),
            np.ascontiguousarray(E, dtype=np.float64),
            plane_stress_matrix(nu),
            np.ascontiguousarray(ue, dtype=np.float64),
        )

else:  # pragma: no cover
    stiffness_numba = stiffness_numpy
    centroid_stress_numba = centroid_stress_numpy


def _select_backend() -> str:
    if os.environ.get("FGBEAM_NO_NUMBA", "").strip() == "1" or not numba_available:
        return "numpy"
    return "numba"


BACKEND = _select_backend()

if BACKEND == "numba":
    element_stiffness_batch = stiffness_numba
    centroid_stress_batch = centroid_stress_numba
else:
    element_stiffness_batch = stiffness_numpy
    centroid_stress_batch = centroid_stress_numpy
