"""Plane-stress Q4 reference solver for beam-like rectangles.

The beam occupies ``[0, L] x [-h/2, h/2]`` with ``y`` along the load, as in
the beam models.  Material moduli are sampled at element centroids.

Stress profiles use centroid values (where the bilinear element is free of
parasitic bending shear) interpolated linearly in ``x`` between the two
nearest element columns; the surface values are extrapolated linearly from
the two outermost element rows.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import _kernels
from .assembly import BoundaryCase
from .errors import SingularSystem, TooCloseToBoundary
from .material import FGMaterial, youngs_modulus
from .recovery import StressProfile

__all__ = ["PlaneMesh", "PlaneModel", "PlaneSolution", "structured_mesh", "solve_plane", "stress_profile"]


@dataclass(frozen=True)
class PlaneMesh:
    """Structured ``m_x x m_y`` grid; node ``(i, j)`` has id ``j (m_x + 1) + i``."""

    mx: int
    my: int
    nodes: np.ndarray  # (nn, 2)
    conn: np.ndarray  # (ne, 4), counter-clockwise
    E: np.ndarray  # (ne,)
    nu: float
    thickness: float

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def n_elements(self) -> int:
        return self.conn.shape[0]

    def node_id(self, i, j):
        return np.asarray(j) * (self.mx + 1) + np.asarray(i)

    @property
    def x_lines(self) -> np.ndarray:
        return self.nodes[: self.mx + 1, 0]

    @property
    def y_lines(self) -> np.ndarray:
        return self.nodes[:: self.mx + 1, 1]

    def element_xy(self) -> np.ndarray:
        return self.nodes[self.conn]


def structured_mesh(material: FGMaterial, length: float, width: float, mx: int, my: int) -> PlaneMesh:
    if mx < 1 or my < 1:
        raise ValueError("mesh counts must be positive")
    xs = np.linspace(0.0, length, mx + 1)
    ys = np.linspace(material.breakpoints[0], material.breakpoints[-1], my + 1)
    X, Y = np.meshgrid(xs, ys)
    nodes = np.column_stack([X.ravel(), Y.ravel()])
    I, J = np.meshgrid(np.arange(mx), np.arange(my))
    I, J = I.ravel(), J.ravel()
    n0 = J * (mx + 1) + I
    conn = np.column_stack([n0, n0 + 1, n0 + mx + 2, n0 + mx + 1])
    yc = 0.5 * (ys[J] + ys[J + 1])
    E = np.asarray(youngs_modulus(material, yc), dtype=float)
    return PlaneMesh(mx, my, nodes, conn, E, material.nu, float(width))


@dataclass(frozen=True)
class PlaneModel:
    """Loads and supports of the plane model.

    ``tip_load`` is spread over the ``x = L`` edge, ``q0`` (per unit length)
    over the ``y = -h/2`` edge; both act along ``+y``.
    """

    material: FGMaterial
    length: float
    width: float
    mx: int
    my: int
    boundary: BoundaryCase
    tip_load: float = 0.0
    q0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "boundary", BoundaryCase.parse(self.boundary))

    @cached_property
    def mesh(self) -> PlaneMesh:
        return structured_mesh(self.material, self.length, self.width, self.mx, self.my)


def _edge_weights(coords):
    """Consistent nodal weights of a uniform traction on a straight edge."""
    seg = np.diff(coords)
    w = np.zeros(coords.size)
    w[:-1] += 0.5 * seg
    w[1:] += 0.5 * seg
    return w


def _constrained_dofs(mesh: PlaneMesh, case: BoundaryCase) -> np.ndarray:
    js = np.arange(mesh.my + 1)
    left = mesh.node_id(0, js)
    right = mesh.node_id(mesh.mx, js)
    if case is BoundaryCase.CF:
        nodes = left
        return np.sort(np.concatenate([2 * nodes, 2 * nodes + 1]))
    if case is BoundaryCase.CC:
        nodes = np.concatenate([left, right])
        return np.sort(np.concatenate([2 * nodes, 2 * nodes + 1]))
    # pin at the x = 0 corner of the y = +h/2 face, roller at the x = L corner
    a = int(mesh.node_id(0, mesh.my))
    c = int(mesh.node_id(mesh.mx, mesh.my))
    return np.array([2 * a, 2 * a + 1, 2 * c + 1])


def assemble_plane(model: PlaneModel):
    """Global stiffness (CSR) and load vector."""
    mesh = model.mesh
    ke = _kernels.element_stiffness_batch(mesh.element_xy(), mesh.E, mesh.nu, mesh.thickness)
    dofs = np.stack([2 * mesh.conn, 2 * mesh.conn + 1], axis=2).reshape(-1, 8)
    rows = np.repeat(dofs, 8, axis=1).ravel()
    cols = np.tile(dofs, (1, 8)).ravel()
    n = 2 * mesh.n_nodes
    K = sp.csr_matrix((ke.ravel(), (rows, cols)), shape=(n, n))
    F = np.zeros(n)
    if model.tip_load:
        js = np.arange(mesh.my + 1)
        w = _edge_weights(mesh.y_lines)
        F[2 * mesh.node_id(mesh.mx, js) + 1] += model.tip_load * w / w.sum()
    if model.q0:
        i = np.arange(mesh.mx + 1)
        F[2 * mesh.node_id(i, 0) + 1] += model.q0 * _edge_weights(mesh.x_lines)
    return K, F


@dataclass
class PlaneSolution:
    model: PlaneModel
    u: np.ndarray  # (nn, 2)
    reactions: np.ndarray  # (nn, 2), zero at free dofs
    external_work: float
    strain_energy: float

    @property
    def mesh(self) -> PlaneMesh:
        return self.model.mesh

    def _mid_height_node(self, i):
        mesh = self.mesh
        j = mesh.my // 2
        if mesh.my % 2:
            ids = mesh.node_id(i, [j, j + 1])
            return float(self.u[ids, 1].mean())
        return float(self.u[mesh.node_id(i, j), 1])

    @property
    def tip_w(self) -> float:
        """Vertical displacement at mid-height of the ``x = L`` edge."""
        return self._mid_height_node(self.mesh.mx)

    @property
    def midspan_w(self) -> float:
        mx = self.mesh.mx
        if mx % 2 == 0:
            return self._mid_height_node(mx // 2)
        return 0.5 * (self._mid_height_node(mx // 2) + self._mid_height_node(mx // 2 + 1))

    @cached_property
    def centroid_stresses(self) -> np.ndarray:
        """``(sigma_x, sigma_y, tau_xy)`` per element, shape ``(my, mx, 3)``."""
        mesh = self.mesh
        ue = self.u[mesh.conn].reshape(mesh.n_elements, 8)
        s = _kernels.centroid_stress_batch(mesh.element_xy(), mesh.E, mesh.nu, ue)
        return s.reshape(mesh.my, mesh.mx, 3)


def _check_supports(mesh: PlaneMesh, fixed) -> None:
    """Raise unless the supports remove both translations and the rotation.

    SuperLU does not reliably flag the rank deficiency of an unsupported
    model, so it is checked here up front.
    """
    x, y = mesh.nodes[:, 0] - mesh.nodes[:, 0].mean(), mesh.nodes[:, 1]
    rigid = np.zeros((2 * mesh.n_nodes, 3))
    rigid[0::2, 0] = 1.0
    rigid[1::2, 1] = 1.0
    rigid[0::2, 2], rigid[1::2, 2] = -y, x
    if np.linalg.matrix_rank(rigid[np.asarray(fixed, dtype=int)], tol=1e-9 * np.abs(rigid).max()) < 3:
        raise SingularSystem("the supports leave a rigid-body motion unrestrained")


def solve_plane(model: PlaneModel) -> PlaneSolution:
    """Assemble and solve the plane model with a sparse direct solver."""
    K, F = assemble_plane(model)
    n = F.size
    fixed = _constrained_dofs(model.mesh, model.boundary)
    _check_supports(model.mesh, fixed)
    free = np.setdiff1d(np.arange(n), fixed)
    Kff = K[free][:, free].tocsc()
    u = np.zeros(n)
    with warnings.catch_warnings():
        warnings.simplefilter("error", spla.MatrixRankWarning)
        try:
            u[free] = spla.spsolve(Kff, F[free])
        except (spla.MatrixRankWarning, RuntimeError) as exc:
            raise SingularSystem(f"plane stiffness is singular: {exc}") from None
    if not np.all(np.isfinite(u)):
        raise SingularSystem("plane solution is not finite")
    R = K @ u - F
    R[free] = 0.0
    work = 0.5 * float(F @ u)
    energy = 0.5 * float(u @ (K @ u))
    return PlaneSolution(model, u.reshape(-1, 2), R.reshape(-1, 2), work, energy)


def stress_profile(solution: PlaneSolution, x: float) -> StressProfile:
    """``sigma_x`` and ``tau_xy`` on the vertical line at ``x``.

    Warns :class:`TooCloseToBoundary` when ``x`` lies within one element
    column of either end, where supports and end loads disturb the field.
    """
    mesh = solution.mesh
    L = solution.model.length
    if not 0.0 <= x <= L:
        raise ValueError(f"x = {x:g} outside [0, {L:g}]")
    dx = L / mesh.mx
    if x < dx or x > L - dx:
        warnings.warn(
            f"x = {x:g} is within one element column of a beam end; the plane field there is not beam-like",
            TooCloseToBoundary,
            stacklevel=2,
        )
    xc = 0.5 * (mesh.x_lines[:-1] + mesh.x_lines[1:])
    s = solution.centroid_stresses
    if mesh.mx == 1:
        col = s[:, 0, :]
    else:
        k = int(np.clip(np.searchsorted(xc, x) - 1, 0, mesh.mx - 2))
        r = np.clip((x - xc[k]) / (xc[k + 1] - xc[k]), 0.0, 1.0)
        col = (1.0 - r) * s[:, k, :] + r * s[:, k + 1, :]
    yl = mesh.y_lines
    yc = 0.5 * (yl[:-1] + yl[1:])
    ys = np.concatenate([[yl[0]], yc, [yl[-1]]])

    def with_faces(v):
        if mesh.my == 1:
            return np.concatenate([[v[0]], v, [v[0]]])
        lo = v[0] + (yl[0] - yc[0]) * (v[1] - v[0]) / (yc[1] - yc[0])
        hi = v[-1] + (yl[-1] - yc[-1]) * (v[-1] - v[-2]) / (yc[-1] - yc[-2])
        return np.concatenate([[lo], v, [hi]])

    return StressProfile(float(x), ys, with_faces(col[:, 0]), with_faces(col[:, 2]), "q4", mesh.thickness, "plane")
