"""Global assembly and solution for meshes of uniform beam elements."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .classic import NODE_DOFS, SHEAR_CORRECTION, ElementKind, build_element, shape_rows
from .conventions import DOF_NAMES
from .errors import InvalidCase, SingularSystem
from .pfts import (
    ForceFieldBasis,
    LoadCase,
    _equilibrate,
    _lu_solve,
    backward_error,
    compatibility_rows,
    displacement_shapes,
)
from .section import SectionConstants, SectionGeometry

__all__ = [
    "BoundaryCase",
    "BeamModel",
    "GlobalSystem",
    "Solution",
    "assemble_force_based",
    "assemble_displacement_based",
    "apply_boundary",
    "solve",
]

DENSE_LIMIT = 2000


class BoundaryCase(str, enum.Enum):
    """Clamped-free, simply supported, clamped-clamped."""

    CF = "CF"
    SS = "SS"
    CC = "CC"

    @classmethod
    def parse(cls, value) -> "BoundaryCase":
        if isinstance(value, cls):
            return value
        key = str(value).strip().upper().replace("-", "")
        try:
            return cls(key)
        except ValueError:
            raise InvalidCase(f"unknown boundary case {value!r}; expected CF, SS or CC") from None

    def constrained(self, n_nodes: int) -> list[tuple[int, str]]:
        """``(node, dof name)`` pairs held at zero."""
        last = n_nodes - 1
        if self is BoundaryCase.CF:
            return [(0, d) for d in DOF_NAMES]
        if self is BoundaryCase.CC:
            return [(0, d) for d in DOF_NAMES] + [(last, d) for d in DOF_NAMES]
        # pin at x = 0, roller at x = L
        return [(0, "u"), (0, "w"), (last, "w")]


@dataclass(frozen=True)
class BeamModel:
    """A straight beam meshed with ``n_elements`` equal elements."""

    length: float
    n_elements: int
    geometry: SectionGeometry
    constants: SectionConstants
    kind: ElementKind
    load: LoadCase
    boundary: BoundaryCase
    load_vector: str = "lumped"

    def __post_init__(self):
        object.__setattr__(self, "kind", ElementKind.parse(self.kind))
        object.__setattr__(self, "boundary", BoundaryCase.parse(self.boundary))
        if int(self.n_elements) < 1 or int(self.n_elements) != self.n_elements:
            raise ValueError("n_elements must be a positive integer")
        object.__setattr__(self, "n_elements", int(self.n_elements))
        if not self.length > 0:
            raise ValueError("beam length must be positive")
        for node in self.load.nodal:
            if not 0 <= node <= self.n_elements:
                raise ValueError(f"nodal load on node {node} outside mesh")

    @property
    def n_nodes(self) -> int:
        return self.n_elements + 1

    @property
    def element_length(self) -> float:
        return self.length / self.n_elements

    @property
    def node_x(self) -> np.ndarray:
        return np.linspace(0.0, self.length, self.n_nodes)

    @property
    def element_constants(self) -> SectionConstants:
        """Constants seen by the element (PFTS-T swaps in ``Ds_hat``)."""
        if self.kind is ElementKind.PFTS_T:
            return self.constants.traditional()
        return self.constants

    def with_load(self, load: LoadCase) -> "BeamModel":
        from dataclasses import replace

        return replace(self, load=load)


@dataclass
class GlobalSystem:
    """Square system ``A z = rhs`` with bookkeeping of nodal rows."""

    A: object  # ndarray or sparse matrix
    rhs: np.ndarray
    dof_index: dict  # (node, name) -> row/column
    fixed: list = field(default_factory=list)
    original_rows: object = None
    original_rhs: np.ndarray | None = None

    @property
    def size(self) -> int:
        return self.A.shape[0]


# -- force based ---------------------------------------------------------------


def assemble_force_based(model: BeamModel) -> GlobalSystem:
    """Unknowns ``[phi_0 .. phi_n, beta_1 .. beta_n]``; size ``4(n+1) + 5n``."""
    if not model.kind.force_based:
        raise InvalidCase(f"{model.kind.value} is not a force-based element")
    n = model.n_elements
    nn = model.n_nodes
    size = 4 * nn + 5 * n
    basis = ForceFieldBasis(model.element_constants, model.element_length)
    q0 = model.load.q0
    P0, F0 = basis.end_forces(0.0)
    PL, FL = basis.end_forces(basis.L)
    Na, Nb, Nbeta, UL = compatibility_rows(basis)

    use_sparse = size > DENSE_LIMIT
    A = sp.lil_matrix((size, size)) if use_sparse else np.zeros((size, size))
    rhs = np.zeros(size)
    for i in range(nn):
        rhs[4 * i : 4 * i + 4] = model.load.nodal_vector(i)
    for e in range(n):
        a, b = 4 * e, 4 * (e + 1)
        c = 4 * nn + 5 * e
        # equilibrium: S(L)_left - S(0)_right = applied
        A[a : a + 4, c : c + 5] = -P0
        rhs[a : a + 4] += q0 * F0
        A[b : b + 4, c : c + 5] = PL
        rhs[b : b + 4] -= q0 * FL
        # compatibility
        A[c : c + 5, a : a + 4] = Na
        A[c : c + 5, b : b + 4] = Nb
        A[c : c + 5, c : c + 5] = Nbeta
        rhs[c : c + 5] = -q0 * UL
    if use_sparse:
        A = A.tocsr()
    index = {(i, d): 4 * i + k for i in range(nn) for k, d in enumerate(DOF_NAMES)}
    return GlobalSystem(A, rhs, index)


# -- displacement based --------------------------------------------------------


def assemble_displacement_based(model: BeamModel) -> GlobalSystem:
    """Standard stiffness assembly ``K d = f`` for DEB, DFS or DTS."""
    el = build_element(model.kind, model.constants, model.element_length, model.load.q0, model.load_vector)
    nd = el.ndof
    n = model.n_elements
    size = nd * model.n_nodes
    rows = (nd * np.arange(n))[:, None] + np.arange(2 * nd)[None, :]
    I = np.repeat(rows, 2 * nd, axis=1).ravel()
    J = np.tile(rows, (1, 2 * nd)).ravel()
    V = np.tile(el.K.ravel(), n)
    K = sp.csr_matrix((V, (I, J)), shape=(size, size))
    f = np.zeros(size)
    np.add.at(f, rows.ravel(), np.tile(el.f_ext, n))
    index = {(i, d): nd * i + k for i in range(model.n_nodes) for k, d in enumerate(el.node_dofs)}
    for node in model.load.nodal:
        px, py, m = model.load.nodal[node]
        f[index[(node, "u")]] += px
        f[index[(node, "w")]] += py
        rot = "theta" if (node, "theta") in index else "w_x"
        # M acts on the rotation; sign follows M_theta(L) = M at a right end
        f[index[(node, rot)]] -= m
    return GlobalSystem(K if size > DENSE_LIMIT else K.toarray(), f, index)


def apply_boundary(system: GlobalSystem, case) -> GlobalSystem:
    """Replace the equilibrium row of every constrained dof by ``dof = 0``.

    The replaced rows are kept in ``original_rows`` for reaction recovery.
    Constraints on dofs the element kind does not carry are skipped.
    """
    case = BoundaryCase.parse(case)
    n_nodes = 1 + max(node for node, _ in system.dof_index)
    fixed = [system.dof_index[k] for k in case.constrained(n_nodes) if k in system.dof_index]
    A = system.A.tolil(copy=True) if sp.issparse(system.A) else system.A.copy()
    rhs = system.rhs.copy()
    orig = system.A[fixed, :]
    orig = orig.toarray() if sp.issparse(orig) else orig.copy()
    orig_rhs = system.rhs[fixed].copy()
    for d in fixed:
        A[d, :] = 0.0
        A[d, d] = 1.0
        rhs[d] = 0.0
    if sp.issparse(A):
        A = A.tocsr()
    return GlobalSystem(A, rhs, system.dof_index, fixed, orig, orig_rhs)


def _solve_linear(A, rhs, rtol=1e-10):
    if not sp.issparse(A):
        return _lu_solve(A, rhs, rtol)
    r, c = _equilibrate(A)
    As = (sp.diags(r) @ A @ sp.diags(c)).tocsc()
    y = spla.spsolve(As, rhs * r)
    err = backward_error(As, y, rhs * r)
    if not np.all(np.isfinite(y)) or err > rtol:
        raise SingularSystem(f"relative residual {err:.3e} exceeds {rtol:g}")
    return c * y


# -- solution ------------------------------------------------------------------


class Solution:
    """Solved beam: nodal states, force parameters and field evaluators.

    ``nodes`` has one row per node with columns ``(u, w, w_x, theta)``.
    DEB reports ``theta = w_x``; DFS carries no slope dof (``w_x`` NaN).
    """

    def __init__(self, model: BeamModel, nodes, beta, reactions, residual):
        self.model = model
        self.nodes = nodes
        self.beta = beta
        self.reactions = reactions
        self.residual = residual

    @property
    def kind(self) -> ElementKind:
        return self.model.kind

    @cached_property
    def basis(self) -> ForceFieldBasis:
        return ForceFieldBasis(self.model.element_constants, self.model.element_length)

    @cached_property
    def shapes(self):
        return displacement_shapes(self.basis)

    def locate(self, x):
        """Element index and local coordinate for global ``x`` (array ok)."""
        xa = np.asarray(x, dtype=float)
        L = self.model.length
        if np.any(xa < -1e-9 * L) or np.any(xa > L * (1 + 1e-9)):
            raise ValueError(f"x outside beam [0, {L:g}]")
        le = self.model.element_length
        e = np.clip(np.floor(xa / le).astype(int), 0, self.model.n_elements - 1)
        return e, np.clip(xa - e * le, 0.0, le)

    # -- displacements -------------------------------------------------------
    def displacement(self, name: str, x):
        """Generalised displacement ``u``, ``w``, ``w_x``, ``theta`` (or ``w_s``) at ``x``."""
        e, xl = self.locate(x)
        if self.kind.force_based:
            coef = np.concatenate([self.beta[e], np.full(e.shape + (1,), self.model.load.q0)], axis=-1)
            fields = {"u": 0, "w": 1, "w_x": 2, "theta": 3, "w_s": 4}
            rows = self.shapes.at(xl)[..., fields[name], :]
            start = self.nodes[e]
            base = {
                "u": start[..., 0],
                "w": start[..., 1] + xl * start[..., 2],
                "w_x": start[..., 2],
                "theta": start[..., 3],
                "w_s": start[..., 1] + xl * start[..., 3],
            }[name]
            return base + np.sum(rows * coef, axis=-1)
        key = {"u": "u", "w": "w", "w_x": "dw", "theta": "th"}[name]
        rows = shape_rows(self.kind, self.model.element_length, xl / self.model.element_length)[key]
        return np.sum(rows * self._element_dofs(e), axis=-1)

    def _element_dofs(self, e):
        names = NODE_DOFS[self.kind]
        cols = [DOF_NAMES.index(d) for d in names]
        a = self.nodes[e][..., cols]
        b = self.nodes[e + 1][..., cols]
        return np.concatenate([a, b], axis=-1)

    # -- resultants ----------------------------------------------------------
    def resultants(self, x) -> dict:
        """Section resultants ``N, M_w, M_theta, Q_theta, M, Q`` at ``x``.

        Force-based kinds use the closed-form fields; displacement-based
        kinds use the section law on the interpolated strains, with ``Q``
        from the constitutive shear (DFS, DTS) or ``dM/dx`` (DEB).
        """
        e, xl = self.locate(x)
        if self.kind.force_based:
            coef = np.concatenate([self.beta[e], np.full(e.shape + (1,), self.model.load.q0)], axis=-1)
            b = self.basis
            return {
                name: np.sum(getattr(b, attr)(xl) * coef, axis=-1)
                for name, attr in (("N", "N"), ("M_w", "Mw"), ("M_theta", "Mth"), ("Q_theta", "Qth"), ("M", "M"), ("Q", "Q"))
            }
        return self._displacement_resultants(e, xl)

    def generalized_strains(self, x):
        """``(eps0, kappa_w, kappa_theta)`` at ``x`` along the last axis.

        The axial strain at height ``y`` is ``t(y) @ strains``.  DEB and DFS
        carry one curvature, reported in both slots.
        """
        if self.kind.force_based:
            r = self.resultants(x)
            sig = np.stack([r["N"], r["M_w"], r["M_theta"]], axis=-1)
            return sig @ self.model.element_constants.Fn.T
        e, xl = self.locate(x)
        val = self._interpolated(e, xl)
        if self.kind is ElementKind.DTS:
            return np.stack([val["du"], -val["d2w"], -val["dth"]], axis=-1)
        curv = -val["d2w"] if self.kind is ElementKind.DEB else -val["dth"]
        return np.stack([val["du"], curv, curv], axis=-1)

    def _interpolated(self, e, xl):
        le = self.model.element_length
        r = shape_rows(self.kind, le, xl / le)
        d = self._element_dofs(e)
        return {k: np.sum(r[k] * d, axis=-1) for k in r}

    def _displacement_resultants(self, e, xl):
        c = self.model.constants
        val = self._interpolated(e, xl)
        if self.kind is ElementKind.DTS:
            eps = np.stack([val["du"], -val["d2w"], -val["dth"]], axis=-1)
            sig = eps @ c.Dn.T
            Qth = c.Ds_hat * (val["dw"] - val["th"])
            dMw = -(c.Dn[1, 1] * val["d3w"])
            out = {"N": sig[..., 0], "M_w": sig[..., 1], "M_theta": sig[..., 2], "Q_theta": Qth}
            out["M"] = out["M_w"] + out["M_theta"]
            out["Q"] = dMw + Qth
            return out
        curv = -val["d2w"] if self.kind is ElementKind.DEB else -val["dth"]
        N = c.A11 * val["du"] + c.B11 * curv
        M = c.B11 * val["du"] + c.D11 * curv
        if self.kind is ElementKind.DEB:
            Q = -c.D11 * val["d3w"]
        else:
            Q = SHEAR_CORRECTION * c.GA * (val["dw"] - val["th"])
        return {"N": N, "M": M, "Q": Q}

    def tau_parameters(self, x):
        """``(M_w,x, M_theta,x)`` at ``x`` (force-based kinds only)."""
        if not self.kind.force_based:
            raise InvalidCase("tau parameters exist only for force-based elements")
        e, xl = self.locate(x)
        coef = np.concatenate([self.beta[e], np.full(e.shape + (1,), self.model.load.q0)], axis=-1)
        return np.stack([np.sum(self.basis.dMw(xl) * coef, -1), np.sum(self.basis.dMth(xl) * coef, -1)], -1)

    def shear_strain(self, x):
        """Transverse shear measure ``gamma0 = w_x - theta`` (displacement-based)."""
        if self.kind.force_based:
            return self.resultants(x)["Q_theta"] / self.model.element_constants.Ds
        if self.kind is ElementKind.DEB:
            return np.zeros_like(np.asarray(x, dtype=float))
        return self.displacement("w_x", x) - self.displacement("theta", x)

    # -- summary -------------------------------------------------------------
    @property
    def tip_w(self) -> float:
        return float(self.nodes[-1, 1])

    @property
    def midspan_w(self) -> float:
        return float(self.displacement("w", 0.5 * self.model.length))

    @property
    def reported_w(self) -> float:
        """Tip deflection for cantilevers, mid-span deflection otherwise."""
        return self.tip_w if self.model.boundary is BoundaryCase.CF else self.midspan_w


def solve(model: BeamModel) -> Solution:
    """Assemble, constrain and solve ``model``."""
    if model.kind.force_based:
        system = assemble_force_based(model)
    else:
        system = assemble_displacement_based(model)
    con = apply_boundary(system, model.boundary)
    sol = _solve_linear(con.A, con.rhs)
    res = backward_error(con.A, sol, con.rhs)

    inv = {v: k for k, v in system.dof_index.items()}
    reactions = {}
    for row, d in enumerate(con.fixed):
        node, name = inv[d]
        value = float(con.original_rows[row] @ sol - con.original_rhs[row])
        if not model.kind.force_based and name in ("w_x", "theta"):
            # stiffness rows are conjugate to the rotation; nodal moments to its negative
            value = -value
        reactions[(node, name)] = value

    nodes = np.full((model.n_nodes, 4), np.nan)
    for (node, name), idx in system.dof_index.items():
        nodes[node, DOF_NAMES.index(name)] = sol[idx]
    beta = None
    if model.kind.force_based:
        beta = sol[4 * model.n_nodes :].reshape(model.n_elements, 5)
    elif model.kind is ElementKind.DEB:
        nodes[:, 3] = nodes[:, 2]
    return Solution(model, nodes, beta, reactions, res)


def make_model(
    material,
    kind,
    boundary,
    n_elements: int,
    length: float | None = None,
    width: float | None = None,
    q0: float | None = None,
    tip_load: float | None = None,
    quad=None,
    load_vector: str = "lumped",
) -> BeamModel:
    """Benchmark-style model: cantilever tip load or uniform load on a supported beam."""
    from . import conventions as cv
    from .section import QuadratureSpec, compute_constants

    boundary = BoundaryCase.parse(boundary)
    width = cv.WIDTH if width is None else width
    geom = SectionGeometry(width, material)
    consts = compute_constants(geom, quad or QuadratureSpec())
    if boundary is BoundaryCase.CF:
        length = cv.CANTILEVER_LENGTH if length is None else length
        P = cv.TIP_LOAD if tip_load is None else tip_load
        load = LoadCase(0.0 if q0 is None else q0, {n_elements: (0.0, P, 0.0)} if P else {})
    else:
        length = cv.SUPPORTED_LENGTH if length is None else length
        load = LoadCase(cv.UNIFORM_LOAD if q0 is None else q0, {n_elements: (0.0, tip_load, 0.0)} if tip_load else {})
    return BeamModel(length, n_elements, geom, consts, ElementKind.parse(kind), load, boundary, load_vector)
