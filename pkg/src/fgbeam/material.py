"""Power-law graded material models through the beam thickness."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidModel, OutOfThickness

__all__ = [
    "FGKind",
    "FGMaterial",
    "volume_fraction",
    "youngs_modulus",
    "shear_modulus",
]


class FGKind(str, enum.Enum):
    """Material distribution models.

    ``A`` grades the whole thickness; ``B`` is a sandwich with graded faces
    and a ceramic core; ``C`` has a graded core between a metal bottom face
    and a ceramic top face.
    """

    A = "A"
    B = "B"
    C = "C"

    @classmethod
    def parse(cls, value: "str | FGKind") -> "FGKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().upper()
        if key.startswith("TYPE"):
            key = key[4:].strip("_ ")
        try:
            return cls(key)
        except ValueError:
            raise InvalidModel(f"unknown material kind {value!r}; expected A, B or C") from None


_N_BREAKPOINTS = {FGKind.A: 2, FGKind.B: 4, FGKind.C: 4}


@dataclass(frozen=True)
class FGMaterial:
    """Two-phase graded material.

    Parameters
    ----------
    kind : FGKind
        Distribution model.
    E_m, E_c : float
        Young's moduli of the metal and ceramic phases (N/mm^2).
    nu : float
        Poisson ratio, shared by both phases.
    p : float
        Power-law index; ``p = 0`` makes every graded branch fully ceramic.
    breakpoints : tuple of float
        Layer boundaries ``h_0 < h_1 (< h_2 < h_3)``, first and last being
        the bottom and top surfaces (mm).
    """

    kind: FGKind
    E_m: float
    E_c: float
    nu: float
    p: float
    breakpoints: tuple

    def __post_init__(self):
        object.__setattr__(self, "kind", FGKind.parse(self.kind))
        bps = tuple(float(v) for v in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if len(bps) != _N_BREAKPOINTS[self.kind]:
            raise InvalidModel(
                f"Type {self.kind.value} needs {_N_BREAKPOINTS[self.kind]} breakpoints, got {len(bps)}"
            )
        if any(b >= a for a, b in zip(bps[1:], bps[:-1])):
            raise InvalidModel(f"breakpoints must be strictly increasing: {bps}")
        if not abs(bps[0] + bps[-1]) <= 1e-9 * (bps[-1] - bps[0]):
            raise InvalidModel("breakpoints must be symmetric about the mid-plane (h_0 = -h/2)")
        if not (self.E_m > 0 and self.E_c > 0):
            raise InvalidModel("moduli must be positive")
        if not 0.0 <= self.nu < 0.5:
            raise InvalidModel(f"Poisson ratio {self.nu} outside [0, 0.5)")
        if not self.p >= 0.0:
            raise InvalidModel(f"power-law index must be >= 0, got {self.p}")

    @property
    def height(self) -> float:
        return self.breakpoints[-1] - self.breakpoints[0]

    @property
    def layers(self) -> list[tuple[float, float]]:
        """Sub-intervals on which the modulus is smooth."""
        bps = self.breakpoints
        return list(zip(bps[:-1], bps[1:]))

    def layer_law(self, i: int) -> tuple[str, float, float]:
        """Volume-fraction law of layer ``i`` as ``(law, origin, span)``.

        ``law`` is ``"const0"``, ``"const1"`` or ``"power"``.  For a power
        layer ``V_c = ((y - origin) / span) ** p``; ``span`` is negative for
        the top face of Type B, which grades downward from the surface.
        """
        h = self.breakpoints
        if self.kind is FGKind.A:
            return ("power", h[0], h[1] - h[0])
        if self.kind is FGKind.B:
            return [("power", h[0], h[1] - h[0]), ("const1", 0.0, 1.0), ("power", h[3], h[2] - h[3])][i]
        return [("const0", 0.0, 1.0), ("power", h[1], h[2] - h[1]), ("const1", 0.0, 1.0)][i]

    def layer_index(self, y):
        """Layer containing ``y``; interior breakpoints go to the upper layer."""
        idx = np.searchsorted(np.asarray(self.breakpoints[1:-1]), y, side="right")
        return idx


def _check_range(mat: FGMaterial, y: np.ndarray) -> np.ndarray:
    tol = 1e-9 * mat.height
    lo, hi = mat.breakpoints[0], mat.breakpoints[-1]
    if np.any(y < lo - tol) or np.any(y > hi + tol):
        bad = y[(y < lo - tol) | (y > hi + tol)]
        raise OutOfThickness(f"y = {bad.ravel()[0]:g} outside section [{lo:g}, {hi:g}]")
    return np.clip(y, lo, hi)


def _power(s, p):
    # 0**0 is taken as 1 so that p = 0 means a fully ceramic graded branch
    if p == 0.0:
        return np.ones_like(s)
    return np.clip(s, 0.0, 1.0) ** p


def volume_fraction(mat: FGMaterial, y, layer=None):
    """Ceramic volume fraction ``V_c(y)``; scalar in, scalar out.

    ``layer`` forces the layer law used at each point, which matters only at
    an interface where ``V_c`` jumps (e.g. Type C with ``p = 0``).
    """
    ya = _check_range(mat, np.asarray(y, dtype=float))
    idx = mat.layer_index(ya) if layer is None else np.broadcast_to(np.asarray(layer), ya.shape)
    out = np.empty_like(ya)
    for i in range(len(mat.layers)):
        sel = idx == i
        if not np.any(sel):
            continue
        law, origin, span = mat.layer_law(i)
        if law == "const0":
            out[sel] = 0.0
        elif law == "const1":
            out[sel] = 1.0
        else:
            out[sel] = _power((ya[sel] - origin) / span, mat.p)
    return out if out.ndim else float(out)


def youngs_modulus(mat: FGMaterial, y, layer=None):
    """``E(y) = E_m + (E_c - E_m) V_c(y)``."""
    return mat.E_m + (mat.E_c - mat.E_m) * volume_fraction(mat, y, layer)


def shear_modulus(mat: FGMaterial, y, layer=None):
    """``G(y) = E(y) / (2 (1 + nu))``."""
    return youngs_modulus(mat, y, layer) / (2.0 * (1.0 + mat.nu))


def benchmark_material(kind, p: float) -> FGMaterial:
    """The alumina/aluminium beam of the benchmark problems."""
    from . import conventions as cv

    kind = FGKind.parse(kind)
    bps = cv.ISOTROPIC_BREAKPOINTS if kind is FGKind.A else cv.SANDWICH_BREAKPOINTS
    return FGMaterial(kind, cv.E_METAL, cv.E_CERAMIC, cv.POISSON, float(p), bps)
