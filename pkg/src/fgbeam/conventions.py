"""Sign conventions and benchmark constants shared by every module.

Conventions
-----------
* ``x`` runs along the beam axis from the left node, ``y`` through the
  thickness in ``[-h/2, h/2]``.
* The transverse displacement ``w``, the thickness axis ``y`` and all
  transverse loads (``q0``, ``P_y``) point the same way.  With a downward
  load this makes reported deflections positive, and the axial
  displacement field is ``u_x = u - y w' + f(y)(w' - theta)``.
* Section resultants at an element end are collected as
  ``S = (N, Q, M_w, M_theta)``.  Nodal equilibrium reads
  ``S(L)_left - S(0)_right = applied`` with applied nodal loads
  ``(P_x, P_y, 0, M)``; there is no external load conjugate to ``w'``.
* Reactions are reported as ``row - applied`` at constrained degrees of
  freedom, i.e. the force the support exerts, so that for every direction
  ``sum(reactions) + sum(applied) = 0``.

Units are N and mm throughout.
"""

# Alumina / aluminium pair used by all benchmark beams.
E_METAL = 70000.0  # N/mm^2
E_CERAMIC = 380000.0  # N/mm^2
POISSON = 0.3

HEIGHT = 200.0  # mm
SANDWICH_BREAKPOINTS = (-100.0, -40.0, 40.0, 100.0)
ISOTROPIC_BREAKPOINTS = (-100.0, 100.0)
POWER_INDICES = (0.0, 0.5, 1.0, 5.0, 10.0)

# Not printed in the source tables. WIDTH follows from the uniform-load cases
# (q0 is given): simply supported Euler deflection 82.237 = 5 q L^4 / 384 EI
# with E = 380000, h = 200. The tip load then follows from the cantilever
# Euler deflection 13.158 = P L^3 / 3 EI and the homogeneous shear peak
# 75.000 = 1.5 P / (b h), both of which fix P / b = 1e4.
WIDTH = 50.0  # mm
TIP_LOAD = 5.0e5  # N
UNIFORM_LOAD = 5000.0  # N/mm

CANTILEVER_LENGTH = 1000.0  # mm
SUPPORTED_LENGTH = 2000.0  # mm

DOF_NAMES = ("u", "w", "w_x", "theta")
