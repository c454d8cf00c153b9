"""Time the numba and numpy Q4 kernels on the cantilever reference mesh.

    python benchmarks/bench_kernels.py [--mx 101 --my 100 --repeat 5]

Also times a full plane solve in a subprocess per back end, since the back
end is fixed at import time by ``FGBEAM_NO_NUMBA``.
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from fgbeam import _kernels
from fgbeam.material import benchmark_material
from fgbeam.q4 import structured_mesh

SOLVE_SNIPPET = """
import time
from fgbeam import _kernels
from fgbeam.material import benchmark_material
from fgbeam.q4 import PlaneModel, solve_plane, stress_profile
m = PlaneModel(benchmark_material("C", 5.0), 1000.0, 50.0, {mx}, {my}, "CF", tip_load=5e5)
solve_plane(m)  # warm-up (JIT compile or page-in)
t = time.perf_counter()
s = solve_plane(PlaneModel(m.material, m.length, m.width, m.mx, m.my, m.boundary, m.tip_load))
tau = stress_profile(s, 500.0).max_abs_tau
print(_kernels.BACKEND, time.perf_counter() - t, tau)
"""


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mx", type=int, default=101)
    ap.add_argument("--my", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    mesh = structured_mesh(benchmark_material("C", 5.0), 1000.0, 50.0, args.mx, args.my)
    xy = mesh.element_xy()
    ue = np.random.default_rng(0).standard_normal((mesh.n_elements, 8))
    print(f"mesh {args.mx} x {args.my}: {mesh.n_elements} elements; numba available: {_kernels.numba_available}")

    # compile outside the timed region
    _kernels.stiffness_numba(xy[:1], mesh.E[:1], mesh.nu, mesh.thickness)
    _kernels.centroid_stress_numba(xy[:1], mesh.E[:1], mesh.nu, ue[:1])

    k_np = _kernels.stiffness_numpy(xy, mesh.E, mesh.nu, mesh.thickness)
    k_nb = _kernels.stiffness_numba(xy, mesh.E, mesh.nu, mesh.thickness)
    s_np = _kernels.centroid_stress_numpy(xy, mesh.E, mesh.nu, ue)
    s_nb = _kernels.centroid_stress_numba(xy, mesh.E, mesh.nu, ue)
    dk = np.max(np.abs(k_np - k_nb)) / np.max(np.abs(k_np))
    ds = np.max(np.abs(s_np - s_nb)) / np.max(np.abs(s_np))
    print(f"max relative difference: stiffness {dk:.2e}, stresses {ds:.2e}")

    rows = [
        ("element stiffness", lambda: _kernels.stiffness_numpy(xy, mesh.E, mesh.nu, mesh.thickness),
         lambda: _kernels.stiffness_numba(xy, mesh.E, mesh.nu, mesh.thickness)),
        ("centroid stress", lambda: _kernels.centroid_stress_numpy(xy, mesh.E, mesh.nu, ue),
         lambda: _kernels.centroid_stress_numba(xy, mesh.E, mesh.nu, ue)),
    ]
    print(f"{'kernel':<20}{'numpy [ms]':>12}{'numba [ms]':>12}{'speed-up':>10}")
    for name, f_np, f_nb in rows:
        t_np = best_of(f_np, args.repeat) * 1e3
        t_nb = best_of(f_nb, args.repeat) * 1e3
        print(f"{name:<20}{t_np:>12.2f}{t_nb:>12.2f}{t_np / t_nb:>10.1f}")

    print("full plane solve (C-F, Type C, p = 5):")
    for flag in ("0", "1"):
        env = dict(os.environ, FGBEAM_NO_NUMBA=flag)
        code = SOLVE_SNIPPET.format(mx=args.mx, my=args.my)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        backend, seconds, tau = out.stdout.split()
        print(f"  {backend:<6} {float(seconds) * 1e3:8.1f} ms   max tau at x = 500: {float(tau):.4f}")


if __name__ == "__main__":
    main()
