"""Benchmark tables: pinned reference values and their regeneration.

Each ``table_N`` function recomputes every computable column and returns a
:class:`Table`, a header plus rows of plain values ready for CSV.  Columns
that cannot be recomputed here (the ``IAD`` reference solutions) are copied
from the pinned constants and labelled ``(pinned)``.  Relative errors are in
percent.
"""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import conventions as cv
from .assembly import make_model, solve
from .material import benchmark_material
from .section import SectionGeometry, compute_constants

__all__ = [
    "Table",
    "PINNED",
    "MESH",
    "TABLES",
    "build_table",
    "worker_count",
    "convergence_ladder",
    "relative_error",
]

KINDS = ("A", "B", "C")
P_VALUES = cv.POWER_INDICES
COLUMNS = ("deb", "dfs", "dts", "pfts_t", "pfts")
LABEL = {"deb": "DEB", "dfs": "DFS", "dts": "DTS", "pfts_t": "PFTS-T", "pfts": "PFTS", "q4": "Q4"}

# Element counts used for the comparison tables, per load case.
MESH = {
    "CF": {"deb": 128, "dfs": 1024, "dts": 128, "pfts_t": 1, "pfts": 1},
    "SS": {"deb": 512, "dfs": 512, "dts": 512, "pfts_t": 1, "pfts": 1},
    "CC": {"deb": 512, "dfs": 512, "dts": 512, "pfts_t": 1, "pfts": 1},
}
Q4_MESH = {"CF": (101, 100), "CC": (201, 50)}
STRESS_X = {"CF": 500.0, "CC": 1500.0}


def _grid(rows):
    """``{(kind, p): values}`` from 15 rows ordered A..C, p ascending."""
    return {(k, p): r for (k, p), r in zip(((k, p) for k in KINDS for p in P_VALUES), rows)}


def _ladder(counts, *cols):
    """``{column: {n: value}}`` skipping ``None`` cells."""
    out = {}
    for name, col in zip(COLUMNS, cols):
        out[name] = {n: v for n, v in zip(counts, col) if v is not None}
    return out


_N12 = (1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048)
_N11 = (1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024)
_ = None

PINNED = {
    1: {
        "A": dict(zip(P_VALUES, (-0.0081, -0.0087, -0.0081, -0.0056, -0.0055))),
        "B": dict(zip(P_VALUES, (-0.0081, -0.0120, -0.0149, -0.0172, -0.0168))),
        "C": dict(zip(P_VALUES, (-0.0096, -0.0086, -0.0076, -0.0054, -0.0050))),
    },
    2: _ladder(
        _N12,
        (44.527, 44.527, _, _, _, _, _, _, _, _, _, _),
        (2.6514, 9.0191, 22.571, 36.151, 42.552, 44.522, 45.044, 45.176, 45.209, 45.217, 45.220, 45.220),
        (34.044, 42.391, 44.468, 44.966, 45.067, 45.084, 45.087, 45.088, 45.088, _, _, _),
        (45.088, 45.088, _, _, _, _, _, _, _, _, _, _),
        (45.102, 45.102, _, _, _, _, _, _, _, _, _, _),
    ),
    3: _ladder(
        _N12,
        (32.759, 35.286, 35.917, 36.075, 36.115, 36.125, 36.127, 36.128, 36.128, _, _, _),
        (3.1784, 10.107, 22.214, 31.709, 35.503, 36.597, 36.881, 36.953, 36.971, 36.976, 36.977, 36.977),
        (28.417, 35.144, 36.717, 37.021, 37.075, 37.089, 37.093, 37.094, 37.094, _, _, _),
        (37.095, 37.095, _, _, _, _, _, _, _, _, _, _),
        (37.232, 37.232, _, _, _, _, _, _, _, _, _, _),
    ),
    4: _grid(
        [
            (13.158, 13.569, 13.563, 13.564, 13.564, 13.567),
            (20.297, 20.861, 20.845, 20.847, 20.847, 20.851),
            (26.398, 27.092, 27.081, 27.084, 27.086, 27.091),
            (40.004, 41.286, 41.519, 41.525, 41.532, 41.565),
            (43.919, 45.508, 45.791, 45.798, 45.809, 45.824),
            (13.158, 13.569, 13.563, 13.564, 13.564, 13.567),
            (19.888, 20.378, 20.340, 20.342, 20.342, 20.345),
            (25.528, 26.072, 26.012, 26.015, 26.016, 26.019),
            (44.527, 45.220, 45.084, 45.088, 45.102, 45.131),
            (49.891, 50.631, 50.466, 50.471, 50.495, 50.563),
            (26.230, 26.774, 26.705, 26.708, 26.738, 26.758),
            (30.349, 30.984, 30.929, 30.933, 30.969, 30.977),
            (32.630, 33.324, 33.292, 33.297, 33.363, 33.365),
            (36.127, 36.977, 37.089, 37.095, 37.232, 37.347),
            (36.405, 37.300, 37.476, 37.482, 37.631, 37.806),
        ]
    ),
    5: _grid(
        [
            (75.025, 75.000, 74.935),
            (79.125, 78.571, 78.493),
            (82.483, 79.937, 79.889),
            (83.637, 73.118, 73.088),
            (66.515, 70.854, 70.820),
            (75.025, 75.000, 74.935),
            (81.045, 83.042, 82.848),
            (85.237, 88.534, 88.376),
            (97.140, 99.991, 99.782),
            (100.97, 100.88, 100.65),
            (87.238, 89.371, 89.317),
            (93.727, 86.698, 86.635),
            (104.89, 84.444, 84.380),
            (153.52, 77.476, 77.473),
            (170.99, 75.921, 75.887),
        ]
    ),
    6: _ladder(
        _N11[:10],
        (_, 163.79, 210.30, 221.92, 224.83, 225.56, 225.74, 225.78, 225.80, 225.80),
        (_, 138.66, 223.30, 229.01, 229.85, 230.00, 230.03, 230.04, 230.05, 230.05),
        (_, 142.09, 209.59, 225.94, 229.62, 230.43, 230.63, 230.68, 230.69, 230.69),
        (230.70, 230.70, _, _, _, _, _, _, _, _),
        (231.39, 231.39, _, _, _, _, _, _, _, _),
    ),
    7: _ladder(
        _N11,
        (_, 28.313, 40.948, 44.107, 44.897, 45.094, 45.143, 45.156, 45.159, 45.160, 45.160),
        (_, 18.689, 45.488, 49.076, 49.384, 49.405, 49.407, 49.406, 49.406, _, _),
        (_, 142.09, 40.237, 48.085, 49.549, 49.815, 49.894, 49.920, 49.927, 49.929, 49.929),
        (49.929, 49.929, _, _, _, _, _, _, _, _, _),
        (50.606, 50.606, _, _, _, _, _, _, _, _, _),
    ),
    8: _grid(
        [
            (82.237, 84.290, 84.289, 84.289, 84.289, 84.289),
            (126.86, 129.68, 129.63, 129.63, 129.64, 129.64),
            (164.99, 168.46, 168.45, 168.45, 168.47, 168.47),
            (250.02, 256.43, 257.73, 257.73, 257.77, 257.90),
            (274.49, 282.44, 284.01, 284.01, 284.07, 284.08),
            (82.237, 84.290, 84.289, 84.289, 84.289, 84.289),
            (124.30, 126.75, 126.59, 126.59, 126.59, 126.59),
            (159.55, 162.27, 162.00, 162.00, 162.01, 162.01),
            (278.29, 281.76, 281.12, 281.12, 281.19, 281.31),
            (311.82, 315.52, 314.74, 314.74, 314.86, 315.18),
            (163.94, 166.66, 166.35, 166.35, 166.50, 166.58),
            (189.68, 192.85, 192.63, 192.63, 192.81, 192.83),
            (203.94, 207.41, 207.31, 207.31, 207.64, 207.64),
            (225.80, 230.05, 230.69, 230.70, 231.39, 232.00),
            (227.53, 232.01, 232.98, 232.99, 233.75, 234.67),
        ]
    ),
    9: _grid(
        [
            (16.447, 18.500, 18.454, 18.454, 18.454, 18.483),
            (25.372, 28.191, 28.089, 28.089, 28.090, 28.128),
            (32.998, 36.464, 36.387, 36.387, 36.399, 36.447),
            (50.005, 56.416, 57.504, 57.505, 57.542, 57.739),
            (54.899, 62.844, 64.162, 64.163, 64.218, 64.352),
            (16.447, 18.500, 18.454, 18.454, 18.454, 18.483),
            (24.860, 27.312, 27.109, 27.109, 27.110, 27.140),
            (31.911, 34.628, 34.321, 34.321, 34.327, 34.357),
            (55.659, 59.125, 58.444, 58.444, 58.513, 58.679),
            (62.364, 66.063, 65.241, 65.241, 65.359, 65.721),
            (32.788, 35.506, 35.150, 35.151, 35.301, 35.419),
            (37.936, 41.111, 40.825, 40.825, 41.002, 41.062),
            (40.788, 44.255, 44.081, 44.081, 44.407, 44.430),
            (45.160, 49.407, 49.929, 49.929, 50.606, 51.134),
            (45.506, 49.982, 50.816, 50.816, 51.550, 52.362),
        ]
    ),
    10: _grid(
        [
            (373.99, 375.00, 374.68),
            (394.34, 392.85, 392.47),
            (411.17, 399.68, 399.45),
            (417.44, 365.59, 365.45),
            (332.02, 354.27, 354.11),
            (373.99, 375.00, 374.68),
            (403.34, 415.20, 414.24),
            (423.65, 442.66, 441.88),
            (481.46, 499.94, 498.91),
            (500.25, 504.41, 503.27),
            (434.80, 446.85, 446.58),
            (466.94, 433.49, 433.17),
            (522.75, 422.22, 421.90),
            (765.87, 387.38, 387.37),
            (853.19, 379.60, 379.44),
        ]
    ),
}

# Ladder cases: (boundary, material kind, p)
LADDER_CASE = {2: ("CF", "B", 5.0), 3: ("CF", "C", 5.0), 6: ("SS", "C", 5.0), 7: ("CC", "C", 5.0)}
DISPLACEMENT_CASE = {4: "CF", 8: "SS", 9: "CC"}
STRESS_CASE = {5: "CF", 10: "CC"}


@dataclass(frozen=True)
class Table:
    number: int
    title: str
    header: tuple
    rows: tuple

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for r in self.rows:
            w.writerow([_cell(v) for v in r])
        return buf.getvalue()

    def write(self, directory) -> Path:
        path = Path(directory) / f"table{self.number}.csv"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_csv())
        return path

    def column(self, name):
        i = self.header.index(name)
        return [r[i] for r in self.rows]


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return "" if math.isnan(v) else f"{v:.6g}"
    return str(v)


def relative_error(value: float, reference: float) -> float:
    """``100 |value - reference| / |reference|``."""
    return 100.0 * abs(value - reference) / abs(reference)


def worker_count() -> int:
    """Worker threads: ``FGBEAM_THREADS`` if set, else the CPU count."""
    raw = os.environ.get("FGBEAM_THREADS", "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"FGBEAM_THREADS must be a positive integer, got {raw!r}") from None
        if n < 1:
            raise ValueError(f"FGBEAM_THREADS must be a positive integer, got {raw!r}")
        return n
    return os.cpu_count() or 1


def _pmap(fn, items):
    items = list(items)
    n = min(worker_count(), len(items)) or 1
    if n == 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# -- single computations ----------------------------------------------------


def beam_deflection(boundary: str, kind: str, p: float, element: str, n: int) -> float:
    """Reported deflection (tip for C-F, mid-span otherwise) of a benchmark beam."""
    return solve(make_model(benchmark_material(kind, p), element, boundary, n)).reported_w


def beam_max_shear(boundary: str, kind: str, p: float, element: str) -> float:
    from .recovery import max_shear_stress

    n = 1 if element.startswith("pfts") else MESH[boundary][element]
    sol = solve(make_model(benchmark_material(kind, p), element, boundary, n))
    return max_shear_stress(sol, STRESS_X[boundary])[1]


def plane_max_shear(boundary: str, kind: str, p: float) -> float:
    from .q4 import PlaneModel, solve_plane, stress_profile

    mx, my = Q4_MESH[boundary]
    if boundary == "CF":
        model = PlaneModel(benchmark_material(kind, p), cv.CANTILEVER_LENGTH, cv.WIDTH, mx, my, boundary, tip_load=cv.TIP_LOAD)
    else:
        model = PlaneModel(benchmark_material(kind, p), cv.SUPPORTED_LENGTH, cv.WIDTH, mx, my, boundary, q0=cv.UNIFORM_LOAD)
    return stress_profile(solve_plane(model), STRESS_X[boundary]).max_abs_tau


def section_g(kind: str, p: float) -> float:
    geom = SectionGeometry(cv.WIDTH, benchmark_material(kind, p))
    return compute_constants(geom).g


def convergence_ladder(run, meshes, tol: float = 1e-4):
    """``[(n, value, converged)]``; the first count within ``tol`` of the finest is flagged."""
    values = _pmap(run, meshes)
    finest = values[-1]
    first = next(i for i, v in enumerate(values) if abs(v - finest) <= tol * abs(finest))
    return [(n, v, i == first) for i, (n, v) in enumerate(zip(meshes, values))]


# -- tables -----------------------------------------------------------------


def table_1() -> Table:
    header = ("p", "Type A", "Type B", "Type C", "Type A (pinned)", "Type B (pinned)", "Type C (pinned)")
    cases = [(k, p) for p in P_VALUES for k in KINDS]
    g = dict(zip(cases, _pmap(lambda c: section_g(*c), cases)))
    rows = tuple(
        (p, *(g[(k, p)] for k in KINDS), *(PINNED[1][k][p] for k in KINDS)) for p in P_VALUES
    )
    return Table(1, "g of the force-field equation", header, rows)


def _ladder_table(number: int) -> Table:
    boundary, kind, p = LADDER_CASE[number]
    pinned = PINNED[number]
    counts = sorted({n for col in pinned.values() for n in col})
    jobs = [(col, n) for col in COLUMNS for n in counts if n in pinned[col]]
    vals = dict(zip(jobs, _pmap(lambda j: beam_deflection(boundary, kind, p, j[0], j[1]), jobs)))
    header = ("elements", *(LABEL[c] for c in COLUMNS), *(f"{LABEL[c]} (pinned)" for c in COLUMNS))
    rows = [(n, *(vals.get((c, n)) for c in COLUMNS), *(pinned[c].get(n) for c in COLUMNS)) for n in counts]
    finest = {c: max(pinned[c]) for c in COLUMNS}
    rows.append(("converged", *(vals[(c, finest[c])] for c in COLUMNS), *(pinned[c][finest[c]] for c in COLUMNS)))
    what = "tip" if boundary == "CF" else "mid-span"
    return Table(number, f"convergence of the {what} deflection ({boundary}, Type {kind}, p = {p:g})", header, tuple(rows))


def _displacement_table(number: int) -> Table:
    boundary = DISPLACEMENT_CASE[number]
    jobs = [(k, p, c) for k in KINDS for p in P_VALUES for c in COLUMNS]
    vals = dict(zip(jobs, _pmap(lambda j: beam_deflection(boundary, j[0], j[1], j[2], MESH[boundary][j[2]]), jobs)))
    header = ("type", "p")
    for c in COLUMNS:
        header += (LABEL[c], f"{LABEL[c]} err %")
    header += ("IAD (pinned)",)
    rows = []
    for k in KINDS:
        for p in P_VALUES:
            ref = PINNED[number][(k, p)][-1]
            row = [k, p]
            for c in COLUMNS:
                v = vals[(k, p, c)]
                row += [v, relative_error(v, ref)]
            rows.append(tuple(row) + (ref,))
    what = "tip" if boundary == "CF" else "mid-span"
    return Table(number, f"{what} deflection ({boundary})", header, tuple(rows))


def _stress_table(number: int) -> Table:
    boundary = STRESS_CASE[number]
    cases = [(k, p) for k in KINDS for p in P_VALUES]
    beam_jobs = [(k, p, c) for k, p in cases for c in ("dts", "pfts")]
    beam = dict(zip(beam_jobs, _pmap(lambda j: beam_max_shear(boundary, *j), beam_jobs)))
    plane = dict(zip(cases, _pmap(lambda c: plane_max_shear(boundary, *c), cases)))
    header = ("type", "p", "DTS", "DTS err %", "PFTS", "PFTS err %", "Q4", "Q4 (pinned)")
    rows = []
    for k, p in cases:
        q4 = plane[(k, p)]
        d, f = beam[(k, p, "dts")], beam[(k, p, "pfts")]
        rows.append((k, p, d, relative_error(d, q4), f, relative_error(f, q4), q4, PINNED[number][(k, p)][2]))
    return Table(number, f"maximum transverse shear stress ({boundary}, x = {STRESS_X[boundary]:g} mm)", header, tuple(rows))


TABLES = {
    1: table_1,
    2: lambda: _ladder_table(2),
    3: lambda: _ladder_table(3),
    4: lambda: _displacement_table(4),
    5: lambda: _stress_table(5),
    6: lambda: _ladder_table(6),
    7: lambda: _ladder_table(7),
    8: lambda: _displacement_table(8),
    9: lambda: _displacement_table(9),
    10: lambda: _stress_table(10),
}


def build_table(number: int) -> Table:
    if number not in TABLES:
        raise ValueError(f"table id must be 1..10, got {number}")
    return TABLES[number]()
