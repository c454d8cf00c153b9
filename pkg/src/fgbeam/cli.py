"""Command-line front end.

Exit codes: 0 success, 2 configuration or usage error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .assembly import BoundaryCase, solve
from .config import AnalysisConfig, dump_config, load_config
from .errors import ConfigError, FGBeamError, InvalidCase, InvalidModel
from .recovery import profiles_csv_text, stress_profile
from .section import QuadratureSpec, SectionGeometry, compute_constants

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _section(cfg: AnalysisConfig):
    geom = SectionGeometry(cfg.width, cfg.material())
    return compute_constants(geom, QuadratureSpec(cfg.quadrature_order))


def _section_summary(consts) -> dict:
    return {"g": consts.g, "lambda": consts.lam, "Ds": consts.Ds, "Ds_hat": consts.Ds_hat}


def _element_name(cfg: AnalysisConfig) -> str:
    return "q4" if cfg.is_plane else cfg.element.value


def summarize(cfg: AnalysisConfig) -> tuple[dict, list]:
    """Run one analysis; returns the JSON summary and the stress profiles."""
    consts = _section(cfg)
    summary = {
        "element": _element_name(cfg),
        "boundary": cfg.boundary.value,
        "material": {"kind": cfg.kind.value, "p": cfg.p},
        "length_mm": cfg.length,
        "width_mm": cfg.width,
        "section": _section_summary(consts),
    }
    if cfg.is_plane:
        from .q4 import solve_plane
        from .q4 import stress_profile as plane_profile

        sol = solve_plane(cfg.plane_model())
        summary["mesh"] = {"mx": cfg.mesh_mx, "my": cfg.mesh_my}
        summary["tip_w_mm"] = sol.tip_w
        summary["midspan_w_mm"] = sol.midspan_w
        summary["reactions"] = {
            "Fx": float(sol.reactions[:, 0].sum()),
            "Fy": float(sol.reactions[:, 1].sum()),
        }
        profiles = [plane_profile(sol, x) for x in cfg.profile_x]
    else:
        sol = solve(cfg.model())
        summary["elements"] = cfg.elements
        summary["tip_w_mm"] = sol.tip_w
        summary["midspan_w_mm"] = sol.midspan_w
        summary["reactions"] = [
            {"node": node, "dof": dof, "value": value} for (node, dof), value in sorted(sol.reactions.items())
        ]
        summary["residual"] = sol.residual
        profiles = [stress_profile(sol, x) for x in cfg.profile_x]
    summary["max_tau"] = [{"x_mm": p.x, "tau_xy": p.max_abs_tau} for p in profiles if p.tau_xy.size]
    return summary, profiles


def _json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("mesh counts must be positive integers")
    return vals


def cmd_analyze(args) -> int:
    cfg = load_config(args.config)
    summary, profiles = summarize(cfg)
    outdir = Path(args.out or cfg.directory)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "summary.json").write_text(_json(summary))
    (outdir / "effective.ini").write_text(dump_config(cfg))
    if profiles:
        (outdir / "profiles.csv").write_text(profiles_csv_text(profiles))
    print(f"tip_w_mm = {summary['tip_w_mm']:.6g}, midspan_w_mm = {summary['midspan_w_mm']:.6g}; wrote {outdir}")
    return EXIT_OK


def cmd_section_report(args) -> int:
    cfg = load_config(args.config)
    consts = _section(cfg)
    data = {"material": {"kind": cfg.kind.value, "p": cfg.p}, "width_mm": cfg.width, **consts.as_dict()}
    _emit(_json(data), args.out)
    return EXIT_OK


def cmd_tables(args) -> int:
    from .tables import TABLES, build_table

    ids = sorted(TABLES) if args.id == "all" else [int(args.id)]
    for n in ids:
        table = build_table(n)
        if args.out:
            path = table.write(args.out)
            print(f"table {n}: {path}")
        else:
            sys.stdout.write(f"# table {n}: {table.title}\n{table.to_csv()}")
    return EXIT_OK


def cmd_convergence(args) -> int:
    from .tables import convergence_ladder

    cfg = load_config(args.config)
    if cfg.is_plane:
        raise ConfigError("convergence ladders run beam elements; element = q4 is not supported here")

    def run(n):
        sol = solve(cfg.model(elements=n))
        return sol.tip_w if cfg.boundary is BoundaryCase.CF else sol.midspan_w

    ladder = convergence_ladder(run, sorted(set(args.meshes)))
    lines = ["elements,w_mm,converged"] + [f"{n},{v:.10g},{int(flag)}" for n, v, flag in ladder]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_profile(args) -> int:
    cfg = load_config(args.config)
    xs = args.x if args.x else list(cfg.profile_x)
    if not xs:
        raise ConfigError("no sections requested: pass --x or set [output] profile_x")
    if any(not 0.0 <= x <= cfg.length for x in xs):
        raise ConfigError(f"--x entries must lie in [0, {cfg.length:g}]")
    if cfg.is_plane:
        from .q4 import solve_plane
        from .q4 import stress_profile as plane_profile

        sol = solve_plane(cfg.plane_model())
        profiles = [plane_profile(sol, x) for x in xs]
    else:
        sol = solve(cfg.model())
        profiles = [stress_profile(sol, x, method=args.method) for x in xs]
    _emit(profiles_csv_text(profiles), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fgbeam", description="Static analysis of graded sandwich beams.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="solve one configuration; write summary.json and profiles.csv")
    p.add_argument("config")
    p.add_argument("--out", help="output directory (default: [output] directory)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("section-report", help="print the section constants as JSON")
    p.add_argument("config")
    p.add_argument("--out", help="write to this file instead of stdout")
    p.set_defaults(func=cmd_section_report)

    p = sub.add_parser("tables", help="regenerate benchmark table 1..10 (or 'all') as CSV")
    p.add_argument("id", choices=[str(i) for i in range(1, 11)] + ["all"])
    p.add_argument("--out", help="directory for tableN.csv (default: stdout)")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("convergence", help="deflection versus element count")
    p.add_argument("config")
    p.add_argument("--meshes", type=_int_list, required=True, help="e.g. 1,2,4,8")
    p.add_argument("--out", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("profile", help="stress profiles across the thickness as CSV")
    p.add_argument("config")
    p.add_argument("--x", type=_float_list, help="sections in mm, e.g. 50,500,900")
    p.add_argument("--method", choices=["equilibrium", "constitutive"], help="shear stress recovery")
    p.add_argument("--out", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_profile)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InvalidModel, InvalidCase) as exc:
        print(f"fgbeam: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FGBeamError, ArithmeticError) as exc:
        print(f"fgbeam: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"fgbeam: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"fgbeam: I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
