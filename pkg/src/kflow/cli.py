"""Command-line front end: run flows, dump curvature, check invariants.

Subcommands: curvature | flow | check | symbol | oracle-diff | sweep.
Exit codes: 0 success, 1 check failure, 2 usage/domain error, 3 I/O error.

All numeric output uses 17 significant digits so CSV/JSON round-trips are
bit-exact, and nothing embeds timestamps: identical flags and seed produce
byte-identical files.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Optional, Sequence

import numpy as np

from . import milnor
from .checks import run_invariant_suite
from .dynamics import (FlowConvention, GEOMETRY_NAMES, GeometryFamily,
                       bianchi_system, reduced_scalars, reduced_system)
from .evolution import f2_functional
from .integrate import IntegratorOptions, Trajectory, integrate
from .milnor import MilnorMetric, StructureConstants
from .oracles import conserved, oracle_for_class
from .symbol import (SymbolProbe, quadratic_form, symbol_spectrum,
                     tt_projection, ungauged_symbol, gauged_symbol)


class DomainError(Exception):
    """User input outside the supported domain (exit code 2)."""


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------

def fmt17(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def dumps17(obj, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits, insertion order kept."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(f'{pad}  "{k}": {dumps17(v, indent + 1)}' for k, v in obj.items())
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        flat = all(isinstance(v, (int, float, np.integer, np.floating, bool)) for v in obj)
        if flat:
            return "[" + ", ".join(fmt17(v) for v in obj) + "]"
        items = ",\n".join(f"{pad}  {dumps17(v, indent + 1)}" for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return fmt17(obj)


def _write_text(path: Optional[str], text: str, stream=None):
    if path is None:
        (stream or sys.stdout).write(text)
        if not text.endswith("\n"):
            (stream or sys.stdout).write("\n")
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# shared argument handling
# ---------------------------------------------------------------------------

def _parse_metric(text: str, family: GeometryFamily):
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise DomainError(f"could not parse metric coefficients from {text!r}")
    want = family.dimension()
    if len(values) != want:
        raise DomainError(f"class {family.tag if not family.is_bianchi else family.constants.class_name()} "
                          f"expects {want} coefficient(s), got {len(values)}")
    if any(not v > 0 for v in values):
        raise DomainError("metric coefficients must be strictly positive")
    return values


def _family(args) -> GeometryFamily:
    return GeometryFamily.from_name(args.geometry)


def _convention(args, family: GeometryFamily) -> FlowConvention:
    if getattr(args, "convention", None):
        return FlowConvention.parse(args.convention)
    return family.default_convention()


def _integrator_options(args, detect_equilibration=False) -> IntegratorOptions:
    return IntegratorOptions(
        t_max=args.t_max,
        rtol=args.rtol,
        atol=args.atol,
        detect_equilibration=detect_equilibration,
        equilibration_tol=getattr(args, "equilibration_tol", 1e-9),
    )


def _build_trajectory(args, family, convention, normalized) -> Trajectory:
    y0 = _parse_metric(args.metric, family)
    if family.is_bianchi:
        system = bianchi_system(family.constants, convention, normalized=normalized)
    else:
        if normalized:
            raise DomainError("--normalized applies to Bianchi classes only")
        system = reduced_system(family, convention)
    detect = normalized or args.detect_equilibration
    return integrate(system, y0, _integrator_options(args, detect_equilibration=detect))


def _fill_triple(family: GeometryFamily, state) -> tuple:
    """Expand a reduced state to the (a, b, c) column triple."""
    if family.is_bianchi:
        return tuple(float(v) for v in state)
    if family.tag == "h3":
        return (float(state[0]),) * 3
    return (float(state[0]), float(state[1]), float(state[1]))


def _row_scalars(family: GeometryFamily, state):
    if family.is_bianchi:
        m = MilnorMetric(*state)
        r = float(milnor.scalar_curvature(family.constants, m))
        kt = float(milnor.k_trace(family.constants, m))
    else:
        r, kt = reduced_scalars(family, state)
    return r, kt


_INVARIANT_CLASSES = ("isom_r2", "sol", "nil")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_curvature(args) -> int:
    family = _family(args)
    if not family.is_bianchi:
        raise DomainError("curvature reporting covers Bianchi classes; "
                          "use the closed forms for reduced families")
    sc = family.constants
    m = MilnorMetric(*_parse_metric(args.metric, family))
    frame = {
        "ricci": milnor.ricci_frame(sc, m).as_tuple(),
        "schouten": milnor.schouten_frame(sc, m).as_tuple(),
        "cotton_star": milnor.cotton_star_frame(sc, m).as_tuple(),
        "j": milnor.j_frame(sc, m).as_tuple(),
        "h": milnor.h_frame(sc, m).as_tuple(),
        "k": milnor.k_frame(sc, m).as_tuple(),
    }
    coord = {name: milnor.frame_to_coordinate(milnor.FrameDiagonal(*vals), m)
             for name, vals in frame.items()}
    doc = {
        "class": args.geometry,
        "structure_constants": list(sc.as_tuple()),
        "metric": [float(v) for v in m.as_tuple()],
        "frame": {k: [float(x) for x in v] for k, v in frame.items()},
        "coordinate": {k: [float(x) for x in v] for k, v in coord.items()},
        "scalars": {
            "r": float(milnor.scalar_curvature(sc, m)),
            "k_trace": float(milnor.k_trace(sc, m)),
            "f2": f2_functional(sc, m),
        },
    }
    _write_text(args.out, dumps17(doc))
    return 0


def _flow_rows(args, family, traj):
    n = max(2, args.samples)
    grid, states = traj.resample(n)
    with_invariant = (family.is_bianchi
                      and family.constants.class_name() in _INVARIANT_CLASSES)
    class_name = family.constants.class_name() if family.is_bianchi else family.tag
    rows = []
    for t, state in zip(grid, states):
        triple = _fill_triple(family, state)
        r, kt = _row_scalars(family, state)
        f2 = kt * math.sqrt(triple[0] * triple[1] * triple[2])
        row = [float(t), *triple, r, kt, f2]
        if with_invariant:
            row.append(conserved(class_name, MilnorMetric(*triple)))
        rows.append(row)
    header = "t,a,b,c,R,Ktrace,F2" + (",invariant" if with_invariant else "")
    return header, rows


def cmd_flow(args) -> int:
    family = _family(args)
    convention = _convention(args, family)
    traj = _build_trajectory(args, family, convention, args.normalized)
    header, rows = _flow_rows(args, family, traj)
    meta = {
        "stop_reason": str(traj.stop),
        "t_final": traj.t_final,
        "steps_accepted": traj.steps_accepted,
        "steps_rejected": traj.steps_rejected,
        "convention": convention.value,
        "normalized": bool(args.normalized),
    }
    if args.format == "json":
        doc = {"meta": meta, "columns": header.split(","), "samples": rows}
        _write_text(args.out, dumps17(doc))
    else:
        csv_text = header + "\n" + "\n".join(",".join(fmt17(v) for v in row) for row in rows) + "\n"
        _write_text(args.out, csv_text)
        sidecar = dumps17(meta)
        if args.out is not None:
            _write_text(args.out + ".json", sidecar)
        else:
            print(sidecar, file=sys.stderr)
    if args.svg:
        from .charts import render_flow_chart
        ts = [row[0] for row in rows]
        series = [[row[i] for row in rows] for i in (1, 2, 3)]
        title = f"{args.geometry} flow ({convention.value}" + (", normalized)" if args.normalized else ")")
        render_flow_chart(args.svg, ts, series, ["a", "b", "c"], title)
    return 0


def cmd_check(args) -> int:
    results = run_invariant_suite(seed=args.seed, cases=args.cases,
                                  inject_fault=args.inject_fault)
    lines = [r.line() for r in results]
    failures = [r for r in results if not r.passed]
    text = "\n".join(lines)
    if failures:
        first = failures[0]
        text += f"\nFIRST COUNTEREXAMPLE ({first.name}):\n  {first.counterexample}"
    _write_text(args.out, text) if args.out else print(text)
    return 1 if failures else 0


def cmd_symbol(args) -> int:
    rng = np.random.default_rng(args.seed)
    gauge_ratios = []
    tt_errors = []
    null_dims = []
    smallest, largest = [], []
    for _ in range(args.cases):
        z = rng.normal(size=3)
        n2 = float(z @ z)
        if n2 < 1e-8:
            continue
        gauge = SymbolProbe(z, np.outer(z, z))
        gauge_ratios.append(quadratic_form("gauged", gauge) / n2**4)
        htt = tt_projection(z, rng.normal(size=(3, 3)))
        scale = max(1e-300, n2**2 * float(np.abs(htt).max()))
        for fn in (ungauged_symbol, gauged_symbol):
            tt_errors.append(float(np.abs(fn(SymbolProbe(z, htt)) - n2**2 * htt).max()) / scale)
        spec_u = symbol_spectrum("ungauged", z)
        spec_g = symbol_spectrum("gauged", z)
        null_dims.append(int(np.sum(spec_u < 1e-10)))
        smallest.append(float(spec_g[-1]))
        largest.append(float(spec_g[0]))
    doc = {
        "gauge_mode_ratio": float(np.mean(gauge_ratios)),
        "tt_max_error": float(np.max(tt_errors)),
        "ungauged_nullspace_dim_estimate": int(np.median(null_dims)),
        "gauged_spectrum_stats": {
            "smallest_min": float(np.min(smallest)),
            "smallest_max": float(np.max(smallest)),
            "largest_min": float(np.min(largest)),
            "largest_max": float(np.max(largest)),
            "samples": len(smallest),
        },
    }
    _write_text(args.out, dumps17(doc))
    return 0


def cmd_oracle_diff(args) -> int:
    family = _family(args)
    y0 = _parse_metric(args.metric, family)
    try:
        oracle = oracle_for_class(args.geometry, y0)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    convention = oracle.convention
    if args.convention and FlowConvention.parse(args.convention) is not convention:
        raise DomainError(f"class {args.geometry} oracle is stated in the "
                          f"{convention.value} convention")
    t_max = args.t_max
    if oracle.singularity_time is not None:
        t_max = min(t_max, 0.99 * oracle.singularity_time)
    if family.is_bianchi:
        system = bianchi_system(family.constants, convention)
    else:
        system = reduced_system(family, convention)
    local = argparse.Namespace(t_max=t_max, rtol=args.rtol, atol=args.atol)
    traj = integrate(system, y0, _integrator_options(local))
    # deviation is measured at the accepted steps: that is the integrator's
    # own output, free of dense-output interpolation error
    worst = 0.0
    for t, state in zip(traj.ts, traj.ys):
        ref = oracle.at(float(t))
        for lhs, rhs in zip(state, ref):
            worst = max(worst, abs(lhs - rhs) / max(1e-300, abs(rhs)))
    doc = {
        "class": args.geometry,
        "convention": convention.value,
        "t_checked": float(traj.t_final),
        "samples": len(traj.ts),
        "stop_reason": str(traj.stop),
        "max_rel_deviation": worst,
    }
    _write_text(args.out, dumps17(doc))
    return 0


def _parse_grid(text: str, dims: int):
    try:
        counts = [int(v) for v in text.lower().split("x")]
    except ValueError:
        raise DomainError(f"could not parse grid {text!r}")
    if len(counts) != dims or any(n < 1 for n in counts):
        raise DomainError(f"grid must have {dims} positive counts, got {text!r}")
    return counts


def _parse_range(text: str):
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise DomainError(f"could not parse range {text!r}; expected LO:HI")
    if not (lo > 0 and hi > lo):
        raise DomainError("range must satisfy 0 < LO < HI")
    return lo, hi


def cmd_sweep(args) -> int:
    family = _family(args)
    convention = _convention(args, family)
    dims = family.dimension()
    counts = _parse_grid(args.grid, dims)
    lo, hi = _parse_range(args.range)
    axes = [np.linspace(lo, hi, n) for n in counts]
    if family.is_bianchi:
        system = bianchi_system(family.constants, convention, normalized=args.normalized)
        class_name = family.constants.class_name()
    else:
        if args.normalized:
            raise DomainError("--normalized applies to Bianchi classes only")
        system = reduced_system(family, convention)
        class_name = family.tag
    has_invariant = class_name in _INVARIANT_CLASSES
    opts = _integrator_options(args, detect_equilibration=args.normalized or args.detect_equilibration)

    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=-1)
    header = "a0,b0,c0,stop_reason,t_final,steps_accepted,steps_rejected,invariant_drift"
    lines = [header]
    for point in points:
        y0 = tuple(float(v) for v in point)
        traj = integrate(system, y0, opts)
        drift = ""
        if has_invariant:
            m0 = MilnorMetric(*_fill_triple(family, y0))
            m1 = MilnorMetric(*_fill_triple(family, traj.y_final))
            c0 = conserved(class_name, m0)
            drift = fmt17(abs(conserved(class_name, m1) / c0 - 1.0))
        triple0 = _fill_triple(family, y0)
        lines.append(",".join([fmt17(triple0[0]), fmt17(triple0[1]), fmt17(triple0[2]),
                               str(traj.stop), fmt17(traj.t_final),
                               str(traj.steps_accepted), str(traj.steps_rejected), drift]))
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common_flow_flags(p):
    p.add_argument("--metric", required=True,
                   help="comma-separated initial coefficients, e.g. 2,1.5,1")
    p.add_argument("--convention", choices=["frame", "metric"], default=None,
                   help="flow convention (default: frame for Bianchi, metric for reduced)")
    p.add_argument("--t-max", type=float, default=10.0, dest="t_max")
    p.add_argument("--rtol", type=float, default=1e-10)
    p.add_argument("--atol", type=float, default=1e-12)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--detect-equilibration", action="store_true", dest="detect_equilibration")
    p.add_argument("--equilibration-tol", type=float, default=1e-9, dest="equilibration_tol")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kflow",
        description="Fourth-order curvature flow of homogeneous 3-geometries")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curvature", help="frame/coordinate curvature report for a Bianchi class")
    p.add_argument("--class", dest="geometry", required=True, choices=GEOMETRY_NAMES)
    p.add_argument("--metric", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("flow", help="integrate a flow and emit CSV/JSON (+ optional SVG chart)")
    p.add_argument("--class", dest="geometry", required=True, choices=GEOMETRY_NAMES)
    _add_common_flow_flags(p)
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None)
    p.add_argument("--svg", default=None)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("check", help="run the seeded invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=1000)
    p.add_argument("--inject-fault", action="store_true", dest="inject_fault",
                   help="negative control: corrupt one identity to prove detection")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("symbol", help="principal-symbol diagnostics on random probes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_symbol)

    p = sub.add_parser("oracle-diff", help="compare an integrated flow against its closed form")
    p.add_argument("--class", dest="geometry", required=True, choices=GEOMETRY_NAMES)
    _add_common_flow_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_oracle_diff)

    p = sub.add_parser("sweep", help="run a grid of initial conditions, one summary row each")
    p.add_argument("--class", dest="geometry", required=True, choices=GEOMETRY_NAMES)
    p.add_argument("--grid", required=True, help="axis counts, e.g. 3x3x3")
    p.add_argument("--range", required=True, help="coefficient range LO:HI")
    p.add_argument("--convention", choices=["frame", "metric"], default=None)
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--t-max", type=float, default=10.0, dest="t_max")
    p.add_argument("--rtol", type=float, default=1e-10)
    p.add_argument("--atol", type=float, default=1e-12)
    p.add_argument("--detect-equilibration", action="store_true", dest="detect_equilibration")
    p.add_argument("--equilibration-tol", type=float, default=1e-9, dest="equilibration_tol")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
