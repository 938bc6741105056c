"""Command-line interface.

Subcommands:

  bound      one upper bound: --space plus --d (distance) or --t (cosine
             parameter, products only)
  rate       asymptotic rate curves over a distance grid (Grassmann or
             Stiefel spaces); --plot additionally renders a figure
  verify     Monte-Carlo verification suites
  constants  the analysis constants with their commonly quoted values

Exit codes: 0 success, 1 verification failure, 2 parse/config error,
3 no applicable bound.  Outputs are deterministic for a fixed
configuration and seed: floats are printed with 12 significant digits,
JSON keys are sorted, and grid results are emitted in grid order even
when the evaluation fans out to PACKING_BOUNDS_THREADS workers.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import asymptotic, finite_bounds, harness
from .spaces import (
    Grassmann,
    Projective,
    ProductProjective,
    ProductSphere,
    SpaceParseError,
    Sphere,
    Stiefel,
    parse_space,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NO_BOUND = 3


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return f"{x:.12g}"
    return str(x)


def _round12(obj):
    """Recursively round floats to 12 significant digits for stable output."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}") if math.isfinite(obj) else str(obj)
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dump(payload) -> str:
    return json.dumps(_round12(payload), sort_keys=True, indent=2) + "\n"


def _thread_count() -> int:
    raw = os.environ.get("PACKING_BOUNDS_THREADS", "")
    try:
        return max(int(raw), 1)
    except ValueError:
        return 1


def _parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise SpaceParseError("grid must be <start>:<stop>:<count>")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise SpaceParseError(f"bad grid {text!r}: {exc}") from None
    if count < 1 or (count > 1 and stop <= start):
        raise SpaceParseError("grid must be strictly increasing with count >= 1")
    return np.linspace(start, stop, count)


def cmd_bound(args) -> int:
    space = parse_space(args.space)
    if args.t is not None and not isinstance(
        space, (Sphere, ProductSphere, Projective, ProductProjective)
    ):
        raise SpaceParseError("--t applies to spheres and projective spaces; use --d")
    result = finite_bounds.best_finite_bound(
        space, d=args.d, t=args.t, budget=args.degree_budget
    )
    trivial = not math.isfinite(float(result.value))
    row = result.to_json()
    row["space"] = args.space
    row["d"] = args.d
    row["t"] = args.t
    row["seed"] = args.seed
    row["trivial"] = trivial
    if args.floor and not trivial:
        row["floor"] = result.floor()
    if args.format == "json":
        if trivial:
            row["value"] = None
        _emit(_json_dump(row), args.out)
    else:
        header = "value,method,applicability,space,parameter,seed\n"
        parameter = args.d if args.d is not None else args.t
        value = "inf" if trivial else _fmt(float(result.value))
        line = ",".join(
            [value, result.method, f'"{result.applicability}"', args.space, _fmt(parameter), str(args.seed)]
        )
        _emit(f"# seed={args.seed}\n{header}{line}\n", args.out)
    return EXIT_NO_BOUND if trivial else EXIT_OK


def _rate_points(space, grid) -> list:
    threads = _thread_count()
    if threads == 1 or len(grid) < 2:
        return asymptotic.rate_curve(space, grid)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        chunks = pool.map(lambda d: asymptotic.rate_curve(space, [d]), grid)
        out = []
        for chunk in chunks:  # map preserves grid order regardless of completion
            out.extend(chunk)
        return out


def cmd_rate(args) -> int:
    space = parse_space(args.space)
    if not isinstance(space, (Grassmann, Stiefel)):
        raise SpaceParseError("rate curves are defined for grassmann and stiefel spaces")
    grid = _parse_grid(args.grid)
    points = _rate_points(space, grid)
    if args.format == "json":
        payload = {
            "seed": args.seed,
            "space": args.space,
            "points": [
                {"d": p.d, "method": p.method, "rate": p.rate, "m": p.m, "c": p.c, "params": p.params}
                for p in points
            ],
        }
        text = _json_dump(payload)
    else:
        lines = [f"# seed={args.seed}", "d,method,rate,m,c,params"]
        lines.extend(
            f"{_fmt(p.d)},{p.method},{_fmt(p.rate)},{p.m},{p.c},{p.params}" for p in points
        )
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    if args.plot is not None:
        from . import plotting

        path = args.plot
        if not path:
            path = (os.path.splitext(args.out)[0] + ".png") if args.out else "rate.png"
        plotting.render_rate_figure(points, path, title=args.space)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = harness.run_verification(
        samples=args.samples, seed=args.seed, recurrence_fault=args.inject_recurrence_fault
    )
    _emit(_json_dump(report), args.out)
    return EXIT_OK if report["passed"] else EXIT_VERIFY_FAILED


QUOTED_CONSTANTS = (
    ("t0_inflection", 0.208),
    ("t1_tangent", 0.379),
    ("slope_at_t1", 1.089),
    ("delta_max_gap", 0.016),
    ("crossing_alpha_deg", 63.0),
)


def cmd_constants(args) -> int:
    t1, slope = asymptotic.tangent_t1()
    computed = {
        "t0_inflection": asymptotic.inflection_t0(),
        "t1_tangent": t1,
        "slope_at_t1": slope,
        "delta_max_gap": asymptotic.delta_max_gap(),
        "crossing_alpha_deg": math.degrees(asymptotic.crossing_alpha()),
    }
    rows = [
        {"name": name, "computed": computed[name], "quoted": quoted, "delta": computed[name] - quoted}
        for name, quoted in QUOTED_CONSTANTS
    ]
    if args.format == "json":
        _emit(_json_dump({"seed": args.seed, "constants": rows}), args.out)
    else:
        lines = [f"# seed={args.seed}", "name,computed,quoted,delta"]
        lines.extend(
            f"{r['name']},{_fmt(r['computed'])},{_fmt(r['quoted'])},{_fmt(r['delta'])}" for r in rows
        )
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="packing-bounds",
        description="Upper bounds for codes in spheres, projective spaces, "
        "their products, and Grassmann/Stiefel manifolds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p) -> None:
        p.add_argument("--format", choices=("csv", "json"), default="json")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=0, help="RNG seed, recorded in the output")

    p_bound = sub.add_parser("bound", help="one finite upper bound")
    p_bound.add_argument("--space", required=True)
    group = p_bound.add_mutually_exclusive_group(required=True)
    group.add_argument("--d", type=float, help="minimum distance (angular for products)")
    group.add_argument("--t", type=float, help="cosine parameter (products only)")
    p_bound.add_argument("--degree-budget", type=int, default=16)
    p_bound.add_argument("--floor", action="store_true", help="also report the floored count")
    common(p_bound)
    p_bound.set_defaults(func=cmd_bound)

    p_rate = sub.add_parser("rate", help="asymptotic rate curves over a distance grid")
    p_rate.add_argument("--space", required=True)
    p_rate.add_argument("--grid", required=True, help="<start>:<stop>:<count>")
    p_rate.add_argument(
        "--plot",
        nargs="?",
        const="",
        default=None,
        help="also render a figure (optional path; defaults next to --out)",
    )
    common(p_rate)
    p_rate.set_defaults(func=cmd_rate)

    p_verify = sub.add_parser("verify", help="run the Monte-Carlo verification suites")
    p_verify.add_argument("--samples", type=int, default=10000)
    p_verify.add_argument(
        "--inject-recurrence-fault",
        type=float,
        default=0.0,
        metavar="EPS",
        help="perturb the evaluation recurrence (harness self-test)",
    )
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_const = sub.add_parser("constants", help="analysis constants vs their quoted values")
    common(p_const)
    p_const.set_defaults(func=cmd_constants)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpaceParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, finite_bounds.Inapplicable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except finite_bounds.Infeasible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_BOUND


if __name__ == "__main__":
    sys.exit(main())
