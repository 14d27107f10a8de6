"""Command line for generating systems, solving them, auditing conditioning,
running benchmark sweeps, and verifying the numerical identities.

Subcommands: gen, solve, audit, sweep, verify. All output is JSON except
sweep, which writes CSV and SVG files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import bench, verification
from .conditioning import ConditionReport, kappa_eig_macaulay_bound, kappa_eig_mep_formula, kappa_eig_ms_formula, kappa_root
from .families import FAMILIES, FamilySpec, generate
from .macaulay import linear_poly, macaulay_pencil
from .polycore import PolySystem
from .solvers import (
    UnsupportedShape,
    build_ms_matrices,
    mep_from_system,
    solve_macaulay_resultant,
    solve_mep_operator_determinants,
    solve_normal_form,
)

METHODS = ("nf", "macaulay", "mep")


def _parse_shift(text: str | None):
    if text is None:
        return None
    return tuple(float(v) for v in text.split(","))


def _parse_root(text: str):
    return np.array([complex(v.strip().replace(" ", "")) for v in text.split(",")])


def _load_system(path: str) -> PolySystem:
    if path == "-":
        data = json.load(sys.stdin)
    else:
        with open(path) as fh:
            data = json.load(fh)
    return PolySystem.from_json_dict(data)


def _emit(obj: dict, path: str) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path == "-":
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _cmd_gen(args) -> int:
    spec = FamilySpec(
        family=args.family,
        d=args.d,
        sigma=args.sigma,
        c=args.c,
        seed=args.seed,
        shift=_parse_shift(args.shift),
    )
    s = generate(spec)
    _emit(s.to_json_dict(), args.out)
    return 0


def _cmd_solve(args) -> int:
    s = _load_system(args.system)
    rng = np.random.default_rng(args.seed)
    if args.method == "nf":
        report = solve_normal_form(s, rng=rng, polish=args.polish)
    elif args.method == "macaulay":
        report = solve_macaulay_resultant(s, rng=rng, polish=args.polish)
    else:
        report = solve_mep_operator_determinants(mep_from_system(s), system=s, polish=args.polish)
    _emit(report.to_json_dict(), args.out)
    return 0


def _audit_one(s: PolySystem, x, method: str, seed: int) -> ConditionReport:
    kr = kappa_root(s, x)
    if method == "nf":
        _, basis, N = build_ms_matrices(s)
        ks = max(kappa_eig_ms_formula(s, x, basis, i, N) for i in range(s.d))
    elif method == "mep":
        mep = mep_from_system(s)
        ks = max(kappa_eig_mep_formula(mep, s, x, i) for i in range(s.d))
    else:
        pencil = macaulay_pencil(s, np.random.default_rng(seed))
        h = linear_poly(s.d, pencil.beta)
        ks = kappa_eig_macaulay_bound(
            s, x, pencil.kept_h_monomials, h, pencil.gep.col_labels
        )
    return ConditionReport.make(kr, ks, method)


def _cmd_audit(args) -> int:
    s = _load_system(args.system)
    if args.root is not None:
        x = _parse_root(args.root)
    else:
        if not s.true_roots:
            print("system has no stored roots; pass --root", file=sys.stderr)
            return 1
        x = np.array(s.true_roots[args.root_index])
    methods = METHODS if args.method == "all" else (args.method,)
    out = {}
    for m in methods:
        try:
            out[m] = _audit_one(s, x, m, args.seed).to_json_dict()
        except UnsupportedShape as exc:
            if args.method != "all":
                print(f"method {m} does not apply: {exc}", file=sys.stderr)
                return 1
            out[m] = {"method": m, "unsupported": str(exc)}
    _emit(out if args.method == "all" else out[args.method], args.out)
    return 0


def _figure_names(choice: str) -> list:
    if choice == "all":
        return list(bench.FIGURES)
    if choice == "4":
        return ["4a", "4b"]
    return [choice]


def _custom_spec(args) -> bench.SweepSpec:
    missing = [flag for flag in ("method", "family", "axis", "values") if getattr(args, flag) is None]
    if missing:
        raise SystemExit(f"--custom requires --{', --'.join(missing)}")
    return bench.SweepSpec(
        name="custom",
        method=args.method,
        family=args.family,
        axis=args.axis,
        values=tuple(float(v) for v in args.values.split(",")),
        d=args.d,
        sigma=args.sigma,
        c=args.c,
        shift=_parse_shift(args.shift),
        n_trials=args.trials if args.trials is not None else 100,
        seed=args.seed if args.seed is not None else 1,
        polish=args.polish,
    )


def _cmd_sweep(args) -> int:
    if args.custom:
        specs = [_custom_spec(args)]
    elif args.figure is not None:
        specs = [
            bench.with_overrides(bench.FIGURES[n], n_trials=args.trials, seed=args.seed)
            for n in _figure_names(args.figure)
        ]
    else:
        raise SystemExit("pass --figure or --custom")
    os.makedirs(args.out, exist_ok=True)
    for spec in specs:
        records = bench.run_sweep(spec)
        csv_path = os.path.join(args.out, f"fig{spec.name}.csv")
        svg_path = os.path.join(args.out, f"fig{spec.name}.svg")
        bench.emit_csv(records, csv_path)
        bench.emit_svg(
            records,
            svg_path,
            title=f"{spec.method} on {spec.family}",
            xlabel=bench.axis_label(spec),
            log_x=spec.axis != "d",
        )
        print(f"wrote {csv_path} and {svg_path}")
    return 0


def _cmd_verify(args) -> int:
    names = tuple(verification.SUITES) if args.suite == "all" else (args.suite,)
    results = verification.run_all(seed=args.seed, names=names)
    out = {r.name: {"passed": r.passed, "details": r.details} for r in results}
    print(json.dumps(out, indent=2, sort_keys=True, default=float))
    return 0 if all(r.passed for r in results) else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="polylab",
        description="Benchmark eigenvalue-based multivariate polynomial rootfinders.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a structured polynomial system as JSON")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--shift", type=str, default=None, help="comma-separated root shift")
    p.add_argument("--out", type=str, default="-")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("solve", help="solve a system JSON with one method")
    p.add_argument("--system", required=True, help="path to gen output, or - for stdin")
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--polish", action="store_true")
    p.add_argument("--out", type=str, default="-")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("audit", help="compare root vs subproblem conditioning at a root")
    p.add_argument("--system", required=True)
    p.add_argument("--method", default="all", choices=METHODS + ("all",))
    p.add_argument("--root", type=str, default=None, help="comma-separated complex root")
    p.add_argument("--root-index", type=int, default=0)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", type=str, default="-")
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("sweep", help="run a benchmark sweep and write CSV + SVG")
    p.add_argument(
        "--figure",
        default=None,
        choices=tuple(bench.FIGURES) + ("4", "all"),
        help="preset sweep; 4 runs both 4a and 4b",
    )
    p.add_argument("--custom", action="store_true", help="build the sweep from flags instead")
    p.add_argument("--method", default=None, choices=("gb", "rur", "mep", "nf", "macaulay"))
    p.add_argument("--family", default=None, choices=FAMILIES)
    p.add_argument("--axis", default=None, choices=("sigma", "c", "d"))
    p.add_argument("--values", default=None, help="comma-separated axis values")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--shift", type=str, default=None, help="comma-separated root shift")
    p.add_argument("--polish", action="store_true")
    p.add_argument("--out", type=str, default="out")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("verify", help="run the numerical identity audits, report JSON")
    p.add_argument("--suite", default="all", choices=tuple(verification.SUITES) + ("all",))
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=_cmd_verify)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
