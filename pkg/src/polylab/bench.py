"""Accuracy sweeps across problem families, with CSV and SVG emitters.

A sweep fixes a method and a family, varies one axis (coupling strength,
scale parameter, or dimension), and records the median digits of accuracy
of the designated root estimate over seeded trials, next to the digit
counts predicted by the subproblem and root condition numbers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import conditioning
from .conditioning import theory_digits
from .families import FamilySpec, generate, true_root_error
from .macaulay import RankDeficientBasis
from .numkernel import SingularPencil
from .solvers import (
    EigenvectorDegenerate,
    NullityMismatch,
    SingularDelta0,
    UnsupportedShape,
    mep_from_system,
    solve_gb_elimination_example,
    solve_macaulay_resultant,
    solve_mep_operator_determinants,
    solve_normal_form,
    solve_rur_example,
)

SOLVER_FAILURES = (
    NullityMismatch,
    SingularDelta0,
    EigenvectorDegenerate,
    UnsupportedShape,
    SingularPencil,
    RankDeficientBasis,
    conditioning.BasisSingular,
    conditioning.SingularJacobian,
    conditioning.MultipleRoot,
    np.linalg.LinAlgError,
)


def digits_of_accuracy(err) -> float:
    """min(16, max(0, -log10 err)); an exact answer counts as 16 digits."""
    if err is None or not math.isfinite(err):
        return 0.0
    if err <= 0.0:
        return 16.0
    return float(min(16.0, max(0.0, -math.log10(err))))


@dataclass(frozen=True)
class SweepSpec:
    """One benchmark curve: a method, a family, and a varied axis."""

    name: str
    method: str  # gb | rur | nf | macaulay | mep
    family: str
    axis: str  # sigma | c | d
    values: tuple
    d: int | None = None
    sigma: float | None = None
    c: float | None = None
    shift: tuple | None = None
    n_trials: int = 100
    seed: int = 1
    polish: bool = False


@dataclass(frozen=True)
class SweepRecord:
    x: float
    median_digits: float
    theory_digits: float
    stable_digits: float
    n_trials: int


def _resolve_params(spec: SweepSpec, x) -> dict:
    d = int(x) if spec.axis == "d" else int(spec.d)
    params = {"d": d}
    if spec.axis == "sigma":
        params["sigma"] = float(x)
    elif spec.sigma is not None:
        params["sigma"] = float(spec.sigma)
    if spec.axis == "c":
        params["c"] = float(x)
    elif spec.c is not None:
        params["c"] = float(spec.c)
    return params


def _broadcast_shift(shift, d: int):
    """Presets give one shift value; d-axis sweeps need it repeated per coordinate."""
    if shift is None:
        return None
    if len(shift) != d:
        return (shift[0],) * d
    return tuple(shift)


def _trial_error(spec: SweepSpec, x, rng: np.random.Generator) -> float:
    params = _resolve_params(spec, x)
    d = params["d"]
    shift = _broadcast_shift(spec.shift, d)
    if spec.method == "gb":
        _, report = solve_gb_elimination_example(
            d, params["sigma"], shift=shift[0] if shift else 0.0
        )
        return float(report.diagnostics["error"])
    if spec.method == "rur":
        u = np.abs(rng.standard_normal(d))
        u /= np.linalg.norm(u)
        _, report = solve_rur_example(d, params["c"], u, shift=shift)
        return float(report.diagnostics["error"])
    fspec = FamilySpec(
        family=spec.family,
        d=d,
        sigma=params.get("sigma"),
        c=params.get("c"),
        seed=spec.seed,
        shift=shift,
    )
    s = generate(fspec, rng=rng)
    target = np.array(shift, dtype=complex) if shift else np.zeros(d, dtype=complex)
    if spec.method == "nf":
        report = solve_normal_form(s, rng=rng, polish=spec.polish)
    elif spec.method == "macaulay":
        report = solve_macaulay_resultant(s, rng=rng, polish=spec.polish)
    elif spec.method == "mep":
        report = solve_mep_operator_determinants(
            mep_from_system(s), system=s, polish=spec.polish
        )
    else:
        raise ValueError(f"unknown method {spec.method!r}")
    return true_root_error(report, [target])


def _one_trial_digits(spec: SweepSpec, idx: int, x, trial: int) -> float:
    rng = np.random.default_rng(np.random.SeedSequence([spec.seed, idx, trial]))
    try:
        err = _trial_error(spec, x, rng)
    except SOLVER_FAILURES:
        err = math.inf
    return digits_of_accuracy(err)


def _point_record(spec: SweepSpec, idx: int, x, pool=None) -> SweepRecord:
    trials = range(spec.n_trials)
    if pool is not None:
        digits = list(pool.map(lambda t: _one_trial_digits(spec, idx, x, t), trials))
    else:
        digits = [_one_trial_digits(spec, idx, x, t) for t in trials]
    params = _resolve_params(spec, x)
    return SweepRecord(
        x=float(x),
        median_digits=float(np.median(digits)),
        theory_digits=_theory_or_nan(spec.method, spec.family, params),
        stable_digits=_theory_or_nan("stable", spec.family, params),
        n_trials=spec.n_trials,
    )


def _theory_or_nan(method: str, family: str, params: dict) -> float:
    # Custom sweeps may pair a method with a family that has no growth law.
    try:
        return theory_digits(method, family, params)
    except ValueError:
        return float("nan")


def run_sweep(spec: SweepSpec) -> list:
    """All records for one sweep. Trials are independently seeded and
    aggregated by trial index, so results do not depend on execution order;
    POLYLAB_THREADS > 1 runs the trials of each axis point in a thread pool.
    """
    workers = int(os.environ.get("POLYLAB_THREADS", "1"))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return [_point_record(spec, idx, x, pool=pool) for idx, x in enumerate(spec.values)]
    return [_point_record(spec, idx, x) for idx, x in enumerate(spec.values)]


_SIGMAS = tuple(10.0**-k for k in range(8, -1, -1))
_THIRD = 1.0 / 3.0

FIGURES = {
    "1c": SweepSpec(
        name="1c", method="gb", family="cyclic_squares", axis="sigma",
        values=_SIGMAS, d=2, shift=(_THIRD, _THIRD), n_trials=1,
    ),
    "1d": SweepSpec(
        name="1d", method="rur", family="hypercube", axis="c",
        values=tuple(10.0**k for k in range(9)), d=2, shift=(_THIRD, _THIRD),
    ),
    "1e": SweepSpec(
        name="1e", method="mep", family="orthogonal", axis="sigma",
        values=_SIGMAS, d=2, shift=(_THIRD, _THIRD),
    ),
    "1f": SweepSpec(
        name="1f", method="nf", family="orthogonal", axis="sigma",
        values=_SIGMAS, d=2, shift=(_THIRD, _THIRD),
    ),
    "1g": SweepSpec(
        name="1g", method="macaulay", family="orthogonal", axis="sigma",
        values=_SIGMAS, d=2, shift=(_THIRD, _THIRD),
    ),
    "2": SweepSpec(
        name="2", method="gb", family="cyclic_squares", axis="d",
        values=(2, 3, 4, 5, 6), sigma=0.5, shift=(_THIRD,), n_trials=1,
    ),
    "3": SweepSpec(
        name="3", method="mep", family="permutation", axis="d",
        values=(2, 3, 4, 5, 6), sigma=1e-2, shift=(_THIRD,),
    ),
    "4a": SweepSpec(
        name="4a", method="nf", family="notdev2d", axis="sigma",
        values=_SIGMAS, d=2, shift=(_THIRD, _THIRD),
    ),
    "4b": SweepSpec(
        name="4b", method="macaulay", family="notdev2d", axis="sigma",
        values=_SIGMAS, d=2, shift=(_THIRD, _THIRD),
    ),
    "5": SweepSpec(
        name="5", method="nf", family="notdev3d", axis="sigma",
        values=_SIGMAS, d=3,
    ),
}


def with_overrides(spec: SweepSpec, n_trials=None, seed=None) -> SweepSpec:
    if n_trials is not None:
        spec = replace(spec, n_trials=int(n_trials))
    if seed is not None:
        spec = replace(spec, seed=int(seed))
    return spec


# ---------------------------------------------------------------------------
# serialization

CSV_HEADER = "x,median_digits,theory_digits,stable_digits,n_trials"


def emit_csv(records: list, path) -> None:
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            "%.17g,%.17g,%.17g,%.17g,%d"
            % (r.x, r.median_digits, r.theory_digits, r.stable_digits, r.n_trials)
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path) -> list:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("unrecognized sweep csv header")
    records = []
    for ln in lines[1:]:
        parts = ln.split(",")
        records.append(
            SweepRecord(
                x=float(parts[0]),
                median_digits=float(parts[1]),
                theory_digits=float(parts[2]),
                stable_digits=float(parts[3]),
                n_trials=int(parts[4]),
            )
        )
    return records


# ---------------------------------------------------------------------------
# plotting

_SVG_W, _SVG_H = 640, 420
_ML, _MR, _MT, _MB = 62, 20, 42, 52
_SERIES = (
    ("median_digits", "#1f6fb2", "measured", ""),
    ("theory_digits", "#c23b3b", "predicted", "7 4"),
    ("stable_digits", "#3b9a54", "well-conditioned", "2 3"),
)


def _x_positions(xs: list, log_x: bool) -> list:
    if log_x:
        ts = [math.log10(x) for x in xs]
    else:
        ts = list(xs)
    lo, hi = min(ts), max(ts)
    span = hi - lo if hi > lo else 1.0
    inner = _SVG_W - _ML - _MR
    return [_ML + (t - lo) / span * inner for t in ts]


def _y_position(digits: float) -> float:
    inner = _SVG_H - _MT - _MB
    return _MT + (1.0 - min(16.0, max(0.0, digits)) / 16.0) * inner


def _fmt_x(x: float, log_x: bool) -> str:
    if log_x:
        return "1e%d" % round(math.log10(x))
    return "%g" % x


def emit_svg(records: list, path, title: str = "", xlabel: str = "", log_x: bool = True) -> None:
    """Single-panel digits-vs-axis chart with the three series as polylines."""
    xs = [r.x for r in records]
    if log_x and min(xs) <= 0:
        log_x = False
    px = _x_positions(xs, log_x)
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d">' % (_SVG_W, _SVG_H, _SVG_W, _SVG_H),
        '<rect width="%d" height="%d" fill="white"/>' % (_SVG_W, _SVG_H),
    ]
    if title:
        parts.append(
            '<text x="%d" y="24" font-family="sans-serif" font-size="15" '
            'text-anchor="middle">%s</text>' % (_SVG_W // 2, title)
        )
    ax_bottom = _SVG_H - _MB
    parts.append(
        '<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="black"/>'
        % (_ML, ax_bottom, _SVG_W - _MR, ax_bottom)
    )
    parts.append(
        '<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="black"/>' % (_ML, _MT, _ML, ax_bottom)
    )
    for yv in (0, 4, 8, 12, 16):
        yy = _y_position(yv)
        parts.append(
            '<line x1="%d" y1="%.2f" x2="%d" y2="%.2f" stroke="#cccccc" '
            'stroke-width="0.5"/>' % (_ML, yy, _SVG_W - _MR, yy)
        )
        parts.append(
            '<text x="%d" y="%.2f" font-family="sans-serif" font-size="11" '
            'text-anchor="end">%d</text>' % (_ML - 8, yy + 4, yv)
        )
    for x, xp in zip(xs, px):
        parts.append(
            '<line x1="%.2f" y1="%d" x2="%.2f" y2="%d" stroke="black"/>'
            % (xp, ax_bottom, xp, ax_bottom + 4)
        )
        parts.append(
            '<text x="%.2f" y="%d" font-family="sans-serif" font-size="10" '
            'text-anchor="middle">%s</text>' % (xp, ax_bottom + 17, _fmt_x(x, log_x))
        )
    if xlabel:
        parts.append(
            '<text x="%d" y="%d" font-family="sans-serif" font-size="12" '
            'text-anchor="middle">%s</text>'
            % ((_ML + _SVG_W - _MR) // 2, _SVG_H - 12, xlabel)
        )
    parts.append(
        '<text x="16" y="%d" font-family="sans-serif" font-size="12" '
        'text-anchor="middle" transform="rotate(-90 16 %d)">digits of accuracy</text>'
        % ((_MT + ax_bottom) // 2, (_MT + ax_bottom) // 2)
    )
    for attr, color, label, dash in _SERIES:
        kept = [(xp, r) for xp, r in zip(px, records) if math.isfinite(getattr(r, attr))]
        if not kept:
            continue
        pts = " ".join("%.2f,%.2f" % (xp, _y_position(getattr(r, attr))) for xp, r in kept)
        dash_attr = ' stroke-dasharray="%s"' % dash if dash else ""
        parts.append(
            '<polyline points="%s" fill="none" stroke="%s" stroke-width="1.8"%s/>'
            % (pts, color, dash_attr)
        )
        for xp, r in kept:
            parts.append(
                '<circle cx="%.2f" cy="%.2f" r="2.2" fill="%s"/>'
                % (xp, _y_position(getattr(r, attr)), color)
            )
    ly = _MT + 8
    for attr, color, label, dash in _SERIES:
        dash_attr = ' stroke-dasharray="%s"' % dash if dash else ""
        parts.append(
            '<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="%s" stroke-width="1.8"%s/>'
            % (_SVG_W - _MR - 150, ly, _SVG_W - _MR - 120, ly, color, dash_attr)
        )
        parts.append(
            '<text x="%d" y="%d" font-family="sans-serif" font-size="11">%s</text>'
            % (_SVG_W - _MR - 112, ly + 4, label)
        )
        ly += 16
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


def axis_label(spec: SweepSpec) -> str:
    return {"sigma": "coupling strength", "c": "scale parameter", "d": "dimension"}[spec.axis]
