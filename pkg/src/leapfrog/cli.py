"""Command-line interface.

Every subcommand writes either CSV (one header row, ``\\n`` line endings) or
JSON (fixed key order) to ``--output`` or stdout. Floats are written with
``repr``, the shortest string that reads back to the same double, so equal
inputs give byte-identical output. Invalid input exits with status 2 and a
JSON error object on stderr; a failure during computation exits with status
1 after flushing whatever output was produced.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from contextlib import contextmanager

import numpy as np

from . import __version__
from .core import ModelParams, PhysicalState, ReducedState, Regime, reduced_to_physical
from .errors import ComputationError, InvalidInput, LeapfrogError, SingularityApproach, StepSizeUnderflow
from .filament3d import circular_components, pde_rhs, sample_circular_pair
from .fullode import (
    ParallelSetup,
    augmented_system,
    augmented_to_physical,
    parallel_exact,
    physical_rates,
    pointvortex_system,
)
from .integrate import Termination, integrate
from .portrait import hamiltonian_grid
from .reduced import classify, classify_physical, equilibria, hamiltonian, hamiltonian_fn

PHYSICAL_FLAGS = ("gamma1", "gamma2", "r1", "z1", "r2", "z2")
REDUCED_FLAGS = ("theta", "w")


class UsageError(InvalidInput):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _num(x):
    """JSON-safe float: non-finite values become null."""
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


@contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _write_csv(fh, header, rows):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])


# input handling


def _add_model_flags(p, physical=True, reduced=True):
    g = p.add_argument_group("model")
    g.add_argument("--alpha", type=float, required=True, help="interaction coefficient")
    g.add_argument("--regime", choices=[r.value for r in Regime])
    g.add_argument("--beta", type=float, help="strength ratio for equal signs (>= 1)")
    g.add_argument("--gamma", type=float, help="strength ratio magnitude for opposite signs (>= 1)")
    g.add_argument("--d", type=float, help="invariant scale")
    if reduced:
        g.add_argument("--theta", type=float, help="reduced angle theta0")
        g.add_argument("--w", type=float, help="axial separation w0 = z1 - z2")
    if physical:
        g = p.add_argument_group("physical input")
        for name in PHYSICAL_FLAGS:
            g.add_argument(f"--{name}", type=float)


def _params(args) -> ModelParams:
    regime = args.regime
    if regime is None:
        if (args.beta is None) == (args.gamma is None):
            raise UsageError("give exactly one of --beta or --gamma (or --regime)")
        regime = "same" if args.beta is not None else "opposite"
    ratio = args.beta if regime == "same" else args.gamma
    if ratio is None:
        raise UsageError(f"--{'beta' if regime == 'same' else 'gamma'} is required for regime {regime}")
    if args.d is None:
        raise UsageError("--d is required with reduced inputs")
    return ModelParams(Regime(regime), args.alpha, ratio, args.d)


def _mode(args) -> str:
    phys = [getattr(args, n, None) is not None for n in PHYSICAL_FLAGS]
    red = [getattr(args, n, None) is not None for n in REDUCED_FLAGS]
    if any(phys) and (any(red) or args.d is not None or args.beta is not None or args.gamma is not None):
        raise UsageError("give either reduced inputs or physical inputs, not both")
    if any(phys):
        if not all(phys):
            missing = [n for n, given in zip(PHYSICAL_FLAGS, phys) if not given]
            raise UsageError("missing physical inputs: " + ", ".join("--" + m for m in missing))
        return "physical"
    if not all(red):
        raise UsageError("give --theta and --w, or the physical inputs --gamma1 --gamma2 --r1 --z1 --r2 --z2")
    return "reduced"


def _physical(args) -> PhysicalState:
    return PhysicalState(args.r1, args.z1, args.r2, args.z2)


# subcommands


def cmd_equilibria(args, out):
    report = equilibria(_params(args))
    out.write(dumps({"params": _params(args).to_dict(), **{k: _num(v) for k, v in report.to_dict().items() if k != "regime"}}))


def cmd_classify(args, out):
    if _mode(args) == "physical":
        setup, verdict = classify_physical(args.gamma1, args.gamma2, _physical(args), args.alpha)
        canonical = setup.to_dict() if setup else None
        params = setup.params if setup else None
    else:
        params = _params(args)
        red = ReducedState(args.theta, args.w)
        verdict = classify(red, params)
        canonical = {"params": params.to_dict(), "theta0": red.theta, "w0": red.w,
                     "swapped": False, "mirrored": False, "time_scale": 1.0}
    eq = None
    if params is not None and verdict.hamiltonian is not None:
        eq = {k: _num(v) if k != "regime" else v for k, v in equilibria(params).to_dict().items()}
    doc = {
        "kind": verdict.kind.value,
        "hamiltonian": _num(verdict.hamiltonian),
        "threshold": _num(verdict.threshold),
        "detail": verdict.detail,
        "equilibria": eq,
        "canonical": canonical,
    }
    out.write(dumps(doc))


SIM_HEADER = ["t", "theta", "W", "R1", "R2", "z1", "z2", "H", "drift"]


def cmd_simulate(args, out):
    if _mode(args) == "physical":
        setup, _ = classify_physical(args.gamma1, args.gamma2, _physical(args), args.alpha)
        if setup is None:
            raise InvalidInput("the opposite-sign invariant is not positive; no reduced system exists")
        params, red, phys0 = setup.params, setup.reduced0, setup.physical0
        z1, z2 = phys0.z1, phys0.z2
        canonical = setup.to_dict()
    else:
        params = _params(args)
        red = ReducedState(args.theta, args.w)
        z1, z2 = red.w, 0.0
        canonical = {"params": params.to_dict(), "theta0": red.theta, "w0": red.w,
                     "swapped": False, "mirrored": False, "time_scale": 1.0}
    h0 = hamiltonian(red, params)
    reduced_to_physical(red, params)
    if not args.t_end > 0:
        raise UsageError("--t-end must be positive")

    fun, guard = augmented_system(params)
    hfun = hamiltonian_fn(params)
    traj = integrate(fun, [red.theta, red.w, z1, z2], args.t_end, args.rtol, args.atol,
                     monitors=[lambda y: float(hfun(y[0], y[1]))], guard=guard)
    if args.samples:
        end = traj.times[-1]
        times = np.linspace(0.0, end, args.samples) if end > 0 else traj.times[:1]
        states = [traj(t) if 0 < t < end else traj.states[0 if t == 0 else -1] for t in times]
    else:
        times, states = traj.times, traj.states

    rows = []
    for t, y in zip(times, states):
        ph = augmented_to_physical(y, params)
        h = float(hfun(y[0], y[1]))
        rows.append([float(t), float(y[0]), float(y[1]), ph.r1, ph.r2, ph.z1, ph.z2, h, abs(h - h0) / abs(h0) if h0 else abs(h - h0)])
    meta = {"canonical": canonical, "termination": traj.termination.value,
            "t_final": float(traj.times[-1]), "steps": len(traj.times) - 1,
            "hamiltonian_drift": traj.hamiltonian_drift}
    if args.format == "json":
        out.write(dumps({**meta, "columns": SIM_HEADER, "rows": [[_num(v) for v in r] for r in rows]}))
    else:
        _write_csv(out, SIM_HEADER, rows)
    out.flush()
    if traj.termination is Termination.SINGULARITY:
        raise SingularityApproach(f"trajectory reached the coincidence point at t={traj.times[-1]!r}", meta)
    if traj.termination is Termination.UNDERFLOW:
        raise StepSizeUnderflow(f"step size underflow at t={traj.times[-1]!r}", meta)


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except ValueError:
        raise UsageError(f"--grid expects WxH, got {text!r}") from None


def _parse_range(text):
    if text is None:
        return None
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"range expects LO,HI, got {text!r}") from None
    return a, b


def cmd_portrait(args, out):
    params = _params(args)
    grid = hamiltonian_grid(params, _parse_range(args.theta_range), _parse_range(args.w_range), _parse_grid(args.grid))
    meta = {
        "params": params.to_dict(),
        "n_theta": len(grid.theta_axis),
        "n_w": len(grid.w_axis),
        "theta_min": float(grid.theta_axis[0]),
        "theta_max": float(grid.theta_axis[-1]),
        "w_min": float(grid.w_axis[0]),
        "w_max": float(grid.w_axis[-1]),
        "threshold": _num(grid.threshold),
        "counts": grid.counts(),
    }
    header = ["theta", "w", "value", "verdict", "motion"]
    values = grid.values.filled(np.nan)

    def rows():
        for i, w in enumerate(grid.w_axis):
            for j, th in enumerate(grid.theta_axis):
                v = None if grid.values.mask[i, j] else float(values[i, j])
                yield [float(th), float(w), v, grid.verdicts[i, j], grid.motions[i, j]]

    if args.format == "json":
        out.write(dumps({"metadata": meta, "columns": header, "rows": [[_num(c) if isinstance(c, float) else c for c in r] for r in rows()]}))
    else:
        _write_csv(out, header, rows())
    if args.metadata:
        with _sink(args.metadata) as fh:
            fh.write(dumps(meta))


PAR_HEADER = ["t", "x1_exact", "y1_exact", "x2_exact", "y2_exact",
              "x1_numeric", "y1_numeric", "x2_numeric", "y2_numeric", "error"]


def cmd_parallel(args, out):
    setup = ParallelSetup(args.gamma1, args.gamma2, args.alpha, complex(args.x1, args.y1), complex(args.x2, args.y2))
    t_end = args.t_end
    if t_end is None:
        t_end = 2 * math.pi / abs(setup.omega) if setup.center_c is not None else 100.0
    traj = integrate(pointvortex_system(setup), [args.x1, args.y1, args.x2, args.y2], t_end, args.rtol, args.atol)
    rows = []
    for t in np.linspace(0.0, float(traj.times[-1]), args.samples):
        y = traj(t) if t > 0 else traj.states[0]
        e1, e2 = parallel_exact(t, setup)
        err = max(abs(complex(y[0], y[1]) - e1), abs(complex(y[2], y[3]) - e2))
        rows.append([float(t), e1.real, e1.imag, e2.real, e2.imag, *map(float, y), err])
    if args.format == "json":
        meta = {"omega": setup.omega, "dist_d": setup.dist_d,
                "center": None if setup.center_c is None else [setup.center_c.real, setup.center_c.imag],
                "t_end": t_end, "max_error": max(r[-1] for r in rows)}
        out.write(dumps({**meta, "columns": PAR_HEADER, "rows": [[_num(v) for v in r] for r in rows]}))
    else:
        _write_csv(out, PAR_HEADER, rows)


def cmd_pdecheck(args, out):
    if _mode_pde(args) == "physical":
        setup, _ = classify_physical(args.gamma1, args.gamma2, _physical(args), args.alpha)
        if setup is None:
            raise InvalidInput("the opposite-sign invariant is not positive; no canonical system exists")
        params, phys = setup.params, setup.physical0
    else:
        params = _params(args)
        r1, r2, w = reduced_to_physical(ReducedState(args.theta, args.w), params)
        phys = PhysicalState(r1, w, r2, 0.0)
    ref = physical_rates(phys.r1, phys.z1, phys.r2, phys.z2, params.alpha, params.beta)
    levels = []
    for n in args.n:
        fx, fy = sample_circular_pair(phys, n, params.beta, 1.0)
        rx, ax, zx = circular_components(pde_rhs(fx, fy, params.alpha, args.method), n)
        ry, ay, zy = circular_components(pde_rhs(fy, fx, params.alpha, args.method), n)
        err = max(np.abs(rx - ref[0]).max(), np.abs(zx - ref[1]).max(),
                  np.abs(ry - ref[2]).max(), np.abs(zy - ref[3]).max())
        levels.append({"n": n, "max_error": float(err), "max_azimuthal": float(max(np.abs(ax).max(), np.abs(ay).max()))})
    for prev, cur in zip(levels, levels[1:]):
        ratio = cur["n"] / prev["n"]
        ok = prev["max_error"] > 0 and cur["max_error"] > 0
        cur["order"] = math.log(prev["max_error"] / cur["max_error"]) / math.log(ratio) if ok else None
    doc = {
        "params": params.to_dict(),
        "physical": {"r1": phys.r1, "z1": phys.z1, "r2": phys.r2, "z2": phys.z2},
        "method": args.method,
        "reference": {"dr1": ref[0], "dz1": ref[1], "dr2": ref[2], "dz2": ref[3]},
        "levels": [{k: _num(v) if isinstance(v, float) else v for k, v in lv.items()} for lv in levels],
    }
    out.write(dumps(doc))


def _mode_pde(args):
    if any(getattr(args, n) is not None for n in PHYSICAL_FLAGS):
        return _mode(args)
    if args.theta is None:
        args.theta = (math.pi / 8 if (args.regime or ("same" if args.beta is not None else "opposite")) == "same" else 0.5)
    if args.w is None:
        args.w = 0.3
    return _mode(args)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="leapfrog", description="Leapfrogging of two coaxial circular vortex filaments.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats=("csv", "json"), default="csv"):
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--output", default=None, help="output file (default stdout)")

    def tolerances(sp):
        sp.add_argument("--rtol", type=float, default=1e-10)
        sp.add_argument("--atol", type=float, default=1e-12)

    sp = sub.add_parser("equilibria", help="equilibria and thresholds of the reduced system")
    _add_model_flags(sp, physical=False, reduced=False)
    common(sp, ("json",), "json")
    sp.set_defaults(func=cmd_equilibria)

    sp = sub.add_parser("classify", help="leapfrogging verdict for an initial configuration")
    _add_model_flags(sp)
    common(sp, ("json",), "json")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("simulate", help="integrate one trajectory in the canonical frame")
    _add_model_flags(sp)
    common(sp)
    tolerances(sp)
    sp.add_argument("--t-end", type=float, default=100.0)
    sp.add_argument("--samples", type=int, default=0, help="uniform output samples (default: every accepted step)")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("portrait", help="Hamiltonian grid with verdicts and motion types")
    _add_model_flags(sp, physical=False, reduced=False)
    common(sp)
    sp.add_argument("--grid", default="400x400", help="cells as WxH (theta by w)")
    sp.add_argument("--theta-range", help="LO,HI")
    sp.add_argument("--w-range", help="LO,HI")
    sp.add_argument("--metadata", help="also write JSON metadata to this file")
    sp.set_defaults(func=cmd_portrait)

    sp = sub.add_parser("parallel", help="two parallel filaments: exact vs integrated motion")
    sp.add_argument("--alpha", type=float, required=True)
    for name in ("gamma1", "gamma2", "x1", "y1", "x2", "y2"):
        sp.add_argument(f"--{name}", type=float, required=True)
    sp.add_argument("--t-end", type=float, default=None, help="default: one rotation period, or 100 for translation")
    sp.add_argument("--samples", type=int, default=101)
    common(sp)
    tolerances(sp)
    sp.set_defaults(func=cmd_parallel)

    sp = sub.add_parser("pdecheck", help="discretised filament velocities vs the coaxial-circle field")
    _add_model_flags(sp)
    sp.add_argument("--n", type=int, nargs="+", default=[32, 64, 128, 256])
    sp.add_argument("--method", choices=["fd4", "spectral"], default="fd4")
    common(sp, ("json",), "json")
    sp.set_defaults(func=cmd_pdecheck)
    return p


def _error(exc: LeapfrogError, extra=None) -> None:
    doc = {"error": exc.code, "message": str(exc.args[0]) if exc.args else ""}
    if extra is not None:
        doc["partial"] = extra
    sys.stderr.write(dumps(doc))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "samples", 0) and args.samples < 0:
            raise UsageError("--samples must be non-negative")
        with _sink(args.output) as out:
            args.func(args, out)
    except InvalidInput as exc:
        _error(exc)
        return 2
    except ComputationError as exc:
        partial = getattr(exc, "trajectory", None)
        _error(exc, partial if isinstance(partial, dict) else None)
        return 1
    except OSError as exc:
        sys.stderr.write(dumps({"error": "OSError", "message": str(exc)}))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
