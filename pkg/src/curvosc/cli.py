"""Command-line entry point: ``curvosc <command> [flags]``.

Exit status is 0 on success, 1 on usage or validation errors and 2 when a
verification fails.  Floats are written with 17 significant digits so that
repeated runs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import checks
from .cartesian import CartesianAmplitudes, cartesian_invariants, verify_bridge
from .cartesian import bridge as to_polar
from .closed_form import eval_state, sample_cartesian, sample_polar, trajectory
from .errors import CurvOscError, IntegrationError, PeriodDetectionError, QuadratureError
from .integrator import IntegrationConfig, integrate
from .model import ModelParams, energy, motion_constants, v_eff, v_eff_extremum
from .quantum import (QuantumParams, eigenstate, energy_levels, n_max, normalized_radial,
                      ode_residual)

SCHEMA_VERSION = 1
TRAJECTORY_COLUMNS = ("t", "r", "r_dot", "phi", "x", "y", "energy_rel_drift")
POTENTIAL_COLUMNS = ("r", "v_eff_J0", "v_eff_J")
WAVEFUNCTION_COLUMNS = ("r", "R", "residual")
SPECTRUM_COLUMNS = ("n", "E", "degeneracy")

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        # repr is the shortest round-trip form; non-finite values become null
        return x if math.isfinite(x) else None
    if isinstance(x, np.integer):
        return int(x)
    return x


def _csv_text(schema: str, columns: Sequence[str], rows) -> str:
    buf = io.StringIO()
    buf.write(f"# curvosc {schema} schema v{SCHEMA_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2) + "\n"


def _keyvalue_text(d: dict) -> str:
    return "".join(f"{k}={v if isinstance(v, str) else ('null' if v is None else fmt(v))}\n"
                   for k, v in d.items())


def _emit(text: str, out: Optional[str]):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def _require(args, *names):
    attr = {"lambda": "lam"}
    missing = [f"--{n}" for n in names if getattr(args, attr.get(n, n)) is None]
    if missing:
        raise UsageError(f"missing required flag(s): {', '.join(missing)}")


def _samples(args) -> int:
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    return args.samples


# -- commands --------------------------------------------------------------

def cmd_classify(args) -> int:
    _require(args, "lambda", "alpha", "J", "E")
    params = ModelParams(args.lam, args.alpha)
    mc = motion_constants(params, args.J, args.E)
    ext = v_eff_extremum(params, args.J)
    out = {"regime": mc.regime.value, "omega": mc.omega, "J": mc.J, "E": mc.E, "C": mc.C,
           "qa": mc.qa, "qb": mc.qb, "qc": mc.qc, "delta": mc.delta,
           "threshold_energy": params.threshold_energy,
           "r_min": ext[0] if ext else None, "v_min": ext[1] if ext else None}
    _emit(_json_text(out) if args.format == "json" else _keyvalue_text(out), args.out)
    return EXIT_OK


def _energy_drift(params, J, E, r, r_dot):
    drift = np.full(r.shape, math.nan)
    ok = r > 0.0
    drift[ok] = np.abs(energy(params, r[ok], r_dot[ok], J) - E) / max(abs(E), np.finfo(float).tiny)
    return drift


def cmd_trajectory(args) -> int:
    _require(args, "lambda", "alpha", "J", "E")
    params = ModelParams(args.lam, args.alpha)
    n = _samples(args)
    if not args.t1 > args.t0:
        raise UsageError("--t1 must exceed --t0")
    traj = trajectory(params, args.J, args.E, args.phase, args.K)
    t = np.linspace(args.t0, args.t1, n)
    if args.source == "closed":
        r, r_dot, phi = sample_polar(traj, t)
        x, y = sample_cartesian(traj, t)
    else:
        cfg = IntegrationConfig(args.rtol, args.atol, t_span=(args.t0, args.t1), n_samples=n)
        s = integrate(params, args.J, eval_state(traj, args.t0), cfg, t_eval=t)
        r, r_dot, phi, x, y = s.r, s.r_dot, s.phi, s.x, s.y
    drift = _energy_drift(params, args.J, args.E, r, r_dot)
    if args.format == "json":
        cols = dict(zip(TRAJECTORY_COLUMNS, (t, r, r_dot, phi, x, y, drift)))
        text = _json_text({"regime": traj.variant.value, "A": traj.A, "B": traj.B,
                           "omega": traj.omega, "phase": traj.phi, "K": traj.K,
                           **{k: v.tolist() for k, v in cols.items()}})
    else:
        text = _csv_text("trajectory", TRAJECTORY_COLUMNS, zip(t, r, r_dot, phi, x, y, drift))
    _emit(text, args.out)
    return EXIT_OK


def _amplitudes(args) -> CartesianAmplitudes:
    _require(args, "lambda", "A1", "A2")
    if args.variant == "linear":
        _require(args, "B1", "B2")
        return CartesianAmplitudes.linear(args.A1, args.A2, args.B1, args.B2, args.lam)
    make = CartesianAmplitudes.trig if args.variant == "trig" else CartesianAmplitudes.hyper
    return make(args.A1, args.A2, args.phi1, args.phi2, args.lam)


def cmd_bridge(args) -> int:
    amps = _amplitudes(args)
    if args.variant != "linear":
        _require(args, "alpha")
    inv = cartesian_invariants(amps, args.alpha)
    rep = verify_bridge(amps, args.alpha, n_samples=_samples(args))
    traj = to_polar(amps, args.alpha)
    out = {"variant": args.variant, "regime": traj.variant.value, "alpha": inv.alpha,
           "omega_bar": inv.omega_bar, "A": traj.A, "B": traj.B, "omega": traj.omega,
           "phase": traj.phi, "K": traj.K, "J": traj.J, "E": traj.E,
           "max_r2_dev": rep.max_r2_dev, "max_angle_dev": rep.max_angle_dev,
           "omega_rel_dev": rep.omega_rel_dev, "param_dev": rep.param_dev,
           "n_samples": rep.n_samples, "passed": rep.ok()}
    if args.format == "csv":
        text = _csv_text("bridge", tuple(out), [tuple(out.values())])
    elif args.format == "json":
        text = _json_text(out)
    else:
        text = _keyvalue_text(out)
    _emit(text, args.out)
    return EXIT_OK if rep.ok() else EXIT_VERIFY


def cmd_spectrum(args) -> int:
    _require(args, "lambda", "beta")
    qp = QuantumParams(args.lam, args.beta)
    count = args.levels
    if count is None and qp.lam < 0:
        count = 10
    if count is not None and count < 1:
        raise UsageError("--levels must be positive")
    levels = energy_levels(qp, count)
    if args.format == "csv":
        text = _csv_text("spectrum", SPECTRUM_COLUMNS, [(lv.n, lv.E, lv.degeneracy) for lv in levels])
    else:
        text = _json_text([{"n": lv.n, "E": lv.E, "degeneracy": lv.degeneracy,
                            "states": [list(s) for s in lv.states]} for lv in levels])
        if args.format == "text":
            nm = n_max(qp)
            text = "".join(f"n={lv.n} E={fmt(lv.E)} degeneracy={lv.degeneracy}\n" for lv in levels)
            text += f"levels={len(levels)}\nn_max={'inf' if nm is None else nm}\n"
    _emit(text, args.out)
    return EXIT_OK


def _radial_grid(lo: float, hi: float, n: int, r_max: float) -> np.ndarray:
    if not 0.0 < lo < hi < r_max:
        raise UsageError(f"radial grid [{lo}, {hi}] must lie inside (0, {r_max})")
    return np.linspace(lo, hi, n)


def cmd_wavefunction(args) -> int:
    _require(args, "lambda", "beta")
    qp = QuantumParams(args.lam, args.beta)
    state = eigenstate(qp, args.nr, args.m)
    n = _samples(args)
    hi = args.r_max if args.r_max is not None else (
        0.999 * qp.r_max if qp.lam < 0 else 10.0 / math.sqrt(qp.lam))
    r = _radial_grid(args.r_min, hi, n, qp.r_max)
    R = normalized_radial(qp, state, r)
    res = ode_residual(qp, state, r)
    if args.format == "json":
        text = _json_text({"n_r": state.n_r, "m": state.m, "n": state.n, "E": state.E,
                           "norm": state.norm, "r": r.tolist(), "R": R.tolist(), "residual": res.tolist()})
    else:
        text = _csv_text("wavefunction", WAVEFUNCTION_COLUMNS, zip(r, R, res))
    _emit(text, args.out)
    return EXIT_OK


def cmd_potential(args) -> int:
    _require(args, "lambda", "alpha")
    params = ModelParams(args.lam, args.alpha)
    J = 1.0 if args.J is None else args.J
    hi = args.r_max if args.r_max is not None else (3.0 if params.lam > 0 else 0.99 * params.r_max)
    r = _radial_grid(args.r_min, hi, _samples(args), params.r_max)
    v0 = v_eff(params, 0.0, r)
    vJ = v_eff(params, J, r)
    if args.format == "json":
        text = _json_text({"J": J, "r": r.tolist(), "v_eff_J0": v0.tolist(), "v_eff_J": vJ.tolist()})
    else:
        text = _csv_text("potential", POTENTIAL_COLUMNS, zip(r, v0, vJ))
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = checks.run_all(args.seed, properties=not args.acceptance_only)
    if args.format == "json":
        text = _json_text([{"name": c.name, "passed": c.passed, "detail": c.detail} for c in results])
    else:
        text = "".join(c.line() + "\n" for c in results)
        text += f"{sum(c.passed for c in results)}/{len(results)} checks passed\n"
    _emit(text, args.out)
    return EXIT_OK if all(c.passed for c in results) else EXIT_VERIFY


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="curvosc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_, formats=("csv", "json"), default_format=None):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=formats, default=default_format or formats[0])
        return p

    def model_flags(p, J=True, E=True):
        p.add_argument("--lambda", dest="lam", type=float, default=None)
        p.add_argument("--alpha", type=float, default=None)
        if J:
            p.add_argument("--J", type=float, default=None)
        if E:
            p.add_argument("--E", type=float, default=None)

    p = add("classify", cmd_classify, "regime and constants of motion",
            formats=("text", "json"))
    model_flags(p)

    p = add("trajectory", cmd_trajectory, "sample a classical trajectory")
    model_flags(p)
    p.add_argument("--phase", type=float, default=0.0)
    p.add_argument("--K", type=float, default=0.0)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=10.0)
    p.add_argument("--samples", type=int, default=1001)
    p.add_argument("--source", choices=("closed", "ode"), default="closed")
    p.add_argument("--rtol", type=float, default=1e-10)
    p.add_argument("--atol", type=float, default=1e-12)

    p = add("bridge", cmd_bridge, "map cartesian amplitudes to polar parameters and cross-check",
            formats=("text", "json", "csv"))
    p.add_argument("--variant", choices=("trig", "hyper", "linear"), default="trig")
    model_flags(p, J=False, E=False)
    for name in ("A1", "A2", "B1", "B2"):
        p.add_argument(f"--{name}", type=float, default=None)
    p.add_argument("--phi1", type=float, default=0.0)
    p.add_argument("--phi2", type=float, default=0.0)
    p.add_argument("--samples", type=int, default=1000)

    p = add("spectrum", cmd_spectrum, "quantum energy levels",
            formats=("json", "csv", "text"))
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--levels", type=int, default=None)

    p = add("wavefunction", cmd_wavefunction, "normalised radial eigenfunction on a grid")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--nr", type=int, default=0)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--r-min", dest="r_min", type=float, default=1e-3)
    p.add_argument("--r-max", dest="r_max", type=float, default=None)
    p.add_argument("--samples", type=int, default=500)

    p = add("potential", cmd_potential, "effective potential profile for J=0 and J")
    model_flags(p, E=False)
    p.add_argument("--r-min", dest="r_min", type=float, default=0.05)
    p.add_argument("--r-max", dest="r_max", type=float, default=None)
    p.add_argument("--samples", type=int, default=400)

    p = add("verify", cmd_verify, "run the acceptance checks and the module property suite",
            formats=("text", "json"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--acceptance-only", action="store_true", help="skip the module property suite")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (IntegrationError, PeriodDetectionError, QuadratureError) as exc:
        # a computation that could not be carried out to its stated accuracy
        print(f"curvosc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (UsageError, CurvOscError, ValueError) as exc:
        print(f"curvosc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
