"""Command-line entry point.

Exit codes: 0 success / equivalent, 1 verified not equivalent,
2 usage or configuration error, 3 domain error (OutOfCone, NullNorm).
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import algebra2d as a2
from . import clifford as cl
from . import scenarios
from .algebra2d import Kind
from .equivalence import DEFAULT_TOLERANCE, SCHEMA_VERSION, node_mask, verify_equivalence
from .errors import NullNorm, OutOfCone
from .evolution import CrankNicolson, HeatChannel, PotentialSpec, assemble_duplex, stationary_solve
from .field import AlgebraField1D, Boundary, Grid1D, write_csv
from .interference import SlitGeometry, fringe_census, pattern_scan

log = logging.getLogger("duplexqm")

TOLERANCE_ENV = "DUPLEXQM_TOLERANCE"

EXIT_OK, EXIT_NOT_EQUIVALENT, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class ConfigError(Exception):
    pass


def default_tolerance() -> float:
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None:
        return DEFAULT_TOLERANCE
    try:
        val = float(raw)
    except ValueError:
        raise ConfigError(f"{TOLERANCE_ENV}={raw!r} is not a number")
    if not val > 0:
        raise ConfigError(f"{TOLERANCE_ENV} must be positive")
    return val


def _require(cond, msg):
    if not cond:
        raise ConfigError(msg)


def _positive(args, *names):
    for n in names:
        v = getattr(args, n)
        _require(v is not None and math.isfinite(v) and v > 0, f"--{n.replace('_', '-')} must be positive, got {v}")


def _out_dir(args) -> Path | None:
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, obj):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _sidecar(out: Path | None, command: str, args, files):
    if out is None:
        return
    params = {k: v for k, v in vars(args).items() if k not in ("func", "config", "out")}
    _write_json(out / f"{command}.run.json", {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "version": __version__,
        "parameters": params,
        "outputs": sorted(files),
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    })


# -- commands -------------------------------------------------------------------

def cmd_classify(args) -> int:
    _require(math.isfinite(args.alpha) and math.isfinite(args.beta), "alpha and beta must be finite")
    sig = a2.AlgebraSignature2D(args.alpha, args.beta)
    c = a2.classify(sig)
    f2 = c.f_squared
    result = {
        "schema_version": SCHEMA_VERSION,
        "alpha": args.alpha, "beta": args.beta,
        "discriminant": sig.discriminant,
        "kind": c.kind.value,
        "f": {"c0": c.f.c0, "c1": c.f.c1},
        "f_squared": {"c0": f2.c0, "c1": f2.c1},
        "unit_invertible": a2.is_invertible(a2.unit(sig)),
    }
    if args.json:
        print(json.dumps(result, indent=2))
    else:
        print(f"kind={c.kind.value}")
        print(f"f = {c.f.c0:.17g} + {c.f.c1:.17g}*a")
        print(f"f^2 = {f2.c0:.17g} + {f2.c1:.17g}*a")
    out = _out_dir(args)
    if out:
        _write_json(out / "classify.json", result)
        _sidecar(out, "classify", args, ["classify.json"])
    return EXIT_OK


def cmd_equivalence(args) -> int:
    _positive(args, "h", "dt", "tolerance")
    _require(args.node_exclusion >= 0, "--node-exclusion must be non-negative")
    try:
        sc = scenarios.get(args.scenario, p=args.p)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"{exc}; known scenarios: {', '.join(scenarios.NAMES)}")
    domain = None
    if args.x_min is not None or args.x_max is not None:
        lo = sc.domain[0] if args.x_min is None else args.x_min
        hi = sc.domain[1] if args.x_max is None else args.x_max
        _require(hi > lo, "x-max must exceed x-min")
        domain = (lo, hi)
    grid = sc.grid(args.h, domain)
    _require(grid.n_points >= 5, "grid too coarse")
    traj = sc.pair_trajectory(grid, args.t0, args.dt, perturb=args.perturb_phase)
    mask = None
    if sc.has_nodes and args.node_exclusion > 0:
        mask = node_mask(sc.amplitude(grid.x), grid, args.node_exclusion)
    report = verify_equivalence(sc.potential, traj, args.tolerance, mask=mask)
    summary = {
        "scenario": sc.name,
        "verdict": report.verdict.to_dict(),
        "max_abs": report.max_abs,
        "excluded_measure": report.excluded_measure,
    }
    print(json.dumps(summary, indent=2))
    out = _out_dir(args)
    if out:
        _write_json(out / "equivalence_report.json", report.to_dict())
        write_csv(out / "equivalence_residuals.csv", {
            "x": grid.x,
            "W": report.w_field.values,
            "complex_eq1": report.residual_complex[0].values,
            "duplex_eq1": report.residual_duplex[0].values,
            "continuity": report.residual_complex[1].values,
            "included": report.mask.astype(float),
        })
        _sidecar(out, "equivalence", args, ["equivalence_report.json", "equivalence_residuals.csv"])
    return EXIT_OK if report.equivalent else EXIT_NOT_EQUIVALENT


def cmd_interference(args) -> int:
    _positive(args, "d", "L")
    _require(args.n_samples >= 16, "--n-samples must be at least 16")
    _require(args.delta_max >= 0 and math.isfinite(args.delta_max), "--delta-max must be non-negative")
    geom = SlitGeometry.for_delta_range(args.delta_max, args.d, args.L)
    ell = pattern_scan(Kind.ELLIPTIC, geom, args.n_samples)
    hyp = pattern_scan(Kind.HYPERBOLIC, geom, args.n_samples)
    census = {
        "schema_version": SCHEMA_VERSION,
        "geometry": {"d": args.d, "L": args.L, "x_range": list(geom.x_range)},
        "complex": fringe_census(ell).to_dict(),
        "duplex": fringe_census(hyp).to_dict(),
    }
    print(json.dumps({k: census[k] for k in ("complex", "duplex")}, indent=2))
    out = _out_dir(args)
    if out:
        write_csv(out / "interference.csv", {
            "x": ell.x, "delta": ell.delta, "I_complex": ell.intensity, "I_duplex": hyp.intensity,
        })
        _write_json(out / "census.json", census)
        _sidecar(out, "interference", args, ["interference.csv", "census.json"])
    return EXIT_OK


def _analytic_spectrum(args, k):
    n = np.arange(k)
    if args.potential == "harmonic":
        return (n + 0.5) * math.sqrt(2 * args.coefficient)
    width = args.x_max - args.x_min
    return (n + 1) ** 2 * math.pi ** 2 / (2 * width ** 2)


def cmd_stationary(args) -> int:
    _require(args.k >= 1, "--k must be at least 1")
    _require(args.n_points >= 4 * args.k and args.n_points >= 5, "--n-points must be at least 4k")
    if args.potential == "box":
        if args.x_min is None:
            args.x_min = 0.0
        if args.x_max is None:
            args.x_max = math.pi
    else:
        if args.x_min is None:
            args.x_min = -10.0
        if args.x_max is None:
            args.x_max = 10.0
    _require(args.x_max > args.x_min, "x-max must exceed x-min")
    if args.potential == "harmonic":
        _positive(args, "coefficient")
        U = PotentialSpec.harmonic(args.coefficient)
    else:
        U = PotentialSpec.zero()
    grid = Grid1D(args.x_min, args.x_max, args.n_points)
    states = stationary_solve(U, grid, args.k)
    energies = np.array([s.energy for s in states])
    ref = _analytic_spectrum(args, args.k)
    for s, r in zip(states, ref):
        print(f"n={s.index} E={s.energy:.12f} analytic={r:.12f} abs_error={abs(s.energy - r):.3e} nodes={s.nodes}")
    out = _out_dir(args)
    if out:
        write_csv(out / "spectrum.csv", {
            "index": np.arange(args.k), "energy": energies,
            "analytic_reference": ref, "abs_error": np.abs(energies - ref),
        })
        cols = {"x": grid.x}
        for s in states:
            cols[f"u{s.index}"] = s.wavefunction.values
        write_csv(out / "eigenfunctions.csv", cols)
        _sidecar(out, "stationary", args, ["spectrum.csv", "eigenfunctions.csv"])
    return EXIT_OK


def cmd_clifford_table(args) -> int:
    _require(args.p >= 0 and args.q >= 0, "p and q must be non-negative")
    _require(args.p + args.q <= cl.MAX_DIM, f"p + q must not exceed {cl.MAX_DIM}")
    sig = cl.CliffordSignature(args.p, args.q)
    lines = [f"{a}*{b} = {c}" for a, b, c in cl.multiplication_table(sig)]
    sq = cl.pseudoscalar_square(sig)
    lines.append(f"pseudoscalar^2 = {sq.closed_form:+d}")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    out = _out_dir(args)
    if out:
        (out / f"clifford_{args.p}_{args.q}.txt").write_text(text)
        _sidecar(out, "clifford-table", args, [f"clifford_{args.p}_{args.q}.txt"])
    return EXIT_OK


def cmd_evolve(args) -> int:
    _positive(args, "h", "dt", "width")
    _require(args.steps >= 1 and args.stride >= 1, "--steps and --stride must be at least 1")
    _require(args.x_max > args.x_min, "x-max must exceed x-min")
    U = PotentialSpec.harmonic(args.coefficient) if args.potential == "harmonic" else PotentialSpec.zero()
    grid = Grid1D.with_spacing(args.x_min, args.x_max, args.h, Boundary(args.boundary))
    x = grid.x
    envelope = np.exp(-(x - args.x0) ** 2 / (4 * args.width ** 2))
    rows = {"t": [], "x": [], "c0": [], "c1": [], "P": []}

    def emit(t, field):
        c = field.coeffs
        rows["t"].append(np.full(len(x), t))
        rows["x"].append(x)
        rows["c0"].append(c[:, 0])
        rows["c1"].append(c[:, 1])
        rows["P"].append(a2.norm_sq_coeffs(field.sig, c))

    if args.kind == "complex":
        psi = AlgebraField1D.from_complex(grid, envelope * np.exp(1j * args.p * x))
        times, frames = CrankNicolson(grid, U, args.dt).run(psi, args.steps, stride=args.stride)
        for t, f in zip(times, frames):
            emit(t, f)
    else:
        ch = HeatChannel(grid, U, args.dt)
        minus = [1.0 + envelope]
        plus = [1.0 + envelope]
        for _ in range(args.steps):
            minus.append(ch.step(minus[-1]))
            plus.append(ch.step(plus[-1]))
        plus.reverse()
        for k in range(0, args.steps + 1):
            if k % args.stride == 0 or k == args.steps:
                emit(k * args.dt, assemble_duplex(grid, plus[k], minus[k]))
    out = _out_dir(args)
    n_frames = len(rows["t"])
    print(f"{args.kind} evolution: {args.steps} steps, {n_frames} snapshots on {grid.n_points} points")
    if out:
        write_csv(out / "trajectory.csv", {k: np.concatenate(v) for k, v in rows.items()})
        _sidecar(out, "evolve", args, ["trajectory.csv"])
    return EXIT_OK


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="duplexqm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file with parameter defaults; flags override it")
        p.add_argument("--out", help="output directory")
        return p

    p = common(sub.add_parser("classify", help="classify a 2D algebra a^2 = alpha + beta a"))
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--json", action="store_true", help="print JSON instead of text")
    p.set_defaults(func=cmd_classify)

    p = common(sub.add_parser("equivalence", help="check complex/duplex equivalence on a scenario"))
    p.add_argument("--scenario", default="oscillator-0")
    p.add_argument("--h", type=float, default=1 / 128)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--p", type=float, default=1.0, help="momentum for the free scenario")
    p.add_argument("--perturb-phase", type=float, default=0.0)
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--node-exclusion", type=float, default=1.0)
    p.add_argument("--x-min", type=float, default=None)
    p.add_argument("--x-max", type=float, default=None)
    p.set_defaults(func=cmd_equivalence)

    p = common(sub.add_parser("interference", help="two-beam patterns, complex vs duplex"))
    p.add_argument("--d", type=float, default=1e-3)
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--delta-max", type=float, default=4 * math.pi)
    p.add_argument("--n-samples", type=int, default=801)
    p.set_defaults(func=cmd_interference)

    p = common(sub.add_parser("stationary", help="lowest eigenstates of -1/2 Lap + U"))
    p.add_argument("--potential", choices=("harmonic", "zero", "box"), default="harmonic")
    p.add_argument("--coefficient", type=float, default=0.5)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--n-points", type=int, default=2000)
    p.add_argument("--x-min", type=float, default=None)
    p.add_argument("--x-max", type=float, default=None)
    p.set_defaults(func=cmd_stationary)

    p = common(sub.add_parser("clifford-table", help="blade multiplication table of R_{p,q}"))
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_clifford_table)

    p = common(sub.add_parser("evolve", help="evolve a Gaussian packet (complex) or heat pair (duplex)"))
    p.add_argument("--kind", choices=("complex", "duplex"), default="complex")
    p.add_argument("--potential", choices=("harmonic", "zero"), default="zero")
    p.add_argument("--coefficient", type=float, default=0.5)
    p.add_argument("--boundary", choices=("dirichlet", "periodic"), default="dirichlet")
    p.add_argument("--x-min", type=float, default=-20.0)
    p.add_argument("--x-max", type=float, default=20.0)
    p.add_argument("--h", type=float, default=1 / 32)
    p.add_argument("--dt", type=float, default=1e-2)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--stride", type=int, default=10)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--width", type=float, default=1.0)
    p.add_argument("--p", type=float, default=1.0)
    p.set_defaults(func=cmd_evolve)
    return parser


def _load_config(path):
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    if not isinstance(cfg, dict):
        raise ConfigError("config file must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def parse_args(argv):
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        cfg = _load_config(known.config)
        choices = parser._subparsers._group_actions[0].choices
        command = next((tok for tok in argv if tok in choices), None)
        if command is None:
            raise ConfigError("--config needs a command")
        subparser = choices[command]
        known_dests = {a.dest for a in subparser._actions}
        unknown = set(cfg) - known_dests
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        for a in subparser._actions:
            if a.dest in cfg:
                a.required = False
        subparser.set_defaults(**cfg)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ConfigError as exc:
        print(f"duplexqm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if getattr(args, "tolerance", "absent") is None:
            args.tolerance = default_tolerance()
        return args.func(args)
    except ConfigError as exc:
        print(f"duplexqm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OutOfCone, NullNorm) as exc:
        print(f"duplexqm: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
