"""Command line front end.

Every subcommand reads JSON or CSV input and writes JSON or CSV output,
to ``--out`` or standard output. Exit codes: 0 success, 2 input error,
3 numerical invariant failure, 4 unsupported request. Set ``MEROMAT_LOG``
(e.g. ``DEBUG``) to control log verbosity on standard error.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import funcalc, io, specdensity, spectral, stoch
from .errors import InputError, MeromatError, NumericalError, UnsupportedRequest

log = logging.getLogger("meromat")

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_UNSUPPORTED = 0, 2, 3, 4


@dataclass
class RunConfig:
    """Validated settings shared by the subcommands."""

    subcommand: str
    inputs: list = field(default_factory=list)
    out: str | None = None
    tol_cluster: float = 0.0
    rank_safety: float = spectral.DEFAULT_RANK_SAFETY
    unit_circle_tol: float = specdensity.UNIT_CIRCLE_TOL
    grid: tuple = (512, 0.0, 2 * np.pi)
    seed: int | None = None

    def __post_init__(self):
        if not (np.isfinite(self.tol_cluster) and self.tol_cluster >= 0):
            raise InputError("--tol-cluster must be non-negative (0 selects automatic clustering)")
        if not (np.isfinite(self.rank_safety) and self.rank_safety > 0):
            raise InputError("--rank-safety must be positive")
        if not (np.isfinite(self.unit_circle_tol) and self.unit_circle_tol > 0):
            raise InputError("--unit-circle-tol must be positive")
        n, lo, hi = self.grid
        if n < 2 or not hi > lo:
            raise InputError("grid needs at least two points and hi > lo")

    def omega(self):
        n, lo, hi = self.grid
        return specdensity.default_grid(n, lo, hi)


def parse_grid(text):
    """``"N"`` or ``"N:lo:hi"`` (radians)."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return int(parts[0]), 0.0, 2 * np.pi
        if len(parts) == 3:
            return int(parts[0]), float(parts[1]), float(parts[2])
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"bad grid {text!r}; use N or N:lo:hi")


def parse_complex(text):
    """``"1.5"``, ``"1+2j"`` or ``"re,im"``."""
    try:
        if "," in text:
            re, im = text.split(",")
            return complex(float(re), float(im))
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad complex number {text!r}") from None


@contextlib.contextmanager
def _sink(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _write_json(cfg, obj):
    with _sink(cfg.out) as fh:
        fh.write(io.dumps(obj))
        fh.write("\n")


def _load_matrix(path):
    return io.matrix_from_json(io.load_json(path))


def _decompose(cfg, A, route="auto"):
    return spectral.decompose(A, cluster_tolerance=cfg.tol_cluster, rank_safety=cfg.rank_safety, route=route)


# --------------------------------------------------------------------------
# subcommands


def cmd_decompose(cfg, args):
    A = _load_matrix(args.input)
    d = _decompose(cfg, A, args.route)
    report = {
        "dim": d.dim,
        "cluster_tolerance": d.spectrum.cluster_tolerance,
        "route": d.route,
        "records": [
            {"lambda": io.complex_to_json(r.value), "algebraic": r.algebraic,
             "geometric": r.geometric, "index": r.index}
            for r in d.records
        ],
        "projectors": [
            {"lambda": io.complex_to_json(r.value), "matrix": io.matrix_to_json(c[0])}
            for r, c in d.items()
        ],
        "nilpotents": [
            {"lambda": io.complex_to_json(r.value), "matrix": io.matrix_to_json(c[1])}
            for r, c in d.items() if len(c) > 1
        ],
        "residuals": d.residuals,
    }
    _write_json(cfg, report)


def _named_function(name):
    if name == "exp":
        return funcalc.exp_function()
    if name == "log":
        return funcalc.log_function()
    if name == "identity":
        return funcalc.identity_function()
    raise UnsupportedRequest(f"unknown function {name!r}")


def cmd_funcalc(cfg, args):
    A = _load_matrix(args.input)
    d = _decompose(cfg, A)
    if args.laurent is not None:
        out = funcalc.apply_meromorphic(d, io.laurent_from_json(io.load_json(args.laurent)))
    elif args.function is None:
        raise InputError("give --function or --laurent")
    elif args.function == "drazin":
        out = funcalc.drazin(d, c=args.c)
    elif args.function.startswith("power:"):
        try:
            L = parse_complex(args.function.split(":", 1)[1])
        except argparse.ArgumentTypeError as exc:
            raise InputError(str(exc)) from None
        out = funcalc.matrix_power(d, L)
    else:
        out = funcalc.apply_holomorphic(d, _named_function(args.function))
    _write_json(cfg, io.matrix_to_json(out))


def cmd_resolvent(cfg, args):
    A = _load_matrix(args.input)
    d = _decompose(cfg, A)
    _write_json(cfg, io.matrix_to_json(spectral.resolvent(d, args.z)))


def cmd_drazin(cfg, args):
    A = _load_matrix(args.input)
    d = _decompose(cfg, A)
    _write_json(cfg, io.matrix_to_json(funcalc.drazin(d, c=args.c, method=args.method)))


_RATE_NAMES = {k: getattr(np, k) for k in (
    "sin", "cos", "tan", "exp", "log", "sqrt", "abs", "pi", "sinh", "cosh", "tanh", "arctan", "e")}


def _rate_function(expr):
    try:
        code = compile(expr, "<rate>", "eval")
    except SyntaxError as exc:
        raise InputError(f"cannot parse rate expression {expr!r}: {exc.msg}") from None
    for name in code.co_names:
        if name != "t" and name not in _RATE_NAMES:
            raise InputError(f"rate expression may not use {name!r}")

    def rate(t):
        try:
            return float(eval(code, {"__builtins__": {}}, {**_RATE_NAMES, "t": t}))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"rate expression failed at t = {t}: {exc}") from None

    return rate


def cmd_poisson(cfg, args):
    if args.rate_expr is not None:
        if args.t0 is None or args.tf is None:
            raise InputError("--rate-expr needs --t0 and --tf")
        T = stoch.inhomogeneous_poisson_transition(args.N, _rate_function(args.rate_expr), args.t0, args.tf)
    else:
        if args.r is None or args.t is None:
            raise InputError("give --r and --t, or --rate-expr with --t0 and --tf")
        T = stoch.poisson_transition(args.N, args.r, args.t)
        log.info("tail mass beyond N from state 0: %.3e", stoch.poisson_tail_mass(args.N, args.r, args.t))
    with _sink(cfg.out) as fh:
        io.write_csv(fh, ["n", "pmf"], ((n, T[0, n]) for n in range(T.shape[0])))


def cmd_greenkubo(cfg, args):
    G = _load_matrix(args.input)
    A = io.vector_from_json(io.load_json(args.observable))
    B = io.vector_from_json(io.load_json(args.observable_b)) if args.observable_b else None
    d = _decompose(cfg, G)
    kappa = stoch.green_kubo(G, A, B, decomp=d)
    _write_json(cfg, {"kappa": io.complex_to_json(kappa)})


def _load_hmm(path):
    return io.hmm_from_json(io.load_json(path))


def cmd_acf(cfg, args):
    hmm = _load_hmm(args.input)
    d = _decompose(cfg, hmm.T)
    g = specdensity.autocorrelation_sequence(hmm, args.max_lag, decomp=d)
    with _sink(cfg.out) as fh:
        io.write_csv(fh, ["tau", "gamma_re", "gamma_im"], ((k, v.real, v.imag) for k, v in enumerate(g)))


def cmd_power(cfg, args):
    hmm = _load_hmm(args.input)
    d = _decompose(cfg, hmm.T)
    res = specdensity.power_spectrum(hmm, cfg.omega(), decomp=d, unit_circle_tol=cfg.unit_circle_tol)
    lines_path = args.lines_out
    if lines_path is None and cfg.out not in (None, "-"):
        p = Path(cfg.out)
        lines_path = str(p.with_name(p.stem + "_lines" + (p.suffix or ".csv")))
    with _sink(cfg.out) as fh:
        io.write_csv(fh, ["omega", "P_c"], zip(res.omega, res.density))
        if lines_path is None:
            fh.write("\n")
            io.write_csv(fh, ["omega_line", "weight"], res.lines)
    if lines_path is not None:
        with _sink(lines_path) as fh:
            io.write_csv(fh, ["omega_line", "weight"], res.lines)


def cmd_simulate(cfg, args):
    hmm = _load_hmm(args.input)
    if cfg.seed is None:
        raise InputError("simulate needs an explicit --seed")
    x = specdensity.sample_hmm(hmm, args.n, cfg.seed, stochastic=not args.deterministic,
                               initial_state=args.initial_state)
    with _sink(cfg.out) as fh:
        io.write_csv(fh, ["n", "x_re", "x_im"], ((k, v.real, v.imag) for k, v in enumerate(x)))


def cmd_scan(cfg, args):
    x = io.read_series_csv(args.input)
    n, lo, hi = cfg.grid
    w = lo + np.arange(n) * (hi - lo) / n
    angles = specdensity.eigenvalue_scan(x, args.radius, w, segments=args.segments)
    with _sink(cfg.out) as fh:
        io.write_csv(fh, ["omega"], ((a,) for a in angles))


# --------------------------------------------------------------------------
# parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-cluster", type=float, default=0.0,
                        help="eigenvalue clustering distance; 0 selects automatic clustering")
    common.add_argument("--rank-safety", type=float, default=spectral.DEFAULT_RANK_SAFETY,
                        help="multiplier on the rounding error model for rank decisions")
    common.add_argument("--unit-circle-tol", type=float, default=specdensity.UNIT_CIRCLE_TOL)
    common.add_argument("--grid", type=parse_grid, default=(512, 0.0, 2 * np.pi),
                        help="frequency grid, N or N:lo:hi in radians")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", default=None, help="output file (default standard output)")

    p = argparse.ArgumentParser(prog="meromat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("decompose", parents=[common], help="spectrum, projectors and residuals")
    s.add_argument("input")
    s.add_argument("--route", choices=["auto", "jordan", "index_one"], default="auto")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("funcalc", parents=[common], help="evaluate a function of a matrix")
    s.add_argument("input")
    s.add_argument("--function", help="exp, log, identity, drazin or power:<L>")
    s.add_argument("--laurent", help="JSON file with local expansion coefficients")
    s.add_argument("--c", type=parse_complex, default=None, help="shift used by drazin")
    s.set_defaults(func=cmd_funcalc)

    s = sub.add_parser("resolvent", parents=[common], help="resolvent at a point")
    s.add_argument("input")
    s.add_argument("--z", type=parse_complex, required=True)
    s.set_defaults(func=cmd_resolvent)

    s = sub.add_parser("drazin", parents=[common], help="Drazin inverse")
    s.add_argument("input")
    s.add_argument("--c", type=parse_complex, default=None)
    s.add_argument("--method", choices=["product", "spectral"], default="product")
    s.set_defaults(func=cmd_drazin)

    s = sub.add_parser("poisson", parents=[common], help="truncated Poisson counting distribution")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--r", type=float)
    s.add_argument("--t", type=float)
    s.add_argument("--rate-expr", help="time dependent rate in t, e.g. '1+sin(t)'")
    s.add_argument("--t0", type=float)
    s.add_argument("--tf", type=float)
    s.set_defaults(func=cmd_poisson)

    s = sub.add_parser("greenkubo", parents=[common], help="integrated autocorrelation of observables")
    s.add_argument("input", help="rate matrix JSON")
    s.add_argument("--observable", required=True, help="vector JSON")
    s.add_argument("--observable-b", default=None, help="second observable (default: same)")
    s.set_defaults(func=cmd_greenkubo)

    s = sub.add_parser("acf", parents=[common], help="autocorrelation of an HMM")
    s.add_argument("input")
    s.add_argument("--max-lag", type=int, default=32)
    s.set_defaults(func=cmd_acf)

    s = sub.add_parser("power", parents=[common], help="power spectrum of an HMM")
    s.add_argument("input")
    s.add_argument("--lines-out", default=None)
    s.set_defaults(func=cmd_power)

    s = sub.add_parser("simulate", parents=[common], help="sample an HMM series")
    s.add_argument("input")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--deterministic", action="store_true", help="emit state means")
    s.add_argument("--initial-state", type=int, default=None)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("scan", parents=[common], help="eigenvalue directions from a series")
    s.add_argument("input", help="series CSV")
    s.add_argument("--radius", type=float, default=1.02)
    s.add_argument("--segments", type=int, default=8)
    s.set_defaults(func=cmd_scan, grid=(2048, -np.pi, np.pi))
    return p


def _configure_logging():
    level = getattr(logging, os.environ.get("MEROMAT_LOG", "WARNING").upper(), logging.WARNING)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv=None):
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            subcommand=args.subcommand,
            inputs=[getattr(args, "input", None)],
            out=args.out,
            tol_cluster=args.tol_cluster,
            rank_safety=args.rank_safety,
            unit_circle_tol=args.unit_circle_tol,
            grid=args.grid,
            seed=args.seed,
        )
        args.func(cfg, args)
    except UnsupportedRequest as exc:
        print(f"meromat: unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except InputError as exc:
        print(f"meromat: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"meromat: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except MeromatError as exc:
        print(f"meromat: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"meromat: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
