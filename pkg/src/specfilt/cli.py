"""Command-line front end.

Exit codes: 0 success, 2 invalid configuration or arguments, 3 numerical
failure, 4 calibration failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import calibrate as cal
from .basis import Extension
from .blocks import (
    derivative_matrix,
    indicator_gain_matrix,
    integral_matrix,
    shift_matrix_natural,
    shift_matrix_zero_ext,
)
from .config import CALIBRATED_CUTOFF, bundled_names, load_config, with_overrides
from .exceptions import CalibrationError, ConfigError, NumericalError
from .filters import Family, FilterDesign, PassKind, group_delay, phase_delay
from .modeling import run, simulate
from .oracle import DEFAULT_STEP, cross_validate, ode_filter
from .render import domain_coloring, emit_signal_csv, write_ppm
from .tables import run_table, table_csv, write_tables

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_CALIBRATION = 0, 2, 3, 4

MATRIX_KINDS = {
    "derivative": lambda T, L, p: derivative_matrix(T, L),
    "integral": lambda T, L, p: integral_matrix(T, L),
    "gain": lambda T, L, p: indicator_gain_matrix(T, L, T if p is None else p),
    "shift": lambda T, L, p: shift_matrix_natural(T, L, _need(p, "--param")),
    "shift-zero": lambda T, L, p: shift_matrix_zero_ext(T, L, _need(p, "--param")),
}


def _need(value, flag):
    if value is None:
        raise ConfigError(flag, "required for this matrix kind")
    return value


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", newline="")


def _cutoff(args) -> float:
    if getattr(args, "cutoff_pi", None) is not None:
        return args.cutoff_pi * math.pi
    if getattr(args, "cutoff", None) is not None:
        return args.cutoff
    return CALIBRATED_CUTOFF


def _design(args) -> FilterDesign:
    try:
        return FilterDesign(args.family, args.order, args.ripple, _cutoff(args), args.kind)
    except ValueError as exc:
        raise ConfigError("design", str(exc)) from exc


def _table(args):
    config = load_config(args.config)
    return with_overrides(
        config,
        seed=getattr(args, "seed", None),
        shift_mode=getattr(args, "shift_mode", None),
        M=getattr(args, "M", None),
    )


def _cell(config, order, L):
    order = config.orders[0] if order is None else order
    L = config.Ls[0] if L is None else L
    try:
        return config.experiment(order, L)
    except ValueError as exc:
        raise ConfigError("order", str(exc)) from exc


# -- subcommands -------------------------------------------------------------

def cmd_matrices(args) -> int:
    M = MATRIX_KINDS[args.kind](args.T, args.L, args.param)
    out = _open_out(args.out)
    try:
        np.savetxt(out, M.data, fmt="%.17e", delimiter=",")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_design(args) -> int:
    d = _design(args)
    omega = args.omega_pi * math.pi
    print(f"family      {d.family.value}")
    print(f"order       {d.order}")
    print(f"kind        {d.kind.value}")
    print(f"cutoff      {d.cutoff:.12g}  ({d.cutoff / math.pi:.9g} pi)")
    print(f"gain        {d.gain:.12g}")
    if d.chebyshev is not None:
        c = d.chebyshev
        print(f"ripple      {d.ripple:.12g}")
        print(f"lambda      {c.lam:.12g}")
        print(f"alpha       {c.alpha:.12g}")
        print(f"beta        {c.beta:.12g}")
        print(f"gamma       {c.gamma:.12g}")
    print(f"tau_phase   {phase_delay(d, omega):.12g}  at omega = {args.omega_pi:g} pi")
    print(f"tau_group   {group_delay(d, omega):.12g}")
    print("poles (prototype)")
    for k, p in enumerate(d.poles):
        print(f"  {k:2d}  {p.real:+.15f} {p.imag:+.15f}i")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["k", "re", "im", "scaled_re", "scaled_im"])
            for k, (p, q) in enumerate(zip(d.poles, d.scaled_poles)):
                w.writerow([k, f"{p.real:.17e}", f"{p.imag:.17e}", f"{q.real:.17e}", f"{q.imag:.17e}"])
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = _table(args)
    exp = _cell(config, args.order, args.L)
    rep = run(exp, args.threads)
    print(f"{config.family.value} n={exp.design.order} L={exp.L} M={rep.M} shift={exp.shift_mode.value}")
    print(f"tau            {rep.tau:.9f}")
    print(f"error          {rep.error:.9f}  (std {rep.error_std:.9f})")
    print(f"apriori        {rep.apriori:.9f}  (std {rep.apriori_std:.9f})")
    print(f"apriori_upper  {rep.apriori_upper:.9f}  (std {rep.apriori_upper_std:.9f})")
    return EXIT_OK


def cmd_experiment(args) -> int:
    config = _table(args)
    start = time.perf_counter()

    def progress(n, L, rep):
        if args.verbose:
            print(f"  n={n} L={L} error={rep.error:.6f}", file=sys.stderr)

    results = run_table(config, args.threads, progress)
    if args.out:
        for path in write_tables(config, results, args.out):
            print(f"wrote {path}", file=sys.stderr)
    sys.stdout.write(table_csv(config, results))
    print(f"{config.name}: {len(results)} cells in {time.perf_counter() - start:.1f} s", file=sys.stderr)
    return EXIT_OK


def cmd_validate(args) -> int:
    config = _table(args)
    orders = args.order or list(config.orders)
    step = (args.step if args.step is not None else DEFAULT_STEP) * config.T
    rows = []
    for n in orders:
        base = _cell(config, n, args.L[0])
        ode = ode_filter(base.design, base.input_function, config.T, step)
        for L in args.L:
            d = cross_validate(_cell(config, n, L), step, ode)
            rows.append((config.family.value, n, L, d))
    print(f"{'family':6s} {'n':>3s} {'L':>5s} {'tau':>10s} {'l2':>11s} {'sup':>11s} {'l2_shift':>11s} {'sup_shift':>11s}")
    for fam, n, L, d in rows:
        print(f"{fam:6s} {n:3d} {L:5d} {d.tau:10.6f} {d.l2_full:11.3e} {d.sup_full:11.3e} "
              f"{d.l2_shifted:11.3e} {d.sup_shifted:11.3e}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["family", "n", "L", "tau", "l2_full", "sup_full", "l2_shifted", "sup_shifted"])
            for fam, n, L, d in rows:
                w.writerow([fam, n, L] + [f"{v:.9e}" for v in
                           (d.tau, d.l2_full, d.sup_full, d.l2_shifted, d.sup_shifted)])
    return EXIT_OK


def cmd_calibrate(args) -> int:
    if args.anchor is not None:
        if args.method == "spectral" and args.L is None:
            raise ConfigError("--L", "the spectral method needs the truncation order of the anchor")
        anchors = {args.L: args.anchor}
    else:
        anchors = dict(cal.BW3_APRIORI_ANCHORS)
    design = _design(args)
    bracket = (args.bracket[0] * math.pi, args.bracket[1] * math.pi)
    results = []
    for L, value in anchors.items():
        res = cal.calibrate(value, design, L if args.method == "spectral" else None, bracket=bracket)
        results.append(res)
        label = "-" if L is None else str(L)
        print(f"L={label:>5s} anchor={value:.6f}  tau={res.tau:.9f} (res {res.tau_residual:.1e})  "
              f"cutoff={res.cutoff:.6f} = {res.cutoff / math.pi:.6f} pi (res {res.cutoff_residual:.1e})")
    cutoffs = np.array([r.cutoff for r in results])
    mean = float(cutoffs.mean())
    spread = float((cutoffs.max() - cutoffs.min()) / mean)
    print(f"consensus cutoff {mean:.6f} = {mean / math.pi:.6f} pi, relative spread {spread:.2e}")
    print(f"bundled configs use {CALIBRATED_CUTOFF / math.pi:g} pi")
    return EXIT_OK


def cmd_render_poly(args) -> int:
    design = _design(args)
    region = (args.min, args.max, args.min, args.max)
    write_ppm(args.out, domain_coloring(design, region, (args.px, args.px)))
    print(f"wrote {args.out} ({args.px}x{args.px})", file=sys.stderr)
    return EXIT_OK


def cmd_emit(args) -> int:
    config = _table(args)
    exp = _cell(config, args.order, args.L)
    res = simulate(exp)
    grid = np.linspace(0.0, exp.T, args.grid)
    pairs = [("u", res["u"]), ("g", res["g"]), ("x", res["x"]), ("x_star", res["x*"])]
    emit_signal_csv(pairs, grid, args.out)
    print(f"wrote {args.out}; tau = {res['tau']:.9f}", file=sys.stderr)
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def _design_flags(p, order_default=3):
    p.add_argument("--family", choices=[f.value for f in Family], default="bw")
    p.add_argument("--order", type=int, default=order_default)
    p.add_argument("--ripple", type=float, default=0.1, help="Chebyshev ripple factor")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--cutoff", type=float, help="cutoff in rad/s")
    g.add_argument("--cutoff-pi", type=float, help="cutoff in multiples of pi")
    p.add_argument("--kind", choices=[k.value for k in PassKind], default="lowpass")


def _config_flags(p, seed=True, threads=True):
    p.add_argument("--config", required=True,
                   help="JSON config path or bundled name (" + ", ".join(bundled_names()) + ")")
    if seed:
        p.add_argument("--seed", type=int)
    p.add_argument("--shift-mode", choices=[e.value for e in Extension])
    if threads:
        p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="specfilt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("matrices", help="dump a block matrix as CSV")
    p.add_argument("--kind", choices=sorted(MATRIX_KINDS), required=True)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--L", type=int, default=8)
    p.add_argument("--param", type=float, help="cut point for gain, delay for shifts")
    p.add_argument("--out")
    p.set_defaults(func=cmd_matrices)

    p = sub.add_parser("design", help="poles, constants and delays of a filter design")
    _design_flags(p)
    p.add_argument("--omega-pi", type=float, default=10.0, help="frequency for the delays, multiples of pi")
    p.add_argument("--csv", help="also write the poles to this CSV file")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("simulate", help="errors of one (order, L) cell")
    _config_flags(p)
    p.add_argument("--order", type=int)
    p.add_argument("--L", type=int)
    p.add_argument("-M", "--M", type=int, dest="M")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("experiment", help="run a table config and write CSV tables")
    _config_flags(p)
    p.add_argument("--out", help="output directory for <name>.csv and <name>_long.csv")
    p.add_argument("-M", "--M", type=int, dest="M")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("validate", help="compare the spectral output with an RK4 time-domain solution")
    _config_flags(p, seed=False, threads=False)
    p.add_argument("--order", type=int, action="append")
    p.add_argument("--L", type=int, nargs="+", default=[128, 256, 512])
    p.add_argument("--step", type=float, help="RK4 step as a fraction of T")
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("calibrate", help="recover the cutoff from a-priori error anchors")
    _design_flags(p)
    p.add_argument("--anchor", type=float, help="a-priori error value; default uses the built-in anchors")
    p.add_argument("--L", type=int, help="truncation order of --anchor")
    p.add_argument("--method", choices=["spectral", "integral"], default="spectral")
    p.add_argument("--bracket", type=float, nargs=2, default=[10.0, 78.0], metavar=("LO", "HI"),
                   help="cutoff bracket in multiples of pi")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("render-poly", help="domain-coloring PPM of a characteristic polynomial")
    _design_flags(p)
    p.add_argument("--min", type=float, default=-2.0)
    p.add_argument("--max", type=float, default=2.0)
    p.add_argument("--px", type=int, default=400)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render_poly)

    p = sub.add_parser("emit", help="sample u, g, x, x* of one run to CSV")
    _config_flags(p, threads=False)
    p.add_argument("--order", type=int)
    p.add_argument("--L", type=int)
    p.add_argument("--grid", type=int, default=2000)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_emit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CalibrationError as exc:
        print(f"calibration error: {exc}", file=sys.stderr)
        return EXIT_CALIBRATION
    except (NumericalError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"invalid argument: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
