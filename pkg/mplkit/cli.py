#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
""" Command-line front end.

    python -m mplkit fit-ig sample.txt
    python -m mplkit fit-gev data.csv --kind mp --bracket 0.5:5
    python -m mplkit simulate --model gev --n 50 --seed 7 --out data.csv
    python -m mplkit replicate --table 1 --reps 1000 --seed 42 --out results --format csv,md

Exit codes: 0 success, 1 usage, 2 input error, 3 degenerate data, 4 infeasible
model.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np
import pandas as pd

from mplkit.config.grammar import parse_interval
from mplkit.config.runconfig import OPTIONS, POSITIVE, RunConfig
from mplkit.errors import (
    CalibrationError, DatasetError, DegenerateSampleError, DomainError, InfeasibleError,
    InputError, ModificationUndefinedError, NoFeasibleInterestError,
)
from mplkit.formatting.tables import to_markdown, write_table
from mplkit.inference.gevaft import CensoredDataset, GevAftParams
from mplkit.inference.gevshape import GevAftShape
from mplkit.inference.iginference import IgSample, fit_ig
from mplkit.inference.profilemodel import KINDS, MODIFIED_PROFILE
from mplkit.montecarlo.harness import replicate_table
from mplkit.simulation.generators import SimConfigGEV, SimConfigIG, gen_gev_aft, gen_ig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_INFEASIBLE = 4

# First match wins.
EXIT_CODES = [
    (DegenerateSampleError, EXIT_DEGENERATE),
    ((NoFeasibleInterestError, InfeasibleError, ModificationUndefinedError,
      CalibrationError), EXIT_INFEASIBLE),
    ((InputError, DatasetError, DomainError, OSError, ValueError), EXIT_INPUT),
]


class ArgumentParser(argparse.ArgumentParser):
    """ Usage errors exit with EXIT_USAGE. """
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _option_type(name):
    def convert(term):
        try:
            _, value = OPTIONS.convert(name, term)
            if name in POSITIVE:
                OPTIONS.check_positive(name, value)
            return value
        except ValueError as err:
            raise argparse.ArgumentTypeError(str(err))
    return convert


def _bracket(term):
    try:
        return parse_interval(term)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err))


def create_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--config", help="configuration file of key = value lines")
    common.add_argument("--seed", type=_option_type("seed"),
                        help="random seed; falls back to the file, then MPLKIT_SEED")
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress, -vv for optimiser traces")

    fitting = ArgumentParser(add_help=False)
    fitting.add_argument("--json", action="store_true", default=None,
                         help="print a JSON object instead of text")

    parser = ArgumentParser(
        prog="mplkit",
        description="Profile and modified profile likelihood estimation.")
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    p = commands.add_parser("fit-ig", parents=[common, fitting],
                            help="estimate the inverse Gaussian dispersion")
    p.add_argument("input", nargs="?", help="file with one positive value per line")
    p.add_argument("--data", help="inline comma separated values instead of a file")
    p.set_defaults(run=cmd_fit_ig)

    p = commands.add_parser("fit-gev", parents=[common, fitting],
                            help="estimate the GEV regression shape")
    p.add_argument("input", help="CSV with header y,delta,x1,...,xp")
    p.add_argument("--kind", choices=KINDS, help="p or mp (default p)")
    p.add_argument("--bracket", type=_bracket, help="shape interval a:b")
    p.add_argument("--tol", type=_option_type("tol"), help="inner gradient tolerance")
    p.add_argument("--grid", type=_option_type("grid"), help="outer grid points")
    p.add_argument("--max-iter", dest="max_iter", type=_option_type("max_iter"),
                   help="inner iterations before the simplex fallback")
    p.set_defaults(run=cmd_fit_gev)

    p = commands.add_parser("simulate", parents=[common],
                            help="write a simulated dataset")
    p.add_argument("--model", choices=("ig", "gev"))
    p.add_argument("--n", type=_option_type("n"), help="sample size")
    p.add_argument("--out", help="output file; '-' or omitted for stdout")
    p.set_defaults(run=cmd_simulate)

    p = commands.add_parser("replicate", parents=[common],
                            help="replicate a Monte Carlo table")
    p.add_argument("--table", type=_option_type("table"), choices=(1, 2))
    p.add_argument("--reps", type=_option_type("reps"), help="replicates per cell")
    p.add_argument("--workers", type=_option_type("workers"), help="parallel workers")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", type=_option_type("format"),
                   help="csv, md or csv,md")
    p.set_defaults(run=cmd_replicate)
    return parser


# -----------------------------------------------------------------------------
# Input
# -----------------------------------------------------------------------------

def read_ig_values(path) -> np.ndarray:
    """ One positive value per line; blank lines and '#' comments skipped.

    Throws
    ------
    InputError
        Naming the first offending line.
    """
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError as err:
        raise InputError(f"{path} cannot be read: {err.strerror}.")
    values = []
    for lineno, line in enumerate(lines, start=1):
        term = line.split("#", 1)[0].strip()
        if not term:
            continue
        try:
            value = float(term)
        except ValueError:
            value = np.nan
        if not (np.isfinite(value) and value > 0):
            raise InputError(f"{path}, line {lineno}: {term} is not a positive number.")
        values.append(value)
    return np.array(values)


def parse_inline(data) -> np.ndarray:
    values = []
    for i, term in enumerate(data.split(","), start=1):
        try:
            value = float(term)
        except ValueError:
            value = np.nan
        if not (np.isfinite(value) and value > 0):
            raise InputError(f"Value {i} of --data: {term.strip()} is not a positive number.")
        values.append(value)
    return np.array(values)


def read_gev_dataset(path) -> CensoredDataset:
    """ A headered CSV of y, delta and the covariate columns, intercept first.

    Throws
    ------
    InputError
        If the file cannot be read or columns are missing or non-numeric.
    DatasetError
        If the data do not form a valid censored dataset.
    """
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as err:
        raise InputError(f"{path} cannot be read: {err}")
    frame.columns = [str(c).strip().lower() for c in frame.columns]
    missing = [c for c in ("y", "delta") if c not in frame.columns]
    if missing:
        raise InputError(f"{path} has no column {', '.join(missing)}.")
    covariates = [c for c in frame.columns if c not in ("y", "delta")]
    if not covariates:
        raise InputError(f"{path} has no covariate columns.")
    try:
        numeric = frame.astype(float)
    except ValueError as err:
        raise InputError(f"{path} holds a non-numeric value: {err}")
    return CensoredDataset(numeric["y"].to_numpy(), numeric["delta"].to_numpy(),
                           numeric[covariates].to_numpy())


# -----------------------------------------------------------------------------
# Commands
# -----------------------------------------------------------------------------

def _emit(fields: dict, as_json):
    if as_json:
        print(json.dumps(fields, indent=2))
        return
    width = max(len(k) for k in fields)
    for k, v in fields.items():
        if isinstance(v, float):
            v = f"{v:.10g}"
        elif isinstance(v, list):
            v = ", ".join(f"{x:.10g}" if isinstance(x, float) else str(x) for x in v)
        print(f"{k:<{width}}  {v}")


def cmd_fit_ig(args, config: RunConfig) -> int:
    """ Closed-form profile and modified profile estimates of lambda. """
    if args.data is not None:
        xs = parse_inline(args.data)
    elif args.input is not None:
        xs = read_ig_values(args.input)
    else:
        raise InputError("Give an input file or --data.")
    fit = fit_ig(IgSample(xs))
    fields = {k: float(v) for k, v in fit._asdict().items()}
    fields["n"] = len(xs)
    _emit(fields, config["json"])
    return EXIT_OK


def cmd_fit_gev(args, config: RunConfig) -> int:
    """ Profile or modified profile estimate of the GEV regression shape. """
    dataset = read_gev_dataset(args.input)
    kind = config["kind"]
    if kind not in KINDS:
        raise ValueError(f"Option kind: {kind} is not p or mp.")
    model = GevAftShape(dataset, config.optimizer_settings())
    fit = model.fit(kind)

    params = GevAftParams.from_chi(fit.diagnostics["chi_hat"], fit.psi_hat)
    values = np.array([v for _, v in fit.curve])
    fields = {
        "kind": kind,
        "n": dataset.n,
        "events": dataset.r,
        "xi_hat": fit.psi_hat,
        "phi_hat": [float(v) for v in params.phi],
        "sigma_hat": params.sigma,
        "value": fit.value,
        "bracket": list(fit.diagnostics["bracket"]),
        "grid_points": fit.diagnostics["grid_points"],
        "finite_points": int(np.sum(np.isfinite(values))),
        "evaluated": fit.diagnostics["evaluated"],
        "refinements": fit.diagnostics["refinements"],
        "boundary": fit.diagnostics["boundary"],
        "inner_converged": bool(fit.diagnostics["inner_converged"]),
        "converged": fit.diagnostics["converged"],
    }
    if kind == MODIFIED_PROFILE:
        fields.update(log_det_info=float(fit.diagnostics["log_det_info"]),
                      log_det_ell=float(fit.diagnostics["log_det_ell"]),
                      condition=float(fit.diagnostics["condition"]))
    _emit(fields, config["json"])
    return EXIT_OK


def cmd_simulate(args, config: RunConfig) -> int:
    """ Write an inverse Gaussian sample or a censored GEV regression dataset. """
    model, n, seed = config["model"], config["n"], config.seed
    if model == "ig":
        sample = gen_ig(SimConfigIG(n, seed=seed))
        text = "".join(f"{x:.17g}\n" for x in sample.xs)
    elif model == "gev":
        d = gen_gev_aft(SimConfigGEV(n, seed=seed, calibration_seed=seed))
        frame = pd.DataFrame({"y": d.y, "delta": d.delta})
        for j in range(d.p):
            frame[f"x{j + 1}"] = d.X[:, j]
        text = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")
    else:
        raise ValueError(f"Option model: {model} is not ig or gev.")

    out = args.out
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info("Wrote %d observations to %s.", n, out)
    return EXIT_OK


def cmd_replicate(args, config: RunConfig) -> int:
    """ Replicate a table and write it in the requested formats. """
    table = replicate_table(
        config["table"],
        replications=config["reps"],
        master_seed=config.seed,
        workers=config["workers"],
        settings=config.optimizer_settings())
    paths = write_table(table, config["out"], tuple(config["format"]))
    print(to_markdown(table))
    print(f"Wall time: {table.wall_time:.2f} s")
    print(f"Failed replicates: {table.total_failures}")
    for path in paths:
        print(f"Wrote {path}")
    return EXIT_OK


# -----------------------------------------------------------------------------
# Entry point
# -----------------------------------------------------------------------------

def configure_logging(verbosity):
    level = logging.WARNING if verbosity <= 0 \
        else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def exit_code(err) -> int:
    for types, code in EXIT_CODES:
        if isinstance(err, types):
            return code
    raise err


def main(argv=None) -> int:
    parser = create_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    flags = {k: v for k, v in vars(args).items()
             if k not in ("command", "run", "config", "verbose", "input", "data")}
    try:
        config = RunConfig.from_sources(flags, args.config)
    except (OSError, ValueError) as err:
        print(f"mplkit: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    print(f"Seed: {config.seed} ({config.seed_source})", file=sys.stderr)

    try:
        return args.run(args, config)
    except Exception as err:
        code = exit_code(err)
        print(f"mplkit: error: {err}", file=sys.stderr)
        return code
