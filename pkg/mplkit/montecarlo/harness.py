#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
""" Monte Carlo runs of the profile and modified profile estimators.

A cell is one sample size. Each replicate of a cell draws one dataset from a
seed derived from (master seed, n, replicate index) and hands that same
dataset to every estimator. Replicates are independent, run through joblib
and are collected in index order, so a table depends on the master seed only.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from mplkit.inference.gevshape import GevAftShape
from mplkit.inference.iginference import fit_ig
from mplkit.inference.profilemodel import KINDS, PROFILE, check_kind
from mplkit.montecarlo.summary import McSummary, summarize
from mplkit.optimize.settings import OptimizerSettings
from mplkit.simulation.generators import SimConfigGEV, SimConfigIG, gen_gev_aft, gen_ig

logger = logging.getLogger(__name__)

IG = "ig"
GEV = "gev"
MODELS = (IG, GEV)

TABLE1_SIZES = (3, 5, 7, 9, 11, 13, 15, 17, 19, 25, 30, 50)
TABLE2_SIZES = (20, 50)

SUMMARY_COLUMNS = ["n", "estimator", "mean", "variance", "bias", "mse", "rb_percent",
                   "n_converged", "n_failed"]


@dataclass(frozen=True)
class McConfig:
    """ A Monte Carlo experiment.

    Attributes
    ----------
    replications: int
        Replicates per cell.
    sample_sizes: (int, ...)
        One cell per sample size.
    model: str
        "ig" or "gev".
    master_seed: int
        Every replicate seed derives from it.
    workers: int
        joblib worker processes; 1 runs serially.
    estimators: (str, ...)
        Kinds fitted on every dataset, "p" and/or "mp".
    mu, lam: float
        True IG mean and dispersion.
    phi, sigma, xi, censor_rate: float
        True GEV regression parameters and censoring fraction.
    settings: OptimizerSettings
        Optimiser settings of the GEV fits.
    """
    replications: int = 1000
    sample_sizes: tuple = TABLE1_SIZES
    model: str = IG
    master_seed: int = 0
    workers: int = 1
    estimators: tuple = KINDS
    mu: float = 2.0
    lam: float = 4.0
    phi: tuple = (1.0, 1.0)
    sigma: float = 1.0
    xi: float = 2.0
    censor_rate: float = 0.25
    settings: OptimizerSettings = field(default_factory=OptimizerSettings)

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError(f"Replications {self.replications} is less than 1.")
        if len(self.sample_sizes) == 0:
            raise ValueError("No sample sizes given.")
        if self.model not in MODELS:
            raise ValueError(f"Model {self.model} not recognised.")
        if self.workers < 1:
            raise ValueError(f"Workers {self.workers} is less than 1.")
        if self.master_seed < 0:
            raise ValueError(f"Master seed {self.master_seed} is negative.")
        if len(self.estimators) == 0:
            raise ValueError("No estimators given.")
        for kind in self.estimators:
            check_kind(kind)
        object.__setattr__(self, "sample_sizes", tuple(int(n) for n in self.sample_sizes))
        object.__setattr__(self, "estimators", tuple(self.estimators))

    @property
    def true_value(self) -> float:
        """ The true interest parameter: lambda or xi. """
        return self.lam if self.model == IG else self.xi


class ReplicateResult(NamedTuple):
    """ The estimates of one replicate.

    Attributes
    ----------
    index: int
    seed: int
        The dataset seed.
    digests: {str: str}
        Content hash of the dataset each estimator saw.
    estimates: {str: float}
        nan for a failed estimator.
    errors: {str: str}
        Failure reason per failed estimator.
    """
    index: int
    seed: int
    digests: dict
    estimates: dict
    errors: dict

    def converged(self, kind) -> bool:
        return kind not in self.errors


class CellResult(NamedTuple):
    """ All replicates of one sample size, in index order. """
    n: int
    replicates: tuple

    def estimates(self, kind) -> np.ndarray:
        """ The converged estimates of kind. """
        return np.array([r.estimates[kind] for r in self.replicates if r.converged(kind)])

    def n_failed(self, kind) -> int:
        return sum(not r.converged(kind) for r in self.replicates)

    def summary(self, kind, true_value) -> McSummary:
        """ The summary of kind; all-nan when every replicate failed. """
        failed = self.n_failed(kind)
        estimates = self.estimates(kind)
        if len(estimates) == 0:
            return McSummary(np.nan, np.nan, np.nan, np.nan, np.nan, 0, failed)
        return summarize(estimates, true_value, failed)


class TableResult(NamedTuple):
    """ A replicated table.

    Attributes
    ----------
    which: int
        1 (IG dispersion) or 2 (GEV shape).
    config: McConfig
    frame: pandas.DataFrame
        One row per (n, estimator) with SUMMARY_COLUMNS.
    cells: (CellResult, ...)
    wall_time: float
        Seconds.
    """
    which: int
    config: McConfig
    frame: pd.DataFrame
    cells: tuple
    wall_time: float

    def failures(self) -> dict:
        """ {n: {estimator: failed replicates}}. """
        return {cell.n: {kind: cell.n_failed(kind) for kind in self.config.estimators}
                for cell in self.cells}

    @property
    def total_failures(self) -> int:
        return int(self.frame["n_failed"].sum())


# -----------------------------------------------------------------------------
# Replicates
# -----------------------------------------------------------------------------

def replicate_seed(master_seed, n, index) -> int:
    """ The dataset seed of replicate index in the cell of size n. """
    state = np.random.SeedSequence([int(master_seed), int(n), int(index)])
    return int(state.generate_state(1, np.uint64)[0])


def run_replicate(cfg: McConfig, n, index) -> ReplicateResult:
    """ Draw one dataset and fit every estimator of cfg on it.

    Failures are recorded in the result, never raised.
    """
    seed = replicate_seed(cfg.master_seed, n, index)
    digests, estimates, errors = {}, {}, {}
    try:
        if cfg.model == IG:
            dataset = gen_ig(SimConfigIG(n, cfg.mu, cfg.lam, seed))
            fits = _fit_ig(dataset, cfg.estimators, digests)
        else:
            dataset = gen_gev_aft(SimConfigGEV(
                n, cfg.phi, cfg.sigma, cfg.xi, cfg.censor_rate, seed,
                calibration_seed=cfg.master_seed))
            fits = _fit_gev(dataset, cfg, digests)
    except (ValueError, ArithmeticError) as err:
        fits = {kind: err for kind in cfg.estimators}

    for kind in cfg.estimators:
        outcome = fits[kind]
        if isinstance(outcome, Exception):
            estimates[kind] = np.nan
            errors[kind] = f"{type(outcome).__name__}: {outcome}"
            logger.warning("Replicate %d of n=%d, %s failed: %s", index, n, kind, errors[kind])
        else:
            estimates[kind] = outcome
    return ReplicateResult(index, seed, digests, estimates, errors)


def _fit_ig(sample, kinds, digests):
    fits = {}
    try:
        fit = fit_ig(sample)
    except (ValueError, ArithmeticError) as err:
        fit = err
    for kind in kinds:
        digests[kind] = sample.digest()
        if isinstance(fit, Exception):
            fits[kind] = fit
        else:
            fits[kind] = fit.lambda_hat_p if kind == PROFILE else fit.lambda_hat_mp
    return fits


def _fit_gev(dataset, cfg, digests):
    fits = {}
    model = GevAftShape(dataset, cfg.settings)
    # The profile fit supplies the full MLE of the modified profile fit.
    for kind in sorted(cfg.estimators, key=lambda k: k != PROFILE):
        digests[kind] = model.dataset.digest()
        try:
            fit = model.fit(kind)
        except (ValueError, ArithmeticError) as err:
            fits[kind] = err
            continue
        if fit.diagnostics["converged"]:
            fits[kind] = fit.psi_hat
        else:
            fits[kind] = ArithmeticError(
                f"not converged (xi_hat {fit.psi_hat:.6g}, "
                f"boundary {fit.diagnostics['boundary']})")
    return fits


# -----------------------------------------------------------------------------
# Cells and tables
# -----------------------------------------------------------------------------

def run_cell(cfg: McConfig, n) -> CellResult:
    """ cfg.replications replicates at sample size n.

    Parameters
    ----------
    cfg: McConfig
    n: int

    Returns
    -------
    CellResult
        Replicates in index order, whatever the number of workers.
    """
    logger.info("Cell n=%d: %d %s replicates on %d worker(s).",
                n, cfg.replications, cfg.model, cfg.workers)
    started = time.perf_counter()
    replicates = Parallel(n_jobs=cfg.workers)(
        delayed(run_replicate)(cfg, n, i) for i in range(cfg.replications))
    cell = CellResult(int(n), tuple(replicates))
    logger.info("Cell n=%d done in %.2f s; failures %s.", n, time.perf_counter() - started,
                {kind: cell.n_failed(kind) for kind in cfg.estimators})
    return cell


def table_config(which, **overrides) -> McConfig:
    """ The configuration of a published table, with overrides applied. """
    if which == 1:
        base = McConfig(model=IG, sample_sizes=TABLE1_SIZES, mu=2.0, lam=4.0)
    elif which == 2:
        base = McConfig(model=GEV, sample_sizes=TABLE2_SIZES, xi=2.0, censor_rate=0.25)
    else:
        raise ValueError(f"Table {which} not recognised.")
    return replace(base, **overrides)


def summary_frame(cells, cfg: McConfig) -> pd.DataFrame:
    """ One row per (n, estimator), in cell then estimator order. """
    rows = []
    for cell in cells:
        for kind in cfg.estimators:
            s = cell.summary(kind, cfg.true_value)
            rows.append([cell.n, kind, s.mean, s.variance, s.bias, s.mse, s.rb_percent,
                         s.n_converged, s.n_failed])
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def replicate_table(which, **overrides) -> TableResult:
    """ Replicate Table 1 (IG dispersion, lambda = 4) or Table 2 (GEV shape,
    xi = 2, 25% censoring).

    Parameters
    ----------
    which: int
        1 or 2.
    overrides:
        McConfig fields replacing the table defaults, e.g. replications.

    Returns
    -------
    TableResult
    """
    cfg = table_config(which, **overrides)
    started = time.perf_counter()
    cells = tuple(run_cell(cfg, n) for n in cfg.sample_sizes)
    wall_time = time.perf_counter() - started
    logger.info("Table %d replicated in %.2f s.", which, wall_time)
    return TableResult(which, cfg, summary_frame(cells, cfg), cells, wall_time)

