#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
""" Calibration of the censoring law.

A censoring time is a shifted, independent copy of the subject's own
lifetime, C_j = c + T'_j with T'_j ~ GEV(x_j phi, sigma, xi). Since T_j and
T'_j share their location, T_j - T'_j = sigma (W - W') with W, W' standard
GEV draws, so the censoring probability P(T > C) depends only on (c, sigma,
xi). The shift c is found by bisection on a fixed Monte Carlo sample of
W - W'; with the draws fixed the estimated rate is monotone in c.
"""
from __future__ import annotations

import functools
import logging
from typing import NamedTuple

import numpy as np

from mplkit.distributions.gev import GevParams3, gev_sample
from mplkit.errors import CalibrationError, DomainError

logger = logging.getLogger(__name__)

CALIBRATION_DRAWS = 100_000
_BISECTION_STEPS = 200
_MAX_EXPANSIONS = 60


class CensoringCalibration(NamedTuple):
    """ The calibrated shift and the rate it achieves on the calibration draws.

    Attributes
    ----------
    shift: float
        c in C_j = c + T'_j.
    achieved_rate: float
        Fraction of the calibration draws with T > C.
    target: float
    """
    shift: float
    achieved_rate: float
    target: float


def lifetime_differences(sigma, xi, draws=CALIBRATION_DRAWS, seed=0) -> np.ndarray:
    """ draws values of T - T' for two independent GEV(0, sigma, xi) lifetimes. """
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), draws]))
    law = GevParams3(0.0, sigma, xi)
    return gev_sample(draws, law, rng) - gev_sample(draws, law, rng)


def censoring_rate(shift, differences) -> float:
    """ The fraction of T - T' above the shift, i.e. of lifetimes censored. """
    return float(np.mean(differences > shift))


def calibrate_censoring(target: float, cfg, draws=CALIBRATION_DRAWS) -> CensoringCalibration:
    """ The shift c giving P(T > C) = target.

    Parameters
    ----------
    target: float
        The censoring fraction, 0 < target < 1.
    cfg: SimConfigGEV
        The lifetime law (sigma, xi) and calibration_seed.
    draws: int
        Monte Carlo draws of T - T'.

    Returns
    -------
    CensoringCalibration

    Throws
    ------
    CalibrationError
        If no bracket of the target can be found.
    """
    if not 0 < target < 1:
        raise DomainError(f"Censoring target {target} is not in (0, 1).")
    return _calibrate(float(target), float(cfg.sigma), float(cfg.xi), int(draws),
                      int(cfg.calibration_seed))


@functools.lru_cache(maxsize=64)
def _calibrate(target, sigma, xi, draws, seed):
    differences = lifetime_differences(sigma, xi, draws, seed)

    # Expand [lo, hi] until rate(lo) >= target >= rate(hi).
    lo, hi = -sigma, sigma
    for _ in range(_MAX_EXPANSIONS):
        if censoring_rate(lo, differences) >= target:
            break
        lo *= 2.0
    else:
        raise CalibrationError(f"Cannot bracket censoring target {target} from below.")
    for _ in range(_MAX_EXPANSIONS):
        if censoring_rate(hi, differences) <= target:
            break
        hi *= 2.0
    else:
        raise CalibrationError(f"Cannot bracket censoring target {target} from above.")

    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if censoring_rate(mid, differences) > target:
            lo = mid
        else:
            hi = mid
    achieved = censoring_rate(hi, differences)
    logger.info("Censoring shift %.6g gives rate %.4f (target %.4f).", hi, achieved, target)
    return CensoringCalibration(hi, achieved, target)
