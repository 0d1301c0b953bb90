#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
""" Data generators for the inverse Gaussian example and the censored GEV
regression example.

Every generator is a pure function of its configuration. A configuration's
seed starts a numpy SeedSequence; covariates, lifetimes and censoring times
come from spawned, disjoint child streams.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mplkit.distributions.gev import GevParams3, check_scale, check_shape, gev_quantile, uniform_open
from mplkit.distributions.inversegaussian import IgParams, ig_sample
from mplkit.errors import DomainError
from mplkit.inference.gevaft import CensoredDataset
from mplkit.inference.iginference import IgSample
from mplkit.simulation.censoring import calibrate_censoring


@dataclass(frozen=True)
class SimConfigIG:
    """ Inverse Gaussian lifetimes, all uncensored. """
    n: int
    mu: float = 2.0
    lam: float = 4.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"Sample size {self.n} is less than 2.")
        IgParams(self.mu, self.lam)

    @property
    def params(self) -> IgParams:
        return IgParams(self.mu, self.lam)


@dataclass(frozen=True)
class SimConfigGEV:
    """ GEV regression lifetimes with right censoring.

    Covariates are x1 = 1 and x2 ~ Uniform(0, 1); lifetimes follow
    GEV(phi1 + phi2 x2, sigma, xi).

    Attributes
    ----------
    target_censor_rate: float
        0 disables censoring.
    calibration_seed: int
        Seed of the draws calibrating the censoring shift; shared by every
        replicate of a Monte Carlo cell.
    """
    n: int
    phi: tuple = (1.0, 1.0)
    sigma: float = 1.0
    xi: float = 2.0
    target_censor_rate: float = 0.25
    seed: int = 0
    calibration_seed: int = 0

    def __post_init__(self):
        if self.n < 4:
            raise DomainError(f"Sample size {self.n} is less than 4.")
        if not 0 <= self.target_censor_rate < 1:
            raise DomainError(
                f"Censoring rate {self.target_censor_rate} is not in [0, 1).")
        if len(self.phi) != 2:
            raise DomainError(f"phi {self.phi} does not have two coefficients.")
        object.__setattr__(self, "phi", tuple(float(v) for v in self.phi))
        check_scale(self.sigma)
        check_shape(self.xi)


def gen_ig(cfg: SimConfigIG) -> IgSample:
    """ n IG(mu, lambda) lifetimes. """
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    return IgSample(ig_sample(cfg.n, cfg.params, rng))


def censoring_shift(cfg: SimConfigGEV) -> float:
    """ The calibrated shift of the censoring law; +inf without censoring. """
    if cfg.target_censor_rate == 0:
        return np.inf
    return calibrate_censoring(cfg.target_censor_rate, cfg).shift


def gen_gev_aft(cfg: SimConfigGEV) -> CensoredDataset:
    """ A right-censored GEV regression dataset.

    T_j ~ GEV(eta_j, sigma, xi) and C_j = c + T'_j with T'_j an independent
    copy of T_j; y_j = min(T_j, C_j) and delta_j = I(T_j <= C_j).
    """
    covariates, lifetimes, censoring = np.random.SeedSequence(cfg.seed).spawn(3)

    x2 = np.random.default_rng(covariates).random(cfg.n)
    X = np.column_stack([np.ones(cfg.n), x2])
    eta = X @ np.asarray(cfg.phi)
    standard = GevParams3(0.0, cfg.sigma, cfg.xi)

    T = eta + gev_quantile(uniform_open(cfg.n, np.random.default_rng(lifetimes)), standard)
    C = censoring_shift(cfg) + eta \
        + gev_quantile(uniform_open(cfg.n, np.random.default_rng(censoring)), standard)

    delta = (T <= C).astype(int)
    y = np.where(delta == 1, T, C)
    return CensoredDataset(y, delta, X)
