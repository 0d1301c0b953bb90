#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
""" Profile and modified profile estimation of the inverse Gaussian
dispersion lambda, with the mean mu as nuisance parameter.

For fixed lambda the constrained estimate of mu is the sample mean, so the
profile curve has a closed form. Additive constants of the log-likelihood are
dropped; only differences and maximisers of the curves are meaningful.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from mplkit.errors import DegenerateSampleError, DomainError
from mplkit.inference.profilemodel import ProfileLikelihoodModel


@dataclass(frozen=True)
class IgSample:
    """ A sample of positive lifetimes.

    Parameters
    ----------
    xs: array_like
        At least two positive observations.
    """
    xs: np.ndarray

    def __post_init__(self):
        xs = np.array(self.xs, dtype=float).ravel()
        if len(xs) < 2:
            raise DegenerateSampleError(
                f"An IG sample needs at least 2 observations, got {len(xs)}.")
        if np.any(~(xs > 0)) or np.any(~np.isfinite(xs)):
            raise DomainError("IG observations must be positive and finite.")
        xs.setflags(write=False)
        object.__setattr__(self, "xs", xs)

    @property
    def n(self) -> int:
        return len(self.xs)

    @property
    def mean(self) -> float:
        return float(np.mean(self.xs))

    def digest(self) -> str:
        """ A content hash, identical for identical samples. """
        return hashlib.blake2b(self.xs.tobytes(), digest_size=16).hexdigest()


class IgFit(NamedTuple):
    """ Closed-form profile and modified profile estimates.

    Attributes
    ----------
    lambda_hat_p: float
        n / S.
    lambda_hat_mp: float
        (n - 1) / S.
    mu_hat: float
        The sample mean.
    s_stat: float
        S = (1 / xbar^2) sum (x_i - xbar)^2 / x_i.
    loglik_p_at_max: float
    loglik_mp_at_max: float
    """
    lambda_hat_p: float
    lambda_hat_mp: float
    mu_hat: float
    s_stat: float
    loglik_p_at_max: float
    loglik_mp_at_max: float


def ig_statistic(s: IgSample) -> float:
    """ S = sum 1/x_i - n/xbar, equal to (1/xbar^2) sum (x_i - xbar)^2 / x_i. """
    if np.ptp(s.xs) == 0:
        return 0.0
    stat = float(np.sum(1.0 / s.xs) - s.n / s.mean)
    return max(stat, 0.0)


def ig_statistic_direct(s: IgSample) -> float:
    """ S in its defining form. """
    xbar = s.mean
    return float(np.sum((s.xs - xbar) ** 2 / s.xs) / xbar ** 2)


def _check_lambda(lam):
    if not lam > 0:
        raise DomainError(f"IG dispersion {lam} is not positive.")


def profile_loglik_lambda(s: IgSample, lam: float) -> float:
    """ l_p(lambda) = (n/2) log lambda - (lambda / 2) S. """
    _check_lambda(lam)
    return 0.5 * s.n * np.log(lam) - 0.5 * lam * ig_statistic(s)


def modification_term(s: IgSample, lam: float) -> float:
    """ -0.5 log |j_mu mu| = -0.5 log(n lambda / xbar^3).

    mu_hat does not depend on lambda, so the Jacobian part of the modifying
    factor is 1.
    """
    _check_lambda(lam)
    return -0.5 * np.log(s.n * lam / s.mean ** 3)


def modified_profile_loglik_lambda(s: IgSample, lam: float) -> float:
    return profile_loglik_lambda(s, lam) + modification_term(s, lam)


def fit_ig(s: IgSample) -> IgFit:
    """ Closed-form maximisers of the two curves.

    Parameters
    ----------
    s: IgSample

    Returns
    -------
    IgFit

    Throws
    ------
    DegenerateSampleError
        If all observations are equal (S = 0), so the dispersion is unbounded.
    """
    stat = ig_statistic(s)
    if not stat > 0:
        raise DegenerateSampleError(
            "Degenerate sample, dispersion unbounded: all observations are equal.")
    lam_p = s.n / stat
    lam_mp = (s.n - 1) / stat
    return IgFit(
        lambda_hat_p=lam_p,
        lambda_hat_mp=lam_mp,
        mu_hat=s.mean,
        s_stat=stat,
        loglik_p_at_max=profile_loglik_lambda(s, lam_p),
        loglik_mp_at_max=modified_profile_loglik_lambda(s, lam_mp),
    )


class InverseGaussianDispersion(ProfileLikelihoodModel):
    """ Numerical profile estimation of lambda.

    fit_ig() is the production estimator; this model maximises the same curves
    numerically and serves as its independent check.

    Parameters
    ----------
    sample: IgSample
    """
    def __init__(self, sample: IgSample):
        self.sample = sample
        stat = ig_statistic(sample)
        if stat > 0:
            self.default_bracket = (0.01 * sample.n / stat, 100.0 * sample.n / stat)

    def profile_loglik(self, psi):
        return profile_loglik_lambda(self.sample, psi)

    def modified_profile_loglik(self, psi):
        return modified_profile_loglik_lambda(self.sample, psi)
