#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import log_ndtr, ndtr

from mplkit.errors import DomainError


@dataclass(frozen=True)
class IgParams:
    """ Parameters of the inverse Gaussian distribution IG(mu, lambda).

    Attributes
    ----------
    mu: float
        The mean, > 0.
    lam: float
        The dispersion, > 0.
    """
    mu: float
    lam: float

    def __post_init__(self):
        if not self.mu > 0:
            raise DomainError(f"IG mean {self.mu} is not positive.")
        if not self.lam > 0:
            raise DomainError(f"IG dispersion {self.lam} is not positive.")

    @property
    def variance(self) -> float:
        return self.mu ** 3 / self.lam


def _positive(x):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("IG observations must be positive.")
    return x


def ig_logpdf(x, p: IgParams):
    """ Log density of IG(mu, lambda).

    log f = 0.5 log(lambda / (2 pi x^3)) - lambda (x - mu)^2 / (2 mu^2 x)

    Parameters
    ----------
    x: float | numpy.ndarray
        Positive observations.
    p: IgParams

    Returns
    -------
    float | numpy.ndarray
    """
    x = _positive(x)
    value = 0.5 * np.log(p.lam / (2.0 * np.pi * x ** 3)) \
        - p.lam * (x - p.mu) ** 2 / (2.0 * p.mu ** 2 * x)
    return value[()]


def ig_cdf(x, p: IgParams):
    """ Distribution function of IG(mu, lambda).

    The exp(2 lambda / mu) factor of the second term is combined with the
    normal tail on the log scale so that it cannot overflow.
    """
    x = _positive(x)
    root = np.sqrt(p.lam / x)
    first = ndtr(root * (x / p.mu - 1.0))
    second = np.exp(2.0 * p.lam / p.mu + log_ndtr(-root * (x / p.mu + 1.0)))
    return np.clip(first + second, 0.0, 1.0)[()]


def ig_sample(n: int, p: IgParams, rng: np.random.Generator) -> np.ndarray:
    """ Draw n values from IG(mu, lambda).

    Uses the transformation of a chi-square(1) variate with a binary choice
    between the two roots, which needs no rejection step. All n normals are
    drawn before the n uniforms, so a given generator state always yields the
    same sample.

    Parameters
    ----------
    n: int
        Sample size, >= 1.
    p: IgParams
    rng: numpy.random.Generator

    Returns
    -------
    numpy.ndarray
        n positive draws.
    """
    if n < 1:
        raise DomainError(f"Sample size {n} is less than 1.")
    y = rng.standard_normal(n) ** 2
    u = rng.random(n)

    # Smaller root of the quadratic, written without cancellation:
    # mu (1 + a - sqrt(a^2 + 2a)) = mu / (1 + a + sqrt(a^2 + 2a)).
    a = p.mu * y / (2.0 * p.lam)
    x = p.mu / (1.0 + a + np.sqrt(a * (a + 2.0)))
    return np.where(u <= p.mu / (p.mu + x), x, p.mu ** 2 / x)
