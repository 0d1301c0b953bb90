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

from mplkit.errors import DomainError, ShapeTooSmallError

# Shapes closer to zero than this are rejected: every formula divides by xi
# and the Gumbel branch is not implemented.
MIN_ABS_SHAPE = 1e-8


def check_shape(xi: float):
    if not np.isfinite(xi):
        raise DomainError(f"GEV shape {xi} is not finite.")
    if abs(xi) < MIN_ABS_SHAPE:
        raise ShapeTooSmallError(
            f"GEV shape {xi} is too close to zero (|xi| < {MIN_ABS_SHAPE}).")


def check_scale(sigma: float):
    if not sigma > 0:
        raise DomainError(f"GEV scale {sigma} is not positive.")


@dataclass(frozen=True)
class GevParams3:
    """ Location, scale and shape of a GEV distribution.

    Attributes
    ----------
    loc: float
        Location mu.
    scale: float
        Scale sigma, > 0.
    shape: float
        Shape xi, |xi| >= MIN_ABS_SHAPE.
    """
    loc: float
    scale: float
    shape: float

    def __post_init__(self):
        check_scale(self.scale)
        check_shape(self.shape)

    def m(self, y):
        """ 1 + xi (y - mu) / sigma. Positive exactly on the support. """
        return 1.0 + self.shape * (np.asarray(y, dtype=float) - self.loc) / self.scale


def gev_logpdf(y, p: GevParams3):
    """ Log density of the GEV distribution.

    Returns -inf outside the support (1 + xi (y - mu) / sigma <= 0) rather
    than raising, so that optimizers can reject infeasible points.
    """
    m = p.m(y)
    inside = m > 0
    safe_m = np.where(inside, m, 1.0)
    value = -np.log(p.scale) - (1.0 / p.shape + 1.0) * np.log(safe_m) \
        - safe_m ** (-1.0 / p.shape)
    return np.where(inside, value, -np.inf)[()]


def gev_cdf(y, p: GevParams3):
    """ Distribution function exp(-m^(-1/xi)).

    Outside the support F is 0 below the lower end point (xi > 0) and 1 above
    the upper end point (xi < 0).
    """
    m = p.m(y)
    inside = m > 0
    safe_m = np.where(inside, m, 1.0)
    value = np.exp(-safe_m ** (-1.0 / p.shape))
    outside = 0.0 if p.shape > 0 else 1.0
    return np.where(inside, value, outside)[()]


def gev_survivor(y, p: GevParams3):
    """ Survivor function 1 - F. """
    return (1.0 - np.asarray(gev_cdf(y, p)))[()]


def gev_quantile(u, p: GevParams3):
    """ Inverse of gev_cdf: mu + sigma ((-log u)^(-xi) - 1) / xi.

    Parameters
    ----------
    u: float | numpy.ndarray
        Probabilities strictly inside (0, 1).
    """
    u = np.asarray(u, dtype=float)
    if np.any(~((u > 0) & (u < 1))):
        raise DomainError("GEV quantile probabilities must lie in (0, 1).")
    # expm1 keeps (-log u)^-xi - 1 accurate when u is close to exp(-1).
    w = np.expm1(-p.shape * np.log(-np.log(u))) / p.shape
    return (p.loc + p.scale * w)[()]


def gev_sample(n: int, p: GevParams3, rng: np.random.Generator) -> np.ndarray:
    """ n GEV draws by the inverse-CDF transform of uniforms. """
    if n < 1:
        raise DomainError(f"Sample size {n} is less than 1.")
    return np.asarray(gev_quantile(uniform_open(n, rng), p))


def uniform_open(n: int, rng: np.random.Generator) -> np.ndarray:
    """ n uniforms on the open interval (0, 1). """
    u = rng.random(n)
    # Generator.random is on [0, 1); map an exact zero to the smallest double.
    return np.where(u > 0, u, np.finfo(float).tiny)
