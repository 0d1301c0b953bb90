#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
""" One-dimensional maximisation of a profile likelihood curve.

A coarse grid locates the largest interior local maximum, then bounded Brent
iterations (golden section with parabolic steps) refine it between the
neighbouring grid points.
"""
from __future__ import annotations

import logging
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from mplkit.errors import NoFeasibleInterestError

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 41
DEFAULT_XTOL = 1e-8

# Stand-in for -inf handed to the scalar minimiser, which cannot interpolate
# through infinities.
_INFEASIBLE = np.finfo(float).max


class ProfileFit(NamedTuple):
    """ The maximiser of a profile likelihood curve.

    Attributes
    ----------
    psi_hat: float
        The maximising interest value (lambda_hat or xi_hat).
    value: float
        The curve at psi_hat.
    curve: ((float, float), ...)
        (psi, value) at every evaluated grid point, in ascending psi.
    inner_fits: (InnerFit, ...)
        The nuisance fit per grid point. Empty for closed-form nuisances.
    kind: str or None
        "p" or "mp".
    diagnostics: dict
        bracket, grid_points, evaluated, refinements, boundary, failures and any
        model-specific entries.
    """
    psi_hat: float
    value: float
    curve: tuple
    inner_fits: tuple = ()
    kind: str = None
    diagnostics: dict = None


def interest_grid(bracket, n_points=DEFAULT_GRID_POINTS) -> np.ndarray:
    """ Grid over a bracket, log-spaced when the bracket is positive. """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError(f"Bracket {bracket} is empty.")
    if n_points < 3:
        raise ValueError(f"A grid needs at least 3 points, got {n_points}.")
    if lo > 0:
        return np.geomspace(lo, hi, n_points)
    return np.linspace(lo, hi, n_points)


def interior_maxima(values) -> np.ndarray:
    """ Indices of the interior local maxima of a sampled curve.

    A point qualifies when it and both neighbours are finite, it is no lower
    than either neighbour and strictly higher than at least one of them.
    """
    v = np.asarray(values, dtype=float)
    if len(v) < 3:
        return np.array([], dtype=int)
    mid, left, right = v[1:-1], v[:-2], v[2:]
    finite = np.isfinite(mid) & np.isfinite(left) & np.isfinite(right)
    with np.errstate(invalid="ignore"):
        peak = (mid >= left) & (mid >= right) & (mid > np.minimum(left, right))
    return np.flatnonzero(finite & peak) + 1


def maximize_outer(curve_fn: Callable[[float], float], bracket,
                   n_grid=DEFAULT_GRID_POINTS, xtol=DEFAULT_XTOL,
                   stop_after_failure=False) -> ProfileFit:
    """ Maximise a curve over a bracket.

    The largest interior local maximum of the grid curve is refined. Only when
    the grid curve has none is its highest point taken, flagged as a boundary
    maximum: it then sits at a bracket end or next to an infeasible value.

    Parameters
    ----------
    curve_fn: Callable[[float], float]
        The curve. Non-finite values mark infeasible interest values.
    bracket: (float, float)
        The searched interval.
    n_grid: int
        Number of grid points.
    xtol: float
        Refinement tolerance relative to max(1, |psi|).
    stop_after_failure: bool
        Stop the sweep at the first infeasible grid point that follows an
        interior local maximum. The remaining grid points are not evaluated.

    Returns
    -------
    ProfileFit

    Throws
    ------
    NoFeasibleInterestError
        If the curve is non-finite at every evaluated grid point.
    """
    grid = interest_grid(bracket, n_grid)
    values = np.full(len(grid), np.nan)
    for i, psi in enumerate(grid):
        values[i] = _evaluate(curve_fn, psi)
        if stop_after_failure and not np.isfinite(values[i]) \
                and len(interior_maxima(values[:i])):
            logger.debug("Grid sweep stopped at infeasible point %g.", psi)
            break
    evaluated = ~np.isnan(values)
    failures = [float(psi) for psi, v in zip(grid, values) if v == -np.inf]
    if len(failures) == np.count_nonzero(evaluated):
        raise NoFeasibleInterestError(
            f"The curve is infinite everywhere in the bracket {tuple(bracket)}.")

    peaks = interior_maxima(values)
    if len(peaks):
        k = int(peaks[np.argmax(values[peaks])])
    else:
        k = int(np.argmax(np.where(np.isfinite(values), values, -np.inf)))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]

    def objective(psi):
        v = _evaluate(curve_fn, psi)
        return -v if np.isfinite(v) else _INFEASIBLE

    result = minimize_scalar(
        objective, bounds=(lo, hi), method="bounded",
        options={"xatol": xtol * max(1.0, abs(grid[k]))})

    psi_hat, value = float(grid[k]), float(values[k])
    if result.fun != _INFEASIBLE and -result.fun >= value:
        psi_hat, value = float(result.x), float(-result.fun)

    boundary = not len(peaks)
    if boundary:
        logger.warning("No interior maximum; the curve is highest at %g, on the edge "
                       "of its finite range.", psi_hat)

    curve = tuple((float(psi), float(v)) for psi, v, e in zip(grid, values, evaluated) if e)
    diagnostics = {
        "bracket": (float(grid[0]), float(grid[-1])),
        "grid_points": len(grid),
        "evaluated": int(np.count_nonzero(evaluated)),
        "refinements": int(result.nfev),
        "boundary": bool(boundary),
        "failures": failures,
    }
    logger.debug("Outer maximum %g (value %g) after %d refinements.",
                 psi_hat, value, result.nfev)
    return ProfileFit(psi_hat, value, curve, diagnostics=diagnostics)


def _evaluate(curve_fn, psi):
    v = curve_fn(float(psi))
    return float(v) if v is not None and np.isfinite(v) else -np.inf
