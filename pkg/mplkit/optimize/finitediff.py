#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
""" Central finite differences for checking analytic derivatives.

A check sweeps the step over several decades and extrapolates each pair of
steps (Richardson), so a single badly scaled coordinate cannot dominate the
reported error.
"""
from __future__ import annotations

import logging

import numpy as np

from mplkit.errors import FiniteDifferenceError

logger = logging.getLogger(__name__)

# eps^(1/3) balances truncation against rounding for central differences.
DEFAULT_RELATIVE_STEP = np.finfo(float).eps ** (1.0 / 3.0)
MAX_SHRINKS = 5
# Relative steps from 1e-2 down to 1e-7 in half decades.
SWEEP_STEPS = tuple(np.logspace(-2, -7, 11))


def fd_derivative(f, x, relative_step=DEFAULT_RELATIVE_STEP) -> np.ndarray:
    """ Central-difference derivative of f at x.

    Parameters
    ----------
    f: Callable[[numpy.ndarray], float | numpy.ndarray]
        Scalar or vector valued.
    x: array_like
        The point.
    relative_step: float
        Step per coordinate relative to max(1, |x_i|).

    Returns
    -------
    numpy.ndarray
        The gradient (k,) of a scalar f, or the Jacobian (m, k) of a vector f
        with column i the derivative in x_i.

    Throws
    ------
    FiniteDifferenceError
        If a stencil point stays non-finite after MAX_SHRINKS step shrinks.
    """
    x = np.array(x, dtype=float).ravel()
    columns = []
    for i in range(len(x)):
        h = relative_step * max(1.0, abs(x[i]))
        for shrink in range(MAX_SHRINKS + 1):
            up, down = x.copy(), x.copy()
            up[i] += h
            down[i] -= h
            f_up, f_down = np.asarray(f(up), float), np.asarray(f(down), float)
            if np.all(np.isfinite(f_up)) and np.all(np.isfinite(f_down)):
                # The representable step, not the nominal one.
                columns.append((f_up - f_down) / (up[i] - down[i]))
                break
            logger.debug("Non-finite stencil in coordinate %d; shrinking step %g.", i, h)
            h /= 10.0
        else:
            raise FiniteDifferenceError(
                f"Stencil for coordinate {i} is non-finite after {MAX_SHRINKS} shrinks.")
    return np.stack(columns, axis=-1)


def fd_richardson(f, x, relative_step=DEFAULT_RELATIVE_STEP) -> np.ndarray:
    """ Central differences at steps h and h/2 combined to cancel the h^2
    error term: (4 D(h/2) - D(h)) / 3.

    Throws
    ------
    FiniteDifferenceError
        As fd_derivative.
    """
    coarse = fd_derivative(f, x, relative_step)
    fine = fd_derivative(f, x, relative_step / 2.0)
    return (4.0 * fine - coarse) / 3.0


def relative_error(numeric, analytic, floor=1e-6) -> np.ndarray:
    """ |numeric - analytic| / max(|numeric|, floor), elementwise. """
    numeric, analytic = np.asarray(numeric, float), np.asarray(analytic, float)
    return np.abs(numeric - analytic) / np.maximum(np.abs(numeric), floor)


def fd_check(f, x, analytic, relative_step=None, floor=1e-6, steps=SWEEP_STEPS) -> float:
    """ Worst relative discrepancy between an analytic derivative and finite
    differences.

    Parameters
    ----------
    f: Callable
        Scalar f for a gradient check, vector f for a Jacobian check (e.g. a
        score function checked against an information matrix).
    x: array_like
        The point.
    analytic: array_like
        The analytic gradient (k,) or Jacobian (m, k).
    relative_step: float or None
        A single central-difference step. If None, Richardson estimates at
        every one of steps are compared and each entry keeps its smallest
        error.
    floor: float
        Lower bound of the denominator, so entries near zero are compared
        absolutely.
    steps: (float, ...)
        The swept relative steps.

    Returns
    -------
    float
        max relative error over the entries.

    Throws
    ------
    FiniteDifferenceError
        If no step gives a finite stencil.
    """
    analytic = np.asarray(analytic, dtype=float)
    if relative_step is not None:
        steps, estimate = (relative_step,), fd_derivative
    else:
        estimate = fd_richardson

    best = None
    for step in steps:
        try:
            numeric = estimate(f, x, step)
        except FiniteDifferenceError:
            logger.debug("Step %g skipped: non-finite stencil.", step)
            continue
        error = relative_error(numeric.reshape(analytic.shape), analytic, floor)
        best = error if best is None else np.minimum(best, error)
    if best is None:
        raise FiniteDifferenceError(f"No step in {steps} gives a finite stencil.")
    return float(np.max(best))
