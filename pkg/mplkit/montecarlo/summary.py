#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
""" Summary statistics of Monte Carlo estimates. """
from __future__ import annotations

from typing import NamedTuple

import numpy as np


class McSummary(NamedTuple):
    """ Mean, variance, bias, MSE and relative bias of one estimator in one
    Monte Carlo cell.

    Attributes
    ----------
    mean: float
    variance: float
        Sample variance (denominator R - 1); nan when R = 1.
    bias: float
        mean - true.
    mse: float
        (1/R) sum (estimate - true)^2.
    rb_percent: float
        100 bias / true.
    n_converged: int
        R, the number of estimates summarised.
    n_failed: int
        Replicates excluded as failed.
    mean_se: float
        sqrt(variance / R); nan when R = 1.
    """
    mean: float
    variance: float
    bias: float
    mse: float
    rb_percent: float
    n_converged: int
    n_failed: int = 0
    mean_se: float = np.nan

    @property
    def variance_defined(self) -> bool:
        return self.n_converged > 1

    def decomposition_residual(self) -> float:
        """ |mse - (variance (R-1)/R + bias^2)| / max(1, mse). """
        R = self.n_converged
        spread = self.variance * (R - 1) / R if self.variance_defined else 0.0
        return abs(self.mse - (spread + self.bias ** 2)) / max(1.0, self.mse)


def summarize(estimates, true_value: float, n_failed: int = 0) -> McSummary:
    """ Summarise converged estimates against the true parameter.

    Parameters
    ----------
    estimates: array_like
        The converged estimates, in replicate order.
    true_value: float
        The true parameter, non-zero.
    n_failed: int
        Replicates excluded from estimates.

    Returns
    -------
    McSummary

    Throws
    ------
    ValueError
        If there are no estimates.
    """
    estimates = np.asarray(estimates, dtype=float).ravel()
    R = len(estimates)
    if R == 0:
        raise ValueError("Cannot summarise an empty set of estimates.")
    if true_value == 0:
        raise ValueError("Relative bias needs a non-zero true value.")

    mean = float(np.mean(estimates))
    variance = float(np.var(estimates, ddof=1)) if R > 1 else np.nan
    bias = mean - true_value
    return McSummary(
        mean=mean,
        variance=variance,
        bias=bias,
        mse=float(np.mean((estimates - true_value) ** 2)),
        rb_percent=100.0 * bias / true_value,
        n_converged=R,
        n_failed=int(n_failed),
        mean_se=float(np.sqrt(variance / R)) if R > 1 else np.nan,
    )
