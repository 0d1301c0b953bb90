#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
""" Maximisation of the GEV-AFT log-likelihood over the nuisance
chi = (phi, sigma) at a fixed shape.

The search runs on theta = (phi, log sigma) with a BFGS quasi-Newton method
and a backtracking line search that rejects points outside the support. The
inverse Hessian is seeded from the analytic observed information. A simplex
search takes over when the quasi-Newton iterations stall.
"""
from __future__ import annotations

import logging
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import minimize

from mplkit.errors import InfeasibleError
from mplkit.inference.gevaft import (
    CensoredDataset, GevAftParams, nuisance_block, profile_loglik,
)
from mplkit.optimize.settings import OptimizerSettings

logger = logging.getLogger(__name__)

_ARMIJO = 1e-4
_MIN_STEP = 1e-16
_MAX_STEP = 10.0


class InnerFit(NamedTuple):
    """ The constrained nuisance estimate chi_hat at one shape.

    Attributes
    ----------
    chi_hat: numpy.ndarray
        (phi_hat, sigma_hat).
    loglik: float
        The log-likelihood at chi_hat.
    converged: bool
    iterations: int
    grad_norm: float
        Largest absolute score component in (phi, sigma).
    method: str
        "bfgs" or "simplex+bfgs".
    """
    chi_hat: np.ndarray
    loglik: float
    converged: bool
    iterations: int
    grad_norm: float
    method: str = "bfgs"


class QuasiNewtonResult(NamedTuple):
    x: np.ndarray
    fx: float
    grad_norm: float
    converged: bool
    iterations: int


# -----------------------------------------------------------------------------
# Generic quasi-Newton maximiser
# -----------------------------------------------------------------------------

def maximize_quasi_newton(f: Callable, grad: Callable, x0, tol=1e-8,
                          max_iter=500, inv_hess0=None,
                          grad_norm: Callable = None) -> QuasiNewtonResult:
    """ Maximise f by BFGS with a backtracking (Armijo) line search.

    Parameters
    ----------
    f: Callable[[numpy.ndarray], float]
        The objective. Non-finite values mark infeasible points, which the
        line search steps back from.
    grad: Callable[[numpy.ndarray], numpy.ndarray]
        The gradient of f.
    x0: array_like
        A feasible starting point.
    tol: float
        Converged when grad_norm(x, g) <= tol * max(1, |f(x)|).
    max_iter: int
    inv_hess0: numpy.ndarray or None
        Initial approximation of the inverse of -Hessian. Identity if None.
    grad_norm: Callable[[numpy.ndarray, numpy.ndarray], float] or None
        The norm tested for convergence. max |g| if None.

    Returns
    -------
    QuasiNewtonResult
    """
    norm = grad_norm or (lambda x, g: float(np.max(np.abs(g))))
    x = np.array(x0, dtype=float)
    fx = float(f(x))
    if not np.isfinite(fx):
        raise InfeasibleError("The quasi-Newton starting point is infeasible.")
    g = np.asarray(grad(x), dtype=float)
    k = len(x)
    H = np.eye(k) if inv_hess0 is None else np.array(inv_hess0, dtype=float)

    for iteration in range(max_iter):
        gnorm = norm(x, g)
        if gnorm <= tol * max(1.0, abs(fx)):
            return QuasiNewtonResult(x, fx, gnorm, True, iteration)

        # Ascent direction.
        direction = H @ g
        slope = g @ direction
        if not slope > 0:
            H = np.eye(k)
            direction, slope = g.copy(), g @ g
        length = np.linalg.norm(direction)
        if length > _MAX_STEP:
            direction *= _MAX_STEP / length
            slope *= _MAX_STEP / length

        # Backtracking. Values within rounding noise of fx count as no loss.
        noise = 10 * np.finfo(float).eps * max(1.0, abs(fx))
        step = 1.0
        while step > _MIN_STEP:
            x_new = x + step * direction
            f_new = float(f(x_new))
            if np.isfinite(f_new) and f_new >= fx + _ARMIJO * step * slope - noise:
                break
            step *= 0.5
        else:
            logger.debug("Line search failed at iteration %d.", iteration)
            return QuasiNewtonResult(x, fx, gnorm, False, iteration)

        g_new = np.asarray(grad(x_new), dtype=float)
        s = x_new - x
        # y is the change of the gradient of -f.
        y = g - g_new
        sy = s @ y
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            rho = 1.0 / sy
            V = np.eye(k) - rho * np.outer(s, y)
            H = V @ H @ V.T + rho * np.outer(s, s)
        x, fx, g = x_new, f_new, g_new
        logger.debug("Iteration %d: f=%.12g |g|=%.3g step=%g",
                     iteration, fx, norm(x, g), step)

    gnorm = norm(x, g)
    return QuasiNewtonResult(x, fx, gnorm, gnorm <= tol * max(1.0, abs(fx)), max_iter)


# -----------------------------------------------------------------------------
# Starting values
# -----------------------------------------------------------------------------

def repair_start(params: GevAftParams, d: CensoredDataset) -> GevAftParams:
    """ Inflate sigma until every observation lies inside the support.

    m_j = 1 + xi e_j / sigma > 0 needs sigma > -xi e_j for every residual e_j.
    """
    e = d.y - d.X @ params.phi
    need = float(np.max(-params.xi * e))
    if need < params.sigma:
        return params
    return GevAftParams(params.phi, 2.0 * need, params.xi)


def least_squares_start(d: CensoredDataset, xi: float) -> GevAftParams:
    """ phi by least squares on the events, sigma from the residual scale. """
    rows = d.events if d.r >= d.p else np.ones(d.n, dtype=bool)
    phi, *_ = np.linalg.lstsq(d.X[rows], d.y[rows], rcond=None)
    residual = d.y[rows] - d.X[rows] @ phi
    sigma = 1.4826 * float(np.median(np.abs(residual - np.median(residual))))
    if not sigma > 0:
        sigma = float(np.std(residual)) or 1.0
    return repair_start(GevAftParams(phi, sigma, xi), d)


# -----------------------------------------------------------------------------
# Inner fit
# -----------------------------------------------------------------------------

def _to_theta(params: GevAftParams) -> np.ndarray:
    return np.append(params.phi, np.log(params.sigma))


def _to_params(theta, xi) -> GevAftParams:
    return GevAftParams(theta[:-1], np.exp(theta[-1]), xi)


def _theta_information(block, sigma):
    """ -Hessian in (phi, log sigma) from the one in (phi, sigma). """
    J = block.info.copy()
    J[:-1, -1] *= sigma
    J[-1, :-1] *= sigma
    J[-1, -1] = sigma ** 2 * block.info[-1, -1] - sigma * block.score[-1]
    return J


def maximize_inner(xi: float, d: CensoredDataset, start: GevAftParams = None,
                   settings: OptimizerSettings = OptimizerSettings()) -> InnerFit:
    """ The constrained nuisance estimate chi_hat at shape xi.

    Parameters
    ----------
    xi: float
        The fixed shape.
    d: CensoredDataset
    start: GevAftParams or None
        The starting point; only phi and sigma are used. It is repaired when
        infeasible at xi. Least squares on the events if None.
    settings: OptimizerSettings

    Returns
    -------
    InnerFit
        Non-convergence is flagged, not raised.
    """
    if start is None:
        start = least_squares_start(d, xi)
    else:
        start = repair_start(GevAftParams(start.phi, start.sigma, xi), d)

    def f(theta):
        if not np.all(np.isfinite(theta)) or theta[-1] > 700:
            return -np.inf
        return profile_loglik(_to_params(theta, xi), d)

    def grad(theta):
        params = _to_params(theta, xi)
        score = nuisance_block(params, d).score
        score[-1] *= params.sigma
        return score

    def negative(theta):
        v = f(theta)
        return -v if np.isfinite(v) else np.inf

    def chi_norm(theta, g):
        # Back to the (phi, sigma) score.
        return float(max(np.max(np.abs(g[:-1]), initial=0.0),
                         abs(g[-1]) / np.exp(theta[-1])))

    result = _quasi_newton_from(start, f, grad, chi_norm, d, settings)
    method = "bfgs"
    if not result.converged:
        logger.debug("Quasi-Newton stalled at xi=%g; trying the simplex.", xi)
        simplex = minimize(negative, result.x, method="Nelder-Mead",
                           options={"xatol": 1e-8, "fatol": 1e-10,
                                    "maxiter": settings.fallback_max_iter})
        if -simplex.fun >= result.fx:
            retry = _quasi_newton_from(_to_params(simplex.x, xi), f, grad,
                                       chi_norm, d, settings, settings.fallback_max_iter)
            result = retry if retry.fx >= result.fx else result
        method = "simplex+bfgs"

    params = _to_params(result.x, xi)
    if not result.converged:
        logger.warning("Inner fit at xi=%g did not converge (|score|=%.3g).",
                       xi, result.grad_norm)
    return InnerFit(params.chi, result.fx, bool(result.converged),
                    result.iterations, result.grad_norm, method)


def _quasi_newton_from(start, f, grad, norm, d, settings, max_iter=None):
    theta0 = _to_theta(start)
    inv_hess0 = None
    try:
        block = nuisance_block(start, d)
        J = _theta_information(block, start.sigma)
        if np.all(np.linalg.eigvalsh(J) > 0):
            inv_hess0 = np.linalg.inv(J)
    except (InfeasibleError, np.linalg.LinAlgError):
        pass
    return maximize_quasi_newton(f, grad, theta0, tol=settings.inner_tol,
                                 max_iter=max_iter or settings.inner_max_iter,
                                 inv_hess0=inv_hess0, grad_norm=norm)

