#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
""" Censored GEV accelerated-failure-time likelihood.

Lifetimes y_j ~ GEV(x_j phi, sigma, xi) are right censored with indicators
delta_j (1 = event). The shape xi is the interest parameter and
chi = (phi_1, ..., phi_p, sigma) the nuisance. With

    z_j = (y_j - x_j phi) / sigma,    m_j = 1 + xi z_j,    t_j = m_j^(-1/xi)

the log-likelihood is

    sum_C log(1 - exp(-t_j)) - r log sigma
        - (1/xi + 1) sum_Cbar log m_j - sum_Cbar t_j

Every derivative below is routed through the per-observation kernels
g_j = dl_j/dm_j and h_j = d2l_j/dm_j2 (the -r log sigma term handled
separately) and the chain rule dm_j/dphi_s = -xi x_js / sigma,
dm_j/dsigma = -xi z_j / sigma, dm_j/dy_j = xi / sigma.
"""
from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from mplkit.distributions.gev import check_scale, check_shape
from mplkit.errors import DatasetError, InfeasibleError, ModificationUndefinedError

logger = logging.getLogger(__name__)

# l_chi;chi_hat with a larger condition number is treated as singular.
MAX_CONDITION = 1e12


# -----------------------------------------------------------------------------
# Data and parameters
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class CensoredDataset:
    """ Right-censored regression data.

    Parameters
    ----------
    y: array_like
        n observed times or censoring values.
    delta: array_like
        n indicators, 1 for an event and 0 for a right-censored value.
    X: array_like
        n x p design whose first column is all ones.

    Attributes
    ----------
    n, p: int
    r: int
        The number of events.
    """
    y: np.ndarray
    delta: np.ndarray
    X: np.ndarray

    def __post_init__(self):
        y = np.array(self.y, dtype=float).ravel()
        raw_delta = np.asarray(self.delta).ravel()
        X = np.array(self.X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]

        n = len(y)
        if len(raw_delta) != n or X.shape[0] != n:
            raise DatasetError(
                f"y, delta and X disagree in length ({n}, {len(raw_delta)}, {X.shape[0]}).")
        if not np.all(np.isfinite(y)) or not np.all(np.isfinite(X)):
            raise DatasetError("y and X must be finite.")
        if not np.all(np.isin(raw_delta, (0, 1))):
            bad = raw_delta[~np.isin(raw_delta, (0, 1))][0]
            raise DatasetError(f"Censoring indicator {bad} is not 0 or 1.")
        p = X.shape[1]
        if n < p + 2:
            raise DatasetError(f"{n} observations are too few for {p} covariates.")
        if not np.all(X[:, 0] == 1.0):
            raise DatasetError("The first column of X must be all ones.")
        if np.linalg.matrix_rank(X) < p:
            raise DatasetError("The design matrix X is rank deficient.")

        delta = raw_delta.astype(int)
        for a in (y, delta, X):
            a.setflags(write=False)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "X", X)

    @property
    def n(self) -> int:
        return len(self.y)

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @property
    def r(self) -> int:
        return int(np.sum(self.delta))

    @property
    def events(self) -> np.ndarray:
        return self.delta == 1

    def digest(self) -> str:
        """ A content hash, identical for identical datasets. """
        h = hashlib.blake2b(digest_size=16)
        for a in (self.y, self.delta.astype(np.int64), self.X):
            h.update(np.ascontiguousarray(a).tobytes())
        return h.hexdigest()

    def permuted(self, order) -> CensoredDataset:
        """ The same observations in another order. """
        return CensoredDataset(self.y[order], self.delta[order], self.X[order])


@dataclass(frozen=True)
class GevAftParams:
    """ Regression coefficients phi, scale sigma and shape xi.

    Attributes
    ----------
    phi: numpy.ndarray
        p coefficients.
    sigma: float
        > 0.
    xi: float
        |xi| >= 1e-8.
    """
    phi: np.ndarray
    sigma: float
    xi: float

    def __post_init__(self):
        phi = np.array(self.phi, dtype=float).ravel()
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "xi", float(self.xi))
        check_scale(self.sigma)
        check_shape(self.xi)

    @property
    def chi(self) -> np.ndarray:
        """ The nuisance vector (phi_1, ..., phi_p, sigma). """
        return np.append(self.phi, self.sigma)

    @classmethod
    def from_chi(cls, chi, xi) -> GevAftParams:
        chi = np.asarray(chi, dtype=float)
        return cls(chi[:-1], chi[-1], xi)

    def feasible(self, d: CensoredDataset) -> bool:
        _, m = zm(self, d)
        return bool(np.all(m > 0))


def zm(params: GevAftParams, d: CensoredDataset):
    """ z_j = (y_j - x_j phi) / sigma and m_j = 1 + xi z_j. """
    z = (d.y - d.X @ params.phi) / params.sigma
    return z, 1.0 + params.xi * z


def _require_feasible(m):
    if not np.all(m > 0):
        raise InfeasibleError(
            f"{int(np.sum(~(m > 0)))} observations lie outside the GEV support.")


# -----------------------------------------------------------------------------
# Log-likelihood
# -----------------------------------------------------------------------------

def censored_loglik_terms(params: GevAftParams, d: CensoredDataset) -> np.ndarray:
    """ Per-observation log-likelihood terms.

    log f(y_j) for events and log S(y_j) for censored values, so that the sum
    is profile_loglik. Terms of observations outside the support are -inf.
    """
    _, m = zm(params, d)
    inside = m > 0
    safe_m = np.where(inside, m, 1.0)
    log_m = np.log(safe_m)
    t = np.exp(-log_m / params.xi)
    with np.errstate(divide="ignore"):
        event = -np.log(params.sigma) - (1.0 / params.xi + 1.0) * log_m - t
        censored = np.log(-np.expm1(-t))
    terms = np.where(d.events, event, censored)
    return np.where(inside, terms, -np.inf)


def profile_loglik(params: GevAftParams, d: CensoredDataset) -> float:
    """ The censored log-likelihood at (phi, sigma, xi); -inf when infeasible. """
    _, m = zm(params, d)
    if not np.all(m > 0):
        return -np.inf
    return float(np.sum(censored_loglik_terms(params, d)))


# -----------------------------------------------------------------------------
# Kernels in m
# -----------------------------------------------------------------------------

def score_kernel(m, delta, xi):
    """ g_j = dl_j/dm_j, excluding the -r log sigma term.

    events:   -(1/xi + 1) / m + (1/xi) m^(-1/xi - 1)
    censored: -(1/xi) m^(-1/xi - 1) / (exp(m^(-1/xi)) - 1)
    """
    m = np.asarray(m, dtype=float)
    if np.any(~(m > 0)):
        raise InfeasibleError("The score kernel needs m > 0.")
    t = np.exp(-np.log(m) / xi)
    a = t / (xi * m)
    with np.errstate(over="ignore"):
        b = 1.0 / np.expm1(t)
    event = a - (1.0 / xi + 1.0) / m
    censored = -a * b
    return np.where(np.asarray(delta) == 1, event, censored)[()]


def curvature_kernel(m, delta, xi):
    """ h_j = dg_j/dm_j. """
    m = np.asarray(m, dtype=float)
    if np.any(~(m > 0)):
        raise InfeasibleError("The curvature kernel needs m > 0.")
    t = np.exp(-np.log(m) / xi)
    a = t / (xi * m)
    with np.errstate(over="ignore"):
        b = 1.0 / np.expm1(t)
    c = 1.0 / xi + 1.0
    event = c * (1.0 - t / xi) / m ** 2
    censored = c * a * b / m - a ** 2 * (b + b ** 2)
    return np.where(np.asarray(delta) == 1, event, censored)[()]


# -----------------------------------------------------------------------------
# Nuisance score and observed information
# -----------------------------------------------------------------------------

class NuisanceBlock(NamedTuple):
    """ Score and observed information in chi = (phi, sigma) at fixed xi.

    Attributes
    ----------
    score: numpy.ndarray
        (p + 1) gradient of the log-likelihood.
    info: numpy.ndarray
        (p + 1) x (p + 1) negative Hessian, exactly symmetric.
    """
    score: np.ndarray
    info: np.ndarray


def _kernels(params, d):
    z, m = zm(params, d)
    _require_feasible(m)
    A = np.column_stack([d.X, z])
    return A, score_kernel(m, d.delta, params.xi), \
        curvature_kernel(m, d.delta, params.xi)


def nuisance_score(params: GevAftParams, d: CensoredDataset) -> np.ndarray:
    """ dl/dphi_s = sum g_j (-xi x_js / sigma);
    dl/dsigma = -r / sigma + sum g_j (-xi z_j / sigma). """
    z, m = zm(params, d)
    _require_feasible(m)
    A = np.column_stack([d.X, z])
    g = score_kernel(m, d.delta, params.xi)
    score = -(params.xi / params.sigma) * (A.T @ g)
    score[-1] -= d.r / params.sigma
    return score


def nuisance_information(params: GevAftParams, d: CensoredDataset) -> np.ndarray:
    """ j_chichi = -d2l/dchi2.

    The Hessian is xi^2/sigma^2 A' diag(h) A, plus the terms from the second
    derivatives of m (d2m/dphi_s dsigma = xi x_js / sigma^2,
    d2m/dsigma2 = 2 xi z_j / sigma^2) and r / sigma^2 from -r log sigma.
    A holds the rows (x_j, z_j).
    """
    return nuisance_block(params, d).info


def nuisance_block(params: GevAftParams, d: CensoredDataset) -> NuisanceBlock:
    A, g, h = _kernels(params, d)
    xi, sigma = params.xi, params.sigma
    k = A.shape[1] - 1

    Ag = A.T @ g
    score = -(xi / sigma) * Ag
    score[-1] -= d.r / sigma

    hessian = (xi / sigma) ** 2 * (A.T @ (h[:, None] * A))
    hessian[:, k] += xi / sigma ** 2 * Ag
    hessian[k, :] += xi / sigma ** 2 * Ag
    hessian[k, k] += d.r / sigma ** 2
    info = -hessian
    return NuisanceBlock(score, 0.5 * (info + info.T))


# -----------------------------------------------------------------------------
# Sample-space derivative
# -----------------------------------------------------------------------------

class SampleSpaceParts(NamedTuple):
    """ The pieces of the sample-space derivative l_chi;chi_hat = D V.

    Attributes
    ----------
    vhat: numpy.ndarray
        n x (p + 1); zero rows for censored observations.
    data_deriv: numpy.ndarray
        (p + 1) x n; D_aj = d(score_a)/dy_j.
    ell_chi_chihat: numpy.ndarray
        (p + 1) x (p + 1).
    """
    vhat: np.ndarray
    data_deriv: np.ndarray
    ell_chi_chihat: np.ndarray


def vhat(d: CensoredDataset, full_mle: GevAftParams) -> np.ndarray:
    """ Rows (-x_j, -z_j) at the full MLE for events, zero rows when censored.

    For an event the row is the ratio (dF/dchi) / f of the distribution
    function and density; the censored rows are zero.
    """
    z, m = zm(full_mle, d)
    _require_feasible(m)
    rows = -np.column_stack([d.X, z])
    rows[~d.events] = 0.0
    return rows


def data_derivative(params: GevAftParams, d: CensoredDataset) -> np.ndarray:
    """ D_aj = d(score_a)/dy_j at params.

    D_phi_s,j = -xi^2 h_j x_js / sigma^2
    D_sigma,j = -xi^2 h_j z_j / sigma^2 - xi g_j / sigma^2
    """
    A, g, h = _kernels(params, d)
    xi, sigma = params.xi, params.sigma
    D = -(xi / sigma) ** 2 * (h[:, None] * A).T
    D[-1] -= xi / sigma ** 2 * g
    return D


def ell_chi_chihat(xi: float, chi_hat_xi, vhat_matrix: np.ndarray,
                   d: CensoredDataset) -> SampleSpaceParts:
    """ l_chi;chi_hat at (chi_hat_xi, xi) with vhat fixed at the full MLE.

    Parameters
    ----------
    xi: float
        The shape.
    chi_hat_xi: array_like
        The constrained nuisance estimate (phi, sigma) at xi.
    vhat_matrix: numpy.ndarray
        From vhat(d, full_mle).
    d: CensoredDataset

    Returns
    -------
    SampleSpaceParts
    """
    params = GevAftParams.from_chi(chi_hat_xi, xi)
    D = data_derivative(params, d)
    return SampleSpaceParts(vhat_matrix, D, D @ vhat_matrix)


class Modification(NamedTuple):
    """ The modified profile log-likelihood at one xi and its parts.

    Attributes
    ----------
    value: float
        profile + 0.5 log|det j| - log|det l_chi;chi_hat|.
    profile: float
    log_det_info: float
    log_det_ell: float
    condition: float
        Condition number of l_chi;chi_hat.
    """
    value: float
    profile: float
    log_det_info: float
    log_det_ell: float
    condition: float


def modification(xi: float, d: CensoredDataset, inner_fit, vhat_matrix) -> Modification:
    """ Evaluate the modified profile log-likelihood from its parts.

    Parameters
    ----------
    xi: float
    d: CensoredDataset
    inner_fit: InnerFit
        The nuisance maximiser at xi.
    vhat_matrix: numpy.ndarray
        From vhat(d, full_mle).

    Throws
    ------
    ModificationUndefinedError
        If l_chi;chi_hat is singular (condition number above MAX_CONDITION).
    """
    params = GevAftParams.from_chi(inner_fit.chi_hat, xi)
    ell = profile_loglik(params, d)
    info = nuisance_information(params, d)
    parts = ell_chi_chihat(xi, inner_fit.chi_hat, vhat_matrix, d)

    sign_ell, log_det_ell = np.linalg.slogdet(parts.ell_chi_chihat)
    with np.errstate(divide="ignore", invalid="ignore"):
        condition = float(np.linalg.cond(parts.ell_chi_chihat))
    if sign_ell == 0 or not np.isfinite(condition):
        condition = np.inf
    if not condition <= MAX_CONDITION:
        raise ModificationUndefinedError(
            f"Modification undefined at xi={xi:g}: the sample-space derivative "
            f"is singular (condition number {condition:.3g}).", condition)

    sign_info, log_det_info = np.linalg.slogdet(info)
    if sign_info <= 0:
        logger.warning("Observed information at xi=%g has a non-positive "
                       "determinant; the inner fit is not a maximum.", xi)
        return Modification(-np.inf, ell, log_det_info, log_det_ell, condition)

    value = ell + 0.5 * log_det_info - log_det_ell
    return Modification(float(value), ell, float(log_det_info),
                        float(log_det_ell), condition)


def mp_loglik(xi: float, d: CensoredDataset, inner_fit, full_mle: GevAftParams,
              vhat_matrix=None) -> float:
    """ The modified profile log-likelihood of xi.

    l_p(xi) + 0.5 log|det j_chichi(chi_hat_xi, xi)|
            - log|det l_chi;chi_hat(chi_hat_xi, xi)|

    Parameters
    ----------
    xi: float
    d: CensoredDataset
    inner_fit: InnerFit
        The nuisance maximiser at xi.
    full_mle: GevAftParams
        The overall maximum likelihood estimate, where vhat is evaluated.
    vhat_matrix: numpy.ndarray or None
        A precomputed vhat(d, full_mle).

    Returns
    -------
    float
        -inf if the observed information has a non-positive determinant.
    """
    if vhat_matrix is None:
        vhat_matrix = vhat(d, full_mle)
    return modification(xi, d, inner_fit, vhat_matrix).value
