#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
""" Profile and modified profile estimation of the GEV shape xi in the
censored accelerated-failure-time model.
"""
from __future__ import annotations

import logging

import numpy as np

from mplkit.errors import ModificationUndefinedError
from mplkit.inference.gevaft import (
    CensoredDataset, GevAftParams, modification, vhat,
)
from mplkit.inference.profilemodel import (
    MODIFIED_PROFILE, PROFILE, ProfileLikelihoodModel, check_kind,
)
from mplkit.optimize.inner import InnerFit, maximize_inner
from mplkit.optimize.outer import ProfileFit, maximize_outer
from mplkit.optimize.settings import OptimizerSettings

logger = logging.getLogger(__name__)


class GevAftShape(ProfileLikelihoodModel):
    """ Estimate the GEV-AFT shape with (phi, sigma) profiled out.

    Inner fits are cached per shape value and, with settings.warm_start, each
    new shape starts from the nearest shape already fitted to convergence.
    Shapes whose inner fit does not converge are infeasible on both curves.
    The profile and modified profile curves share the cache.

    Parameters
    ----------
    dataset: CensoredDataset
    settings: OptimizerSettings

    Attributes
    ----------
    inner_fits: {float: InnerFit}
        Every inner fit made so far.
    full_mle: GevAftParams or None
        The overall maximum likelihood estimate, once a converged profile fit
        has run.
    vhat: numpy.ndarray or None
        vhat evaluated at full_mle.
    profile_fit: ProfileFit or None
        The latest profile fit, reused by a modified profile fit over the same
        grid.
    """
    def __init__(self, dataset: CensoredDataset,
                 settings: OptimizerSettings = OptimizerSettings()):
        self.dataset = dataset
        self.settings = settings
        self.default_bracket = settings.bracket
        self.inner_fits = {}
        self.full_mle = None
        self.vhat = None
        self.profile_fit = None
        self._profile_key = None
        self.failures = []

    # -------------------------------------------------------------------------
    # Inner fits
    # -------------------------------------------------------------------------

    def inner_fit(self, xi) -> InnerFit:
        """ The (cached) nuisance maximiser at xi. """
        xi = float(xi)
        if xi in self.inner_fits:
            return self.inner_fits[xi]
        start = None
        converged = [s for s, fit in self.inner_fits.items() if fit.converged]
        if self.settings.warm_start and converged:
            nearest = min(converged, key=lambda s: (abs(s - xi), s))
            start = GevAftParams.from_chi(self.inner_fits[nearest].chi_hat, xi)
        fit = maximize_inner(xi, self.dataset, start, self.settings)
        self.inner_fits[xi] = fit
        return fit

    # -------------------------------------------------------------------------
    # Curves
    # -------------------------------------------------------------------------

    def profile_loglik(self, psi):
        fit = self._converged_fit(psi)
        return -np.inf if fit is None else fit.loglik

    def modified_profile_loglik(self, psi):
        return self.modification(psi).value

    def modification(self, psi):
        """ The modified profile value and its determinant parts at psi.

        Throws
        ------
        ModificationUndefinedError
            If l_chi;chi_hat is singular at psi.
        """
        if self.vhat is None:
            raise RuntimeError("The modified profile needs the full MLE; "
                               "run fit(PROFILE) first.")
        return modification(psi, self.dataset, self.inner_fit(psi), self.vhat)

    def _converged_fit(self, psi):
        fit = self.inner_fit(psi)
        if fit.converged:
            return fit
        self._record_failure(psi, f"inner fit not converged (gradient norm {fit.grad_norm:.3g} "
                                  f"after {fit.iterations} iterations)")
        return None

    def _guarded_modified_profile(self, psi):
        if self._converged_fit(psi) is None:
            return -np.inf
        try:
            return self.modified_profile_loglik(psi)
        except ModificationUndefinedError as err:
            logger.warning("%s", err)
            self._record_failure(psi, str(err))
            return -np.inf

    def _record_failure(self, psi, reason):
        failure = (float(psi), reason)
        if failure not in self.failures:
            logger.debug("Shape %g infeasible: %s.", psi, reason)
            self.failures.append(failure)

    # -------------------------------------------------------------------------
    # Fitting
    # -------------------------------------------------------------------------

    def set_full_mle(self, params: GevAftParams):
        """ Fix the point where vhat is evaluated. """
        self.full_mle = params
        self.vhat = vhat(self.dataset, params)

    def fit(self, kind, bracket=None, **options) -> ProfileFit:
        """ Estimate xi by the profile ("p") or modified profile ("mp") curve.

        A modified profile fit takes the full MLE from the profile fit over the
        same grid, running it when needed.

        Parameters
        ----------
        kind: str
            PROFILE or MODIFIED_PROFILE.
        bracket: (float, float) or None
            settings.bracket if None.

        Returns
        -------
        ProfileFit
            diagnostics additionally hold converged, chi_hat and, for mp,
            log_det_info, log_det_ell and condition at xi_hat. inner_fits holds
            the fits at the evaluated grid points.

        Throws
        ------
        ModificationUndefinedError
            For mp, if the profile curve has no interior maximum or the inner
            fit at its maximum did not converge.
        """
        check_kind(kind)
        bracket = tuple(self.default_bracket if bracket is None else bracket)
        options.setdefault("n_grid", self.settings.grid_points)
        options.setdefault("xtol", self.settings.outer_xtol)
        options.setdefault("stop_after_failure", True)

        if kind == MODIFIED_PROFILE and self.vhat is None:
            profile = self._profile_for(bracket, options)
            if not profile.diagnostics["converged"]:
                raise ModificationUndefinedError(
                    f"The full MLE is not a converged interior maximum (xi_hat "
                    f"{profile.psi_hat:g}, boundary {profile.diagnostics['boundary']}, "
                    f"inner fit converged {profile.diagnostics['inner_converged']}).")
            self.set_full_mle(GevAftParams.from_chi(
                profile.diagnostics["chi_hat"], profile.psi_hat))

        self.failures = []
        curve = self.profile_loglik if kind == PROFILE \
            else self._guarded_modified_profile
        fit = maximize_outer(curve, bracket, **options)

        at_max = self.inner_fit(fit.psi_hat)
        diagnostics = dict(fit.diagnostics)
        diagnostics["failures"] = diagnostics["failures"] + self.failures
        diagnostics["chi_hat"] = at_max.chi_hat
        diagnostics["inner_converged"] = at_max.converged
        diagnostics["converged"] = bool(at_max.converged and not fit.diagnostics["boundary"])
        if kind == MODIFIED_PROFILE:
            parts = self.modification(fit.psi_hat)
            diagnostics.update(log_det_info=parts.log_det_info,
                               log_det_ell=parts.log_det_ell,
                               condition=parts.condition)
        fit = fit._replace(
            kind=kind,
            inner_fits=tuple(self.inner_fits[psi] for psi, _ in fit.curve),
            diagnostics=diagnostics)
        if kind == PROFILE:
            self.profile_fit, self._profile_key = fit, (bracket, dict(options))
        return fit

    def _profile_for(self, bracket, options) -> ProfileFit:
        if self.profile_fit is not None and self._profile_key == (bracket, options):
            return self.profile_fit
        return self.fit(PROFILE, bracket, **options)
