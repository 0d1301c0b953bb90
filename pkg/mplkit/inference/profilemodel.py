#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
from abc import ABCMeta, abstractmethod

from mplkit.optimize.outer import ProfileFit, maximize_outer

PROFILE = "p"
MODIFIED_PROFILE = "mp"
KINDS = (PROFILE, MODIFIED_PROFILE)


def check_kind(kind):
    if kind not in KINDS:
        raise ValueError(f"Likelihood kind {kind} is not one of {KINDS}.")
    return kind


class ProfileLikelihoodModel(metaclass=ABCMeta):
    """ An interface for estimating an interest parameter psi by maximising
    its profile or modified profile log-likelihood.

    The nuisance parameters chi are replaced by their constrained estimates
    chi_hat(psi). A concrete subclass for a particular model must override the
    two curve methods and (possibly) self.fit().

    Attributes
    ----------
    default_bracket: (float, float)
        The interval searched for psi when none is given.
    """
    default_bracket = (0.05, 10.0)

    def curve(self, kind):
        """ The log-likelihood curve of the given kind.

        Parameters
        ----------
        kind: str
            PROFILE ("p") or MODIFIED_PROFILE ("mp").

        Returns
        -------
        Callable[[float], float]
        """
        if check_kind(kind) == PROFILE:
            return self.profile_loglik
        return self.modified_profile_loglik

    def fit(self, kind, bracket=None, **options) -> ProfileFit:
        """ Maximise the curve of the given kind over a bracket.

        Parameters
        ----------
        kind: str
            PROFILE or MODIFIED_PROFILE.
        bracket: (float, float) or None
            The searched interval. self.default_bracket when None.
        **options:
            Passed to mplkit.optimize.outer.maximize_outer.

        Returns
        -------
        ProfileFit
        """
        bracket = self.default_bracket if bracket is None else bracket
        fit = maximize_outer(self.curve(kind), bracket, **options)
        return fit._replace(kind=kind)

    # -------------------------------------------------------------------------
    # Curves
    # -------------------------------------------------------------------------

    @abstractmethod
    def profile_loglik(self, psi):
        """ Profile log-likelihood l_p(psi) = l(psi, chi_hat(psi)).

        Parameters
        ----------
        psi: float
            The interest parameter.
        """
        pass

    @abstractmethod
    def modified_profile_loglik(self, psi):
        """ Modified profile log-likelihood l_p(psi) + log M(psi).

        Parameters
        ----------
        psi: float
            The interest parameter.
        """
        pass
