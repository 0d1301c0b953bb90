#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
""" Exceptions raised by mplkit.

Domain errors derive from ValueError and numerical breakdowns from
ArithmeticError, so code catching the built-in types keeps working.
"""


class DomainError(ValueError):
    """ A parameter or argument lies outside its domain. """


class ShapeTooSmallError(DomainError):
    """ The GEV shape is too close to zero (the Gumbel limit is not supported). """


class DegenerateSampleError(ValueError):
    """ A sample carries no information about the dispersion. """


class DatasetError(ValueError):
    """ A censored dataset is malformed. """


class InfeasibleError(ValueError):
    """ A point lies outside the support where a finite value is required. """


class ModificationUndefinedError(ArithmeticError):
    """ The modifying factor of the profile likelihood cannot be evaluated.

    Attributes
    ----------
    condition: float
        Condition number of the offending matrix (inf if singular).
    """
    def __init__(self, message, condition=float("inf")):
        super().__init__(message)
        self.condition = condition


class NoFeasibleInterestError(ValueError):
    """ A likelihood curve is infinite everywhere in the searched bracket. """


class CalibrationError(ValueError):
    """ The censoring shift cannot be bracketed. """


class FiniteDifferenceError(ArithmeticError):
    """ A finite-difference stencil stays non-finite after shrinking. """


class InputError(ValueError):
    """ An input file cannot be read as data. """
