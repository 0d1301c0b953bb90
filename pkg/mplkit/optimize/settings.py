#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class OptimizerSettings:
    """ Tolerances and search ranges of the nested maximisation.

    Attributes
    ----------
    inner_tol: float
        The inner fit has converged when the largest score component is at
        most inner_tol * max(1, |loglik|).
    inner_max_iter: int
        Quasi-Newton iterations before the simplex fallback.
    fallback_max_iter: int
        Iteration limit of the simplex fallback and of the quasi-Newton
        restart from its result.
    bracket: (float, float)
        The searched shape interval.
    grid_points: int
        Log-spaced grid points over the bracket.
    outer_xtol: float
        Refinement tolerance of the interest parameter, relative to
        max(1, |psi|).
    warm_start: bool
        Start each inner fit from the nearest shape already fitted.
    """
    inner_tol: float = 1e-8
    inner_max_iter: int = 500
    fallback_max_iter: int = 100
    bracket: tuple = (0.05, 10.0)
    grid_points: int = 41
    outer_xtol: float = 1e-8
    warm_start: bool = True

    def __post_init__(self):
        if not self.inner_tol > 0:
            raise ValueError(f"Inner tolerance {self.inner_tol} is not positive.")
        if self.inner_max_iter < 1:
            raise ValueError(
                f"Inner iteration limit {self.inner_max_iter} is less than 1.")
        if self.fallback_max_iter < 1:
            raise ValueError(
                f"Fallback iteration limit {self.fallback_max_iter} is less than 1.")
        lo, hi = self.bracket
        if not lo < hi:
            raise ValueError(f"Bracket {self.bracket} is empty.")
        object.__setattr__(self, "bracket", (float(lo), float(hi)))
