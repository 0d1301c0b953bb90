#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
import unittest

import numpy as np
from numpy.testing import assert_allclose
from scipy import integrate, stats

from mplkit.distributions.gev import (
    GevParams3, gev_cdf, gev_logpdf, gev_quantile, gev_sample, gev_survivor,
)
from mplkit.errors import DomainError, ShapeTooSmallError


class TestGevLogpdf(unittest.TestCase):

    def test_known_values(self):
        # Given: Points, parameters and log densities by hand.
        cases = [
            (0.0, GevParams3(0.0, 1.0, 2.0), -1.0),
            (5.0, GevParams3(5.0, 1.0, -0.3), -1.0),
            (1.0, GevParams3(0.0, 1.0, 2.0), -1.5 * np.log(3.0) - 3.0 ** -0.5),
        ]
        for y, p, expected in cases:
            with self.subTest(y=y, p=p):
                # When/Then: The log density matches.
                self.assertAlmostEqual(gev_logpdf(y, p), expected, places=12)

    def test_outside_support_is_minus_infinity(self):
        # Given: The lower end point mu - sigma/xi of a positive shape and a
        # point below it.
        p = GevParams3(0.0, 1.0, 2.0)

        # When: The log density is evaluated there.
        values = gev_logpdf(np.array([-0.5, -3.0]), p)

        # Then: Both are -inf.
        self.assertTrue(np.all(values == -np.inf))

    def test_agrees_with_scipy(self):
        # Given: scipy's genextreme with c = -xi.
        for xi in (2.0, 0.5, -0.4):
            p = GevParams3(1.0, 2.0, xi)
            dist = stats.genextreme(-xi, loc=1.0, scale=2.0)
            y = dist.ppf(np.linspace(0.01, 0.99, 50))
            with self.subTest(xi=xi):
                # When/Then: Densities and distribution functions agree.
                assert_allclose(gev_logpdf(y, p), dist.logpdf(y), rtol=1e-9)
                assert_allclose(gev_cdf(y, p), dist.cdf(y), rtol=1e-9)

    def test_density_integrates_to_one(self):
        # Given: GEV(0, 1, 0.3) with lower end point -1/0.3.
        p = GevParams3(0.0, 1.0, 0.3)

        # When: The density is integrated over its support.
        mass, _ = integrate.quad(lambda y: np.exp(gev_logpdf(y, p)), -1 / 0.3, np.inf)

        # Then: The mass is 1.
        self.assertAlmostEqual(mass, 1.0, places=6)

    def test_shape_and_scale_errors(self):
        for loc, scale, shape, error in [(0, 1, 0.0, ShapeTooSmallError),
                                         (0, 1, 1e-9, ShapeTooSmallError),
                                         (0, 0, 1.0, DomainError),
                                         (0, 1, np.nan, DomainError)]:
            with self.subTest(scale=scale, shape=shape):
                with self.assertRaises(error):
                    GevParams3(loc, scale, shape)


class TestGevCdf(unittest.TestCase):

    def test_known_values(self):
        p = GevParams3(0.0, 1.0, 2.0)
        with self.subTest("y = mu"):
            self.assertAlmostEqual(gev_cdf(0.0, p), np.exp(-1.0), places=14)
        with self.subTest("y = mu + 1"):
            self.assertAlmostEqual(gev_cdf(1.0, p), np.exp(-3.0 ** -0.5), places=14)
        with self.subTest("far upper tail"):
            self.assertAlmostEqual(gev_cdf(1e12, p), 1.0, places=5)
        with self.subTest("below the lower end point"):
            self.assertEqual(gev_cdf(-1.0, p), 0.0)
        with self.subTest("above the upper end point of a negative shape"):
            self.assertEqual(gev_cdf(10.0, GevParams3(0.0, 1.0, -0.5)), 1.0)

    def test_derivative_is_density(self):
        # Given: GEV(0, 1, 2) and a point.
        p, y, h = GevParams3(0.0, 1.0, 2.0), 1.0, 1e-6

        # When: The distribution function is differentiated numerically.
        slope = (gev_cdf(y + h, p) - gev_cdf(y - h, p)) / (2 * h)

        # Then: The slope is the density.
        self.assertAlmostEqual(slope, np.exp(gev_logpdf(y, p)), places=8)

    def test_survivor_complements_cdf(self):
        p = GevParams3(1.0, 0.5, 2.0)
        y = np.linspace(0.8, 20.0, 40)
        assert_allclose(gev_cdf(y, p) + gev_survivor(y, p), 1.0, rtol=0, atol=1e-15)


class TestGevQuantile(unittest.TestCase):

    def test_known_values(self):
        with self.subTest("u = exp(-1)"):
            self.assertAlmostEqual(gev_quantile(np.exp(-1.0), GevParams3(3.0, 2.0, 0.7)), 3.0,
                                   places=12)
        with self.subTest("u = 0.5"):
            self.assertAlmostEqual(gev_quantile(0.5, GevParams3(0.0, 1.0, 2.0)),
                                   (np.log(2.0) ** -2 - 1.0) / 2.0, places=12)

    def test_inverts_cdf(self):
        # Given: 1000 random probabilities.
        u = np.random.default_rng(3).uniform(0.001, 0.999, 1000)
        for p in (GevParams3(0.0, 1.0, 2.0), GevParams3(-2.0, 3.0, -0.4)):
            with self.subTest(p=p):
                # When/Then: F(Q(u)) returns u.
                self.assertLessEqual(np.max(np.abs(gev_cdf(gev_quantile(u, p), p) - u)), 1e-12)

    def test_probability_outside_unit_interval(self):
        for u in (0.0, 1.0, -0.1, 1.5):
            with self.subTest(u=u):
                with self.assertRaises(DomainError):
                    gev_quantile(u, GevParams3(0.0, 1.0, 2.0))


class TestGevSample(unittest.TestCase):

    def test_sample_follows_law(self):
        # Given: A large sample from GEV(0, 1, 0.2).
        p = GevParams3(0.0, 1.0, 0.2)
        ys = gev_sample(50_000, p, np.random.default_rng(5))

        # When: It is tested against gev_cdf.
        result = stats.kstest(ys, lambda y: gev_cdf(y, p))

        # Then: The fit is not rejected and every draw is in the support.
        self.assertGreater(result.pvalue, 0.01)
        self.assertTrue(np.all(p.m(ys) > 0))


if __name__ == "__main__":
    unittest.main()
