#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
import unittest

import numpy as np

from mplkit.errors import DomainError
from mplkit.inference.gevaft import GevAftParams, zm
from mplkit.inference.iginference import fit_ig
from mplkit.simulation.generators import (
    SimConfigGEV, SimConfigIG, censoring_shift, gen_gev_aft, gen_ig,
)


class TestGenIg(unittest.TestCase):

    def test_deterministic(self):
        cfg = SimConfigIG(3, mu=2.0, lam=4.0, seed=99)
        np.testing.assert_array_equal(gen_ig(cfg).xs, gen_ig(cfg).xs)

    def test_seeds_differ(self):
        self.assertFalse(np.array_equal(gen_ig(SimConfigIG(5, seed=1)).xs,
                                        gen_ig(SimConfigIG(5, seed=2)).xs))

    def test_profile_estimate_expectation(self):
        # Given: 10^4 samples of n = 9 from IG(2, 4).
        estimates = np.array([fit_ig(gen_ig(SimConfigIG(9, seed=s))).lambda_hat_p
                              for s in range(10_000)])

        # When/Then: The mean estimate is within 3 standard errors of
        # 9 * 4 / 6 = 6.
        se = estimates.std(ddof=1) / np.sqrt(len(estimates))
        self.assertLess(abs(estimates.mean() - 6.0), 3 * se)

    def test_invalid_config(self):
        for kwargs in ({"n": 1}, {"n": 5, "mu": 0.0}, {"n": 5, "lam": -1.0}):
            with self.subTest(**kwargs):
                with self.assertRaises(DomainError):
                    SimConfigIG(**kwargs)


class TestGenGevAft(unittest.TestCase):

    def test_deterministic(self):
        cfg = SimConfigGEV(20, seed=5)
        self.assertEqual(gen_gev_aft(cfg).digest(), gen_gev_aft(cfg).digest())

    def test_layout(self):
        # When: A dataset is generated.
        d = gen_gev_aft(SimConfigGEV(40, seed=6))

        # Then: X is (1, x2) with x2 in (0, 1) and every value is in the support.
        self.assertEqual(d.X.shape, (40, 2))
        np.testing.assert_array_equal(d.X[:, 0], 1.0)
        self.assertTrue(np.all((d.X[:, 1] >= 0) & (d.X[:, 1] < 1)))
        _, m = zm(GevAftParams([1.0, 1.0], 1.0, 2.0), d)
        self.assertTrue(np.all(m > 0))

    def test_censoring_fraction(self):
        # Given: 10^4 pooled observations at a 25% target.
        delta = np.concatenate([gen_gev_aft(SimConfigGEV(50, seed=s)).delta
                                for s in range(200)])

        # When/Then: The censored fraction is 25% +- 2%.
        self.assertAlmostEqual(1 - delta.mean(), 0.25, delta=0.02)

    def test_no_censoring(self):
        cfg = SimConfigGEV(30, seed=7, target_censor_rate=0.0)
        self.assertEqual(censoring_shift(cfg), np.inf)
        self.assertEqual(gen_gev_aft(cfg).r, 30)

    def test_censoring_does_not_change_lifetimes(self):
        # Given: The same seed with and without censoring.
        censored = gen_gev_aft(SimConfigGEV(30, seed=8))
        uncensored = gen_gev_aft(SimConfigGEV(30, seed=8, target_censor_rate=0.0))

        # When/Then: Events carry the same lifetimes and covariates.
        events = censored.events
        np.testing.assert_array_equal(censored.y[events], uncensored.y[events])
        np.testing.assert_array_equal(censored.X, uncensored.X)
        self.assertTrue(np.all(censored.y[~events] < uncensored.y[~events]))

    def test_invalid_config(self):
        for kwargs in ({"n": 3}, {"n": 10, "target_censor_rate": 1.0},
                       {"n": 10, "xi": 0.0}, {"n": 10, "sigma": 0.0},
                       {"n": 10, "phi": (1.0, 2.0, 3.0)}):
            with self.subTest(**{k: str(v) for k, v in kwargs.items()}):
                with self.assertRaises(DomainError):
                    SimConfigGEV(**kwargs)


if __name__ == "__main__":
    unittest.main()
