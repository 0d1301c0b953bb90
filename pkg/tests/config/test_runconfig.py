#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
import os
import tempfile
import unittest

from mplkit.config.grammar import parse_config, parse_interval
from mplkit.config.runconfig import (
    OPTIONS, SEED_ENVIRONMENT, SEED_FILE, SEED_FLAG, SEED_GENERATED, RunConfig,
    read_config_file,
)


class TestGrammar(unittest.TestCase):

    def test_interval(self):
        # Given: Interval terms and the expected pairs.
        terms = {
            "0.5:5": (0.5, 5.0),
            " -1:2.5 ": (-1.0, 2.5),
            "1e-2:1e2": (0.01, 100.0),
        }
        for term, expected in terms.items():
            with self.subTest(term):
                self.assertEqual(parse_interval(term), expected)

    def test_bad_interval(self):
        for term in ("5", "a:b", "1:2:3", "5:0.5", "2:2"):
            with self.subTest(term):
                with self.assertRaises(ValueError):
                    parse_interval(term)

    def test_config(self):
        # Given: Configuration text with comments and blank lines.
        text = "# Table 2 smoke run\n" \
               "table = 2\n" \
               "\n" \
               "reps = 100      # replicates per cell\n" \
               "max-iter=50\n" \
               "bracket = 0.5:5\n"

        # When: It is parsed.
        entries = parse_config(text)

        # Then: Entries keep their line numbers and values lose the comments.
        self.assertEqual(entries, [
            (2, "table", "2"), (4, "reps", "100"), (5, "max-iter", "50"),
            (6, "bracket", "0.5:5"),
        ])

    def test_bad_config_line(self):
        with self.assertRaises(ValueError) as cm:
            parse_config("table = 2\nreps 100\n")
        self.assertIn("line 2", str(cm.exception))


class TestOptionSpecification(unittest.TestCase):

    def test_match(self):
        # Given: Full and abbreviated names in any case.
        names = {"reps": "reps", "R": "reps", "Max-Iter": "max_iter", "iter": "max_iter",
                 "tolerance": "tol", "B": "bracket"}
        for name, full in names.items():
            with self.subTest(name):
                k, _ = OPTIONS.match(name)
                self.assertEqual(k[0], full)

    def test_unknown_option(self):
        with self.assertRaises(ValueError) as cm:
            OPTIONS.match("colour")
        self.assertEqual(str(cm.exception), "Option colour not recognised.")

    def test_convert(self):
        # Given: Terms for options of every type.
        conversions = {
            ("reps", " 250 "): ("reps", 250),
            ("tol", "1e-8"): ("tol", 1e-8),
            ("b", "0.5:5"): ("bracket", (0.5, 5.0)),
            ("format", "csv, md"): ("format", ["csv", "md"]),
            ("json", "True"): ("json", True),
            ("model", "gev"): ("model", "gev"),
        }
        for (option, term), expected in conversions.items():
            with self.subTest(option=option):
                self.assertEqual(OPTIONS.convert(option, term), expected)

    def test_bad_conversion(self):
        with self.assertRaises(ValueError) as cm:
            OPTIONS.convert("reps", "many")
        self.assertIn("cannot be converted into a number", str(cm.exception))


class TestRunConfig(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, "run.cfg")
        with open(self.path, "w") as f:
            f.write("reps = 100\nworkers = 2\nseed = 17\n")

    def tearDown(self):
        self.tmp.cleanup()

    def test_precedence(self):
        # Given: reps in flags and file, workers in the file only.
        # When: The options are resolved.
        cfg = RunConfig.from_sources({"reps": 10, "workers": None}, self.path, environ={})

        # Then: Flags beat the file, the file beats the defaults.
        self.assertEqual(cfg["reps"], 10)
        self.assertEqual(cfg["workers"], 2)
        self.assertEqual(cfg["table"], 1)
        self.assertEqual((cfg.seed, cfg.seed_source), (17, SEED_FILE))

    def test_seed_sources(self):
        environ = {"MPLKIT_SEED": "99"}
        with self.subTest("flag"):
            cfg = RunConfig({"seed": 5}, {"seed": 17}, environ)
            self.assertEqual((cfg.seed, cfg.seed_source), (5, SEED_FLAG))
        with self.subTest("environment"):
            cfg = RunConfig({}, {}, environ)
            self.assertEqual((cfg.seed, cfg.seed_source), (99, SEED_ENVIRONMENT))
        with self.subTest("generated"):
            cfg = RunConfig({}, {}, {})
            self.assertEqual(cfg.seed_source, SEED_GENERATED)
            self.assertGreaterEqual(cfg.seed, 0)
            self.assertEqual(cfg["seed"], cfg.seed)

    def test_not_positive(self):
        for name in ("reps", "workers", "grid"):
            with self.subTest(name):
                with self.assertRaises(ValueError) as cm:
                    RunConfig({name: 0}, environ={})
                self.assertIn("not a positive integer", str(cm.exception))

    def test_negative_seed(self):
        with self.assertRaises(ValueError):
            RunConfig({"seed": -1}, environ={})

    def test_file_error_names_line(self):
        # Given: A file whose second line has a bad value.
        with open(self.path, "w") as f:
            f.write("reps = 100\nworkers = lots\n")

        # When/Then: The error names the file and the line.
        with self.assertRaises(ValueError) as cm:
            read_config_file(self.path)
        self.assertIn("line 2", str(cm.exception))
        self.assertIn(self.path, str(cm.exception))

    def test_optimizer_settings(self):
        cfg = RunConfig({"bracket": (0.5, 5.0), "grid": 11, "tol": 1e-7}, environ={})
        settings = cfg.optimizer_settings()
        self.assertEqual(settings.bracket, (0.5, 5.0))
        self.assertEqual(settings.grid_points, 11)
        self.assertEqual(settings.inner_tol, 1e-7)


if __name__ == "__main__":
    unittest.main()
