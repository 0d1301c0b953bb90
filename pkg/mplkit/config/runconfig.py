#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
""" Resolution of run options from command-line flags, a configuration file
and defaults. """
from __future__ import annotations

import logging
import os
from pathlib import Path

import numpy as np

from mplkit.config.grammar import parse_config
from mplkit.config.OptionSpecification import OptionSpecification
from mplkit.optimize.settings import OptimizerSettings

logger = logging.getLogger(__name__)

SEED_ENVIRONMENT_VARIABLE = "MPLKIT_SEED"

OPTIONS = OptionSpecification({
    ("seed", "s", int): None,
    ("reps", "r", int): 1000,
    ("table", "t", int): 1,
    ("workers", "w", int): 1,
    ("n", "n", int): 20,
    ("model", "m", str): "ig",
    ("kind", "k", str): "p",
    ("bracket", "b", tuple): OptimizerSettings.bracket,
    ("tol", "tolerance", float): OptimizerSettings.inner_tol,
    ("grid", "g", int): OptimizerSettings.grid_points,
    ("max_iter", "iter", int): OptimizerSettings.inner_max_iter,
    ("format", "f", list): ["csv"],
    ("out", "o", str): ".",
    ("json", "j", bool): False,
})

POSITIVE = ("reps", "table", "workers", "n", "grid", "max_iter")

SEED_FLAG = "flag"
SEED_FILE = "file"
SEED_ENVIRONMENT = "environment"
SEED_GENERATED = "generated"


def read_config_file(path, spec: OptionSpecification = OPTIONS) -> dict:
    """ The options of a configuration file, converted to their types.

    Throws
    ------
    OSError
        If the file cannot be read.
    ValueError
        If a line cannot be parsed, names an unknown option or holds a value
        of the wrong type.
    """
    text = Path(path).read_text(encoding="utf-8")
    options = {}
    for lineno, key, value in parse_config(text):
        try:
            name, converted = spec.convert(key, value)
        except ValueError as err:
            raise ValueError(f"{path}, line {lineno}: {err}")
        options[name] = converted
    return options


class RunConfig:
    """ Run options resolved with precedence flags > file > defaults.

    The seed additionally falls back to the MPLKIT_SEED environment variable
    and then to fresh entropy, so every run has a seed that reproduces it.

    Parameters
    ----------
    flags: {str: any}
        Options given on the command line; None means not given.
    file_options: {str: any}
        Options read from a configuration file.
    environ: {str: str}
        The environment; os.environ if None.
    spec: OptionSpecification

    Attributes
    ----------
    options: {str: any}
        Every option of the option table, resolved.
    seed_source: str
        "flag", "file", "environment" or "generated".
    """
    def __init__(self, flags=None, file_options=None, environ=None,
                 spec: OptionSpecification = OPTIONS):
        self.spec = spec
        flags = {k: v for k, v in (flags or {}).items() if v is not None}
        file_options = file_options or {}
        environ = os.environ if environ is None else environ

        self.options = spec.defaults()
        for source in (file_options, flags):
            for key, value in source.items():
                k, _ = spec.match(key)
                self.options[k[0]] = value

        for name in POSITIVE:
            if name in self.options:
                spec.check_positive(name, self.options[name])

        self.seed, self.seed_source = self._resolve_seed(flags, file_options, environ)
        self.options["seed"] = self.seed
        logger.info("Seed %d (%s).", self.seed, self.seed_source)

    @classmethod
    def from_sources(cls, flags=None, config_path=None, environ=None):
        """ A RunConfig from flags and an optional configuration file. """
        file_options = read_config_file(config_path) if config_path else {}
        return cls(flags, file_options, environ)

    def _resolve_seed(self, flags, file_options, environ):
        if "seed" in flags:
            return self._check_seed(flags["seed"]), SEED_FLAG
        if "seed" in file_options:
            return self._check_seed(file_options["seed"]), SEED_FILE
        if environ.get(SEED_ENVIRONMENT_VARIABLE):
            _, seed = self.spec.convert("seed", environ[SEED_ENVIRONMENT_VARIABLE])
            return self._check_seed(seed), SEED_ENVIRONMENT
        return int(np.random.SeedSequence().entropy), SEED_GENERATED

    @staticmethod
    def _check_seed(seed):
        if seed < 0:
            raise ValueError(f"Option seed: {seed} is negative.")
        return int(seed)

    def __getitem__(self, name):
        k, _ = self.spec.match(name)
        return self.options[k[0]]

    def optimizer_settings(self) -> OptimizerSettings:
        """ The optimiser settings of these options. """
        return OptimizerSettings(
            inner_tol=self["tol"],
            inner_max_iter=self["max_iter"],
            bracket=tuple(self["bracket"]),
            grid_points=self["grid"],
        )
