#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
from mplkit.config.grammar import parse_interval


class OptionSpecification:
    """ A specification for matching and converting run options in a
    standardised manner.

    Parameters
    ----------
    options: {(str, str, type): any}
        For each recognised option:
        (<full option name>, <abbreviated option name>, <option type>):
        <default value>

    Attributes
    ----------
    options: {(str, str, type): any}
        As for the parameter, but with the option names (full and
        abbreviated) converted to lower case.
    """
    def __init__(self, options):
        self.options = {
            (full.lower(), abbr.lower(), typ): default
            for (full, abbr, typ), default in options.items()
        }

    def items(self):
        for k, v in self.options.items():
            yield k, v

    def keys(self):
        return self.options.keys()

    def defaults(self):
        """ {full option name: default}. """
        return {k[0]: v for k, v in self.items()}

    def match(self, option):
        """ Match an option name to a specified option.

        Parameters
        ----------
        option: str
            Full or abbreviated option name, matched case insensitively.
            '-' and '_' are interchangeable.

        Returns
        -------
        ((str, str, type), any)
            The matching key in self.options and its default.

        Throws
        ------
        ValueError
            If a matching option is not found.
        """
        o = option.strip().lower().replace("-", "_")
        for k, v in self.items():
            if o == k[0] or o == k[1]:
                return k, v
        raise ValueError(f"Option {option} not recognised.")

    def convert(self, option, term):
        """ Convert the string value of an option to the option's type.

        Returns
        -------
        (str, any)
            The full option name and the converted value.

        Throws
        ------
        ValueError
            If the option is unknown or term cannot be converted.
        """
        k, _ = self.match(option)
        typ = k[2]
        term = term.strip()
        if typ == str:
            return k[0], term
        if typ == bool:
            return k[0], term.lower() in ("t", "true", "yes", "1")
        if typ in (int, float):
            try:
                return k[0], typ(term)
            except ValueError:
                raise ValueError(
                    f"Option {option}: {term} cannot be converted into a number.")
        if typ == tuple:
            return k[0], parse_interval(term, option)
        if typ == list:
            return k[0], [t.strip() for t in term.split(",") if t.strip()]
        raise ValueError(f"Option {option} has no conversion for {typ.__name__}.")

    def check_positive(self, option, value):
        """ The value, if it is a positive integer. """
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise ValueError(f"Option {option}: {value} is not a positive integer.")
        return value
