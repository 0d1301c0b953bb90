#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
""" pyparsing grammars of the run-configuration file and of interval values.

Configuration files hold one option per line,

    # Table 2 smoke run
    table = 2
    reps = 100      # replicates per cell
    bracket = 0.5:5

with '#' comments and blank lines ignored.
"""
from pyparsing import (
    alphas, alphanums, Group, Literal, ParseException, ParseSyntaxException,
    Regex, Word, ZeroOrMore, pyparsing_common, pythonStyleComment,
)


def _create_interval_grammar():
    # ::= <number>:<number>
    number = pyparsing_common.fnumber
    return number - Literal(":").suppress() - number


def _create_config_grammar():
    # ::= <key> = <value>
    key = Word(alphas, alphanums + "_-")
    value = Regex(r"[^#\n]+").setParseAction(lambda t: t[0].strip())
    entry = Group(key + Literal("=").suppress() - value)
    grammar = ZeroOrMore(entry)
    grammar.ignore(pythonStyleComment)
    return grammar


INTERVAL = _create_interval_grammar()
CONFIG = _create_config_grammar()


def parse_interval(term, option="bracket"):
    """ Parse "a:b" into the float pair (a, b) with a < b.

    Throws
    ------
    ValueError
        If term is not two numbers separated by ':' or a >= b.
    """
    try:
        lo, hi = INTERVAL.parseString(term.strip(), parseAll=True)
    except (ParseException, ParseSyntaxException):
        raise ValueError(f"Option {option}: {term} cannot be parsed as an interval a:b.")
    if not lo < hi:
        raise ValueError(f"Option {option}: {term} is an empty interval.")
    return float(lo), float(hi)


def parse_config(text):
    """ Parse configuration text into [(line number, key, value), ...].

    Throws
    ------
    ValueError
        Naming the first line that cannot be parsed.
    """
    entries = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            result = CONFIG.parseString(stripped, parseAll=True)
        except (ParseException, ParseSyntaxException):
            raise ValueError(f"Configuration line {lineno} cannot be parsed: {stripped}")
        for key, value in result:
            entries.append((lineno, key, value))
    return entries
