#  (C) Copyright 2017-2024 Sean Parsons, Cambridge, UK.
#               All rights reserved.
#  Permission to use, copy, modify, and distribute this software and its
#  documentation for any purpose and without fee is hereby granted, provided
#  that the above copyright notice appear in all copies and that both that
#  copyright notice and this permission notice appear in supporting
#  documentation.
""" CSV and Markdown renderings of replicated tables. """
from __future__ import annotations

import logging
from pathlib import Path

import pandas as pd

from mplkit.montecarlo.harness import SUMMARY_COLUMNS, TableResult

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.10g"
DISPLAY_DECIMALS = {1: 3, 2: 4}
STATISTICS = ["mean", "variance", "bias", "mse", "rb_percent"]
CAPTIONS = {
    1: "Inverse Gaussian dispersion parameter lambda = {true:g}",
    2: "Shape parameter xi = {true:g} of GEV regression",
}


def to_csv(table: TableResult) -> str:
    """ One row per (n, estimator) under the SUMMARY_COLUMNS header.

    Floats are written with a fixed format so identical tables give identical
    bytes.
    """
    return table.frame[SUMMARY_COLUMNS].to_csv(
        index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def wide_frame(table: TableResult) -> pd.DataFrame:
    """ One row per n with the statistics of each estimator side by side. """
    frame = table.frame.pivot(index="n", columns="estimator", values=STATISTICS)
    frame = frame.reorder_levels([1, 0], axis=1)
    frame = frame[[(kind, stat) for kind in table.config.estimators for stat in STATISTICS]]
    frame.columns = [f"{stat} ({kind})" for kind, stat in frame.columns]
    return frame.reset_index()


def to_markdown(table: TableResult) -> str:
    """ The table as it is printed: rounded, one row per n, with a caption and
    a failure footer. """
    decimals = DISPLAY_DECIMALS.get(table.which, 4)
    body = wide_frame(table).to_markdown(index=False, floatfmt=f".{decimals}f")
    caption = CAPTIONS[table.which].format(true=table.config.true_value)
    return "\n".join([
        f"Table {table.which}: {caption} "
        f"({table.config.replications} replicates, seed {table.config.master_seed})",
        "",
        body,
        "",
        failure_footer(table),
        "",
    ])


def failure_footer(table: TableResult) -> str:
    """ Failed replicates per cell, excluded from the statistics above. """
    failures = table.failures()
    if table.total_failures == 0:
        return "Failed replicates: none."
    cells = ", ".join(
        f"n={n} " + "/".join(f"{kind} {count}" for kind, count in counts.items())
        for n, counts in failures.items() if any(counts.values()))
    return f"Failed replicates (excluded): {table.total_failures}; {cells}."


def write_table(table: TableResult, out_dir, formats=("csv",)) -> list:
    """ Write the table into out_dir as table<which>.<format>.

    Parameters
    ----------
    table: TableResult
    out_dir: str or Path
        Created if missing.
    formats: (str, ...)
        "csv" and/or "md".

    Returns
    -------
    [Path, ...]
        The files written.

    Throws
    ------
    OSError
        If out_dir cannot be created or written.
    """
    renderers = {"csv": to_csv, "md": to_markdown}
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in formats:
        if fmt not in renderers:
            raise ValueError(f"Format {fmt} not recognised.")
        path = out_dir / f"table{table.which}.{fmt}"
        path.write_text(renderers[fmt](table), encoding="utf-8")
        logger.info("Wrote %s.", path)
        written.append(path)
    return written
