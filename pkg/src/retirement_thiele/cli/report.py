"""
A plain-text summary of a finished run.
"""

from pathlib import Path

import pandas as pd
from beartype import beartype
from rich.console import Console
from rich.table import Table


def _table(path: Path, title: str) -> Table:
    """
    A table with the cells of a CSV file as written.
    """
    frame = pd.read_csv(
        filepath_or_buffer=path,
        dtype=str,
        keep_default_na=False,
    )
    table = Table(title=title)
    for column in frame.columns:
        table.add_column(header=str(column), justify="right")
    for row in frame.itertuples(index=False):
        table.add_row(*row)
    return table


@beartype
def emit_report(out_dir: Path, console: Console) -> None:
    """
    Print the headline reserves and the checks of a run in ``out_dir``.

    The numbers are those of ``headline.csv`` and ``checks.csv``.
    """
    console.print(_table(path=out_dir / "headline.csv", title="Reserves"))
    checks = out_dir / "checks.csv"
    if pd.read_csv(filepath_or_buffer=checks).empty:
        console.print("No checks were enabled.")
        return
    console.print(_table(path=checks, title="Checks"))
