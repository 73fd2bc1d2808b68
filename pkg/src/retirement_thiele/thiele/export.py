"""
CSV files of reserve surfaces and other tables.

Files are comma separated with a header row, ``.`` as the decimal mark and
LF line endings. Floats are written with enough digits to read back the same
value, so equal inputs give byte-identical files.
"""

import logging
from pathlib import Path

import pandas as pd
from beartype import beartype

from retirement_thiele.thiele.surfaces import ReserveSurface

LOGGER = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


@beartype
def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    """
    Write ``frame`` to ``path`` without its index.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(
        path_or_buf=path,
        index=False,
        float_format=FLOAT_FORMAT,
        lineterminator="\n",
    )
    LOGGER.debug("Wrote %d rows to %s.", len(frame), path)
    return path


@beartype
def write_surface(surface: ReserveSurface, path: Path) -> Path:
    """
    Write a reserve surface in long format.
    """
    return write_csv(frame=surface.to_frame(), path=path)


@beartype
def read_csv(path: Path) -> pd.DataFrame:
    """
    Read a table written by ``write_csv``.
    """
    return pd.read_csv(filepath_or_buffer=path, float_precision="round_trip")
