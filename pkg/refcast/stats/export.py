"""Two-column CSV export for plot-ready data."""

from pathlib import Path
from typing import IO, Iterable, Sequence, Tuple

import pandas as pd

Destination = str | Path | IO[str]


def write_xy_csv(
    rows: Iterable[Tuple[float, float]],
    header: Sequence[str],
    dest: Destination,
) -> None:
    """Write (x, y) pairs as a two-column CSV.

    Parameters
    ----------
    rows : Iterable[Tuple[float, float]]
        The pairs to write, in order.
    header : Sequence[str]
        The two column names, e.g. ``("x", "density")``.
    dest : str | Path | IO[str]
        Output path or open text stream.
    """
    frame = pd.DataFrame(list(rows), columns=list(header))
    frame.to_csv(dest, index=False, float_format="%.10g", lineterminator="\n")
