import csv
import io
import logging
from pathlib import Path
from typing import BinaryIO, Mapping

import numpy as np
from matplotlib.figure import Figure

logger = logging.getLogger(__name__)


def format_number(value) -> str:
    """Shortest decimal string that round-trips to the same double."""
    return repr(float(value))


def csv_text(columns: Mapping[str, np.ndarray]) -> str:
    names = list(columns)
    data = [np.asarray(columns[n], dtype=float).ravel() for n in names]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(names)
    for row in zip(*data):
        writer.writerow([format_number(x) for x in row])
    return buffer.getvalue()


def write_csv(path: str | Path, columns: Mapping[str, np.ndarray]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(csv_text(columns), encoding="utf-8", newline="")
    logger.info(f"Wrote {path}")
    return path


def render_svg(buffer: BinaryIO, x: np.ndarray, series: Mapping[str, np.ndarray], title: str = "") -> None:
    """Line plot of every series against x, saved as SVG into an open binary stream."""
    # No pyplot: the API renders from worker threads.
    fig = Figure(figsize=(6.4, 4.0))
    ax = fig.add_subplot()
    for name, y in series.items():
        ax.plot(x, np.asarray(y, dtype=float), label=name, linewidth=1.5, gid=f"series-{name}")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    if series:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(buffer, format="svg")


def svg_text(x: np.ndarray, series: Mapping[str, np.ndarray], title: str = "") -> str:
    buffer = io.BytesIO()
    render_svg(buffer, x, series, title)
    return buffer.getvalue().decode("utf-8")


def write_svg(path: str | Path, x: np.ndarray, series: Mapping[str, np.ndarray], title: str = "") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as fh:
        render_svg(fh, x, series, title)
    logger.info(f"Wrote plot to {path}")
    return path
