"""CSV loading and writing for the command-line tools."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._errors import EmptyFile, MissingResponse, NonNumericCell, RaggedRows


@dataclass(frozen=True, eq=False)
class CsvDataset:
    """Parsed numeric CSV.

    ``X`` holds every column except the response (and the optional label
    column) in file order, unstandardized.  ``labels`` is the text of the
    label column when one was requested.
    """

    header: tuple
    response: str
    X: np.ndarray
    y: np.ndarray
    names: tuple
    labels: tuple | None = None

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


def _column_index(header, selector, what):
    if isinstance(selector, int) or (isinstance(selector, str) and selector.isdigit()
                                     and selector not in header):
        j = int(selector)
        if not 0 <= j < len(header):
            raise MissingResponse(f"{what} index {j} outside 0..{len(header) - 1}")
        return j
    hits = [j for j, h in enumerate(header) if h == selector]
    if not hits:
        raise MissingResponse(f"{what} column {selector!r} not in header {header[:8]}")
    if len(hits) > 1:
        raise MissingResponse(f"{what} column {selector!r} appears {len(hits)} times")
    return hits[0]


def load_csv(path, response="y", label_column=None) -> CsvDataset:
    """Read a header-first, comma-separated numeric file.

    Parameters
    ----------
    path : str or Path
    response : str or int
        Name of the response column, or its 0-based position.
    label_column : str or int, optional
        A text column (row names, method labels) to carry along instead of
        parsing as numbers.

    Raises
    ------
    EmptyFile, MissingResponse, RaggedRows, NonNumericCell
        ``NonNumericCell.row`` is the 1-based line number in the file.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise EmptyFile(f"{path} is empty")
    header = tuple(h.strip() for h in rows[0])
    body = rows[1:]
    if not body:
        raise EmptyFile(f"{path} has a header but no data rows")
    yj = _column_index(header, response, "response")
    lj = None if label_column is None else _column_index(header, label_column, "label")
    if lj == yj:
        raise MissingResponse("response and label column are the same")

    width = len(header)
    data = np.empty((len(body), width))
    labels = []
    for i, row in enumerate(body):
        if len(row) != width:
            raise RaggedRows(f"line {i + 2} has {len(row)} fields, header has {width}")
        for j, cell in enumerate(row):
            if j == lj:
                labels.append(cell.strip())
                data[i, j] = np.nan
                continue
            try:
                data[i, j] = float(cell)
            except ValueError:
                raise NonNumericCell(i + 2, header[j], cell) from None

    keep = [j for j in range(width) if j not in (yj, lj)]
    return CsvDataset(
        header=header,
        response=header[yj],
        X=data[:, keep],
        y=data[:, yj].copy(),
        names=tuple(header[j] for j in keep),
        labels=tuple(labels) if lj is not None else None,
    )


def write_dataset_csv(path, X, y, names=None, response="y") -> None:
    """Write ``y`` followed by the columns of ``X`` with 17 significant digits."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if names is None:
        names = [f"x{j + 1}" for j in range(X.shape[1])]
    Path(path).write_text(dataset_csv_text(X, y, names, response), encoding="utf-8")


def dataset_csv_text(X, y, names, response="y") -> str:
    lines = [",".join([response, *names])]
    for yi, row in zip(y, X):
        lines.append(",".join(f"{v:.17g}" for v in (yi, *row)))
    return "\n".join(lines) + "\n"
