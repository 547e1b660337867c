"""Delimited-table ingestion for the command-line interface."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .data import RegressionData, validate_data
from .errors import TableParseError

_KNOWN_DELIMITERS = (",", "\t", ";")


def _detect_delimiter(header_line: str) -> str:
    counts = {d: header_line.count(d) for d in _KNOWN_DELIMITERS}
    best = max(counts, key=counts.get)
    if counts[best] == 0:
        raise TableParseError(
            "could not detect a comma/tab/semicolon delimiter; pass one explicitly")
    return best


def read_table(path, delimiter: str | None = None) -> tuple[list[str], np.ndarray]:
    """Read a delimited text table with a header row into (names, values)."""
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if len(lines) < 2:
        raise TableParseError(f"{path}: need a header row and at least one data row")
    if delimiter is None:
        delimiter = _detect_delimiter(lines[0])
    rows = list(csv.reader(lines, delimiter=delimiter))
    names = [c.strip() for c in rows[0]]
    data = []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(names):
            raise TableParseError(f"{path}:{i}: expected {len(names)} fields, got {len(row)}")
        try:
            data.append([float(c) for c in row])
        except ValueError as exc:
            raise TableParseError(f"{path}:{i}: non-numeric field ({exc})") from exc
    return names, np.asarray(data, dtype=float)


def load_regression(path, response_col: str | None = None,
                    delimiter: str | None = None,
                    add_intercept: bool = True) -> tuple[RegressionData, list[str]]:
    """Load a table as a regression problem.

    The response column is selected by header name (default: the first
    column); the remaining columns become regressors, in file order. Returns
    the validated data and the regressor names (with the intercept first).
    """
    names, values = read_table(path, delimiter=delimiter)
    if response_col is None:
        ridx = 0
    else:
        try:
            ridx = names.index(response_col)
        except ValueError:
            raise TableParseError(
                f"{path}: no column named {response_col!r} (have {names})") from None
    y = values[:, ridx]
    keep = [j for j in range(len(names)) if j != ridx]
    X = values[:, keep]
    data = validate_data(X, y, add_intercept=add_intercept)
    kept_names = [names[j] for j in keep]
    if data.p == len(kept_names) + 1:
        kept_names = ["intercept"] + kept_names
    return data, kept_names
