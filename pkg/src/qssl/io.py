"""CSV datasets and JSON reports.

Dataset files have a header ``f1,...,fd,label``. The label cell is an
integer >= 1 or ``?`` for an unlabeled point. Rows may appear in any order;
labeled rows keep their relative order, as do unlabeled rows.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .core import Dataset
from .errors import ParseError

UNLABELED_TOKEN = "?"


def load_dataset(path, label_column: str = "label") -> Dataset:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file", line=1) from None
        header = [h.strip() for h in header]
        if label_column not in header:
            raise ParseError(f"no {label_column!r} column in header", line=1)
        label_pos = header.index(label_column)
        n_features = len(header) - 1
        if n_features < 1:
            raise ParseError("header declares no feature columns", line=1)

        labeled, labels, unlabeled = [], [], []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(row)}", line=line_no)
            token = row[label_pos].strip()
            try:
                values = [float(c) for i, c in enumerate(row) if i != label_pos]
            except ValueError as exc:
                raise ParseError(f"malformed feature value ({exc})", line=line_no) from None
            if not all(math.isfinite(v) for v in values):
                raise ParseError("non-finite feature value", line=line_no)
            if token == UNLABELED_TOKEN:
                unlabeled.append(values)
                continue
            try:
                label = int(token)
            except ValueError:
                raise ParseError(f"unknown label token {token!r}", line=line_no) from None
            if label < 1:
                raise ParseError(f"label must be >= 1, got {label}", line=line_no)
            labeled.append(values)
            labels.append(label)

    if not labeled and not unlabeled:
        raise ParseError("file has no data rows", line=2)
    return Dataset(
        labeled_x=np.asarray(labeled, dtype=np.float64).reshape(-1, n_features),
        labels=np.asarray(labels, dtype=np.int64),
        unlabeled_x=np.asarray(unlabeled, dtype=np.float64).reshape(-1, n_features),
    )


def save_dataset(ds: Dataset, path) -> None:
    """Write ``ds`` as CSV; values use ``repr`` so a reload is bit-exact."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"f{t + 1}" for t in range(ds.dim)] + ["label"])
        for row, label in zip(ds.labeled_x, ds.labels):
            writer.writerow([repr(float(v)) for v in row] + [int(label)])
        for row in ds.unlabeled_x:
            writer.writerow([repr(float(v)) for v in row] + [UNLABELED_TOKEN])


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_report(report) -> str:
    """Serialise a report with stable (insertion) field order."""
    return json.dumps(report, default=_jsonable, indent=2) + "\n"


def save_report(report, path) -> None:
    Path(path).write_text(dumps_report(report))


def save_table(rows, columns, path) -> None:
    """Write a list of dict rows as CSV with the given column order."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({c: row[c] for c in columns})
