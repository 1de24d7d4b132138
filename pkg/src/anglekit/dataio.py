"""CSV ingestion and plain-text persistence for datasets and models.

Dataset CSVs are comma separated with '.' decimal points, an optional
header row, one label column, and numeric feature columns. Labels are
mapped to 1..k in order of first appearance; the original label values are
kept on the dataset so files round-trip verbatim.

Model documents are versioned line-oriented text with 17-significant-digit
floats, so save followed by load reproduces every numeric field bit-exactly.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .datasets import LabeledDataset
from .errors import DataValidationError, ModelFormatError
from .linear_model import PENALTIES, LinearAngleModel
from .refit import RefitModel

__all__ = [
    "LINEAR_MODEL_TAG",
    "REFIT_MODEL_TAG",
    "load_csv",
    "save_csv",
    "load_feature_csv",
    "save_probabilities",
    "load_probabilities",
    "save_model",
    "load_model",
    "model_to_document",
    "model_from_document",
]

LINEAR_MODEL_TAG = "anglekit-linear-model-v1"
REFIT_MODEL_TAG = "anglekit-refit-model-v1"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_float(cell: str, line_no: int, column: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise DataValidationError(
            f"line {line_no}: non-numeric value {cell!r} in column {column}"
        ) from None


def load_csv(path, label_column="label", has_header: bool = True) -> LabeledDataset:
    """Read a dataset; ``label_column`` is a header name or a 0-based index."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise DataValidationError(f"{path}: file is empty")

    if has_header:
        names = [c.strip() for c in rows[0]]
        data_rows = rows[1:]
        first_line = 2
    else:
        names = None
        data_rows = rows
        first_line = 1

    if not data_rows:
        raise DataValidationError(f"{path}: no data rows")

    n_cols = len(data_rows[0])
    if isinstance(label_column, int):
        label_idx = label_column
        if not 0 <= label_idx < n_cols:
            raise ValueError(f"label column index {label_idx} outside 0..{n_cols - 1}")
    else:
        if names is None:
            raise ValueError("a named label column requires a header row")
        try:
            label_idx = names.index(label_column)
        except ValueError:
            raise ValueError(f"label column {label_column!r} not found in header {names}") from None

    feature_cols = [j for j in range(n_cols) if j != label_idx]
    col_names = (
        [names[j] for j in feature_cols] if names is not None else [f"col{j}" for j in feature_cols]
    )

    X = np.empty((len(data_rows), len(feature_cols)))
    raw_labels: list[str] = []
    for i, row in enumerate(data_rows):
        line_no = first_line + i
        if len(row) != n_cols:
            raise DataValidationError(
                f"line {line_no}: expected {n_cols} columns, found {len(row)}"
            )
        label = row[label_idx].strip()
        if not label:
            raise DataValidationError(f"line {line_no}: missing label")
        raw_labels.append(label)
        for out_j, j in enumerate(feature_cols):
            X[i, out_j] = _parse_float(row[j].strip(), line_no, col_names[out_j])

    mapping: dict[str, int] = {}
    for label in raw_labels:
        if label not in mapping:
            mapping[label] = len(mapping) + 1
    y = np.array([mapping[label] for label in raw_labels], dtype=int)
    return LabeledDataset(X=X, y=y, label_names=tuple(mapping))


def save_csv(data: LabeledDataset, path, label_column: str = "label", header: bool = True) -> None:
    """Write a dataset back out; original label values are restored if known."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if header:
            writer.writerow([f"x{j + 1}" for j in range(data.p)] + [label_column])
        for i in range(data.n):
            label = (
                data.label_names[data.y[i] - 1]
                if data.label_names is not None
                else str(int(data.y[i]))
            )
            writer.writerow([_fmt(v) for v in data.X[i]] + [label])


def load_feature_csv(path, has_header: bool = True) -> np.ndarray:
    """Read a pure feature matrix (every column numeric, no label)."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if has_header:
        rows = rows[1:]
    if not rows:
        raise DataValidationError(f"{path}: no data rows")
    first_line = 2 if has_header else 1
    X = np.empty((len(rows), len(rows[0])))
    for i, row in enumerate(rows):
        if len(row) != X.shape[1]:
            raise DataValidationError(
                f"line {first_line + i}: expected {X.shape[1]} columns, found {len(row)}"
            )
        for j, cell in enumerate(row):
            X[i, j] = _parse_float(cell.strip(), first_line + i, f"col{j}")
    return X


def save_probabilities(path, probs: np.ndarray) -> None:
    P = np.atleast_2d(np.asarray(probs, dtype=float))
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"p{j + 1}" for j in range(P.shape[1])])
        for row in P:
            writer.writerow([_fmt(v) for v in row])


def load_probabilities(path) -> np.ndarray:
    return load_feature_csv(path, has_header=True)


def _vector_line(name: str, values: np.ndarray) -> str:
    return " ".join([name] + [_fmt(v) for v in np.asarray(values, dtype=float).ravel()])


def _linear_model_lines(model: LinearAngleModel) -> list[str]:
    lines = [
        LINEAR_MODEL_TAG,
        f"k {model.k}",
        f"p {model.p}",
        f"loss {model.loss_id}",
        f"penalty {model.penalty}",
        f"lambda {_fmt(model.lambda_)}",
        _vector_line("mean", model.feature_mean),
        _vector_line("scale", model.feature_scale),
        _vector_line("b0", model.b0),
    ]
    for i in range(model.p):
        lines.append(_vector_line("B", model.B[i]))
    return lines


def model_to_document(model) -> str:
    if isinstance(model, RefitModel):
        lines = [REFIT_MODEL_TAG]
        lines += _linear_model_lines(model.stage1)
        lines += _linear_model_lines(model.stage2)
    elif isinstance(model, LinearAngleModel):
        lines = _linear_model_lines(model)
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    return "\n".join(lines) + "\n"


def _take_field(lines: list[str], pos: int, name: str) -> tuple[list[str], int]:
    if pos >= len(lines):
        raise ModelFormatError(f"document ended before field {name!r}")
    parts = lines[pos].split()
    if not parts or parts[0] != name:
        raise ModelFormatError(f"expected field {name!r} at line {pos + 1}, got {lines[pos]!r}")
    return parts[1:], pos + 1


def _parse_floats(values: list[str], count: int, name: str) -> np.ndarray:
    if len(values) != count:
        raise ModelFormatError(f"field {name!r} must carry {count} values, got {len(values)}")
    try:
        return np.array([float(v) for v in values])
    except ValueError:
        raise ModelFormatError(f"field {name!r} carries a non-numeric value") from None


def _parse_linear_block(lines: list[str], pos: int) -> tuple[LinearAngleModel, int]:
    if pos >= len(lines) or lines[pos].strip() != LINEAR_MODEL_TAG:
        raise ModelFormatError(f"expected {LINEAR_MODEL_TAG!r} header at line {pos + 1}")
    pos += 1
    vals, pos = _take_field(lines, pos, "k")
    k = int(_parse_floats(vals, 1, "k")[0])
    vals, pos = _take_field(lines, pos, "p")
    p = int(_parse_floats(vals, 1, "p")[0])
    if k < 2 or p < 1:
        raise ModelFormatError(f"invalid dimensions k={k}, p={p}")
    vals, pos = _take_field(lines, pos, "loss")
    if len(vals) != 1:
        raise ModelFormatError("field 'loss' must carry one identifier")
    loss_id = vals[0]
    vals, pos = _take_field(lines, pos, "penalty")
    if len(vals) != 1 or vals[0] not in PENALTIES:
        raise ModelFormatError(f"field 'penalty' must be one of {PENALTIES}")
    penalty = vals[0]
    vals, pos = _take_field(lines, pos, "lambda")
    lambda_ = float(_parse_floats(vals, 1, "lambda")[0])
    vals, pos = _take_field(lines, pos, "mean")
    mean = _parse_floats(vals, p, "mean")
    vals, pos = _take_field(lines, pos, "scale")
    scale = _parse_floats(vals, p, "scale")
    vals, pos = _take_field(lines, pos, "b0")
    b0 = _parse_floats(vals, k - 1, "b0")
    B = np.empty((p, k - 1))
    for i in range(p):
        vals, pos = _take_field(lines, pos, "B")
        B[i] = _parse_floats(vals, k - 1, "B")
    try:
        model = LinearAngleModel(
            k=k, p=p, loss_id=loss_id, penalty=penalty, lambda_=lambda_,
            B=B, b0=b0, feature_mean=mean, feature_scale=scale,
        )
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None
    return model, pos


def model_from_document(text: str):
    lines = [line.rstrip("\n") for line in text.splitlines() if line.strip()]
    if not lines:
        raise ModelFormatError("document is empty")
    if lines[0].strip() == REFIT_MODEL_TAG:
        stage1, pos = _parse_linear_block(lines, 1)
        stage2, pos = _parse_linear_block(lines, pos)
        if pos != len(lines):
            raise ModelFormatError("trailing content after the stage-2 block")
        try:
            return RefitModel(stage1=stage1, stage2=stage2)
        except ValueError as exc:
            raise ModelFormatError(str(exc)) from None
    if lines[0].strip() == LINEAR_MODEL_TAG:
        model, pos = _parse_linear_block(lines, 0)
        if pos != len(lines):
            raise ModelFormatError("trailing content after the model block")
        return model
    raise ModelFormatError(f"unknown document header {lines[0]!r}")


def save_model(model, path) -> None:
    Path(path).write_text(model_to_document(model), encoding="utf-8")


def load_model(path):
    return model_from_document(Path(path).read_text(encoding="utf-8"))
