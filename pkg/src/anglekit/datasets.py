"""Labeled data container shared by the generators, IO, and fitting code."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["LabeledDataset"]


@dataclass
class LabeledDataset:
    """Feature matrix with 1-based integer labels.

    ``true_probs`` carries the known class conditional probabilities of
    synthetic data (one row per observation, rows summing to 1).
    ``label_names`` records the original label values of data read from a
    file, in class-index order, so labels can be written back verbatim.
    """

    X: np.ndarray
    y: np.ndarray
    true_probs: np.ndarray | None = None
    label_names: tuple[str, ...] | None = None

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=int)
        if self.X.ndim != 2:
            raise ValueError(f"X must be 2-dimensional, got shape {self.X.shape}")
        if self.y.shape != (self.X.shape[0],):
            raise ValueError(
                f"y must have one label per row of X, got {self.y.shape} for {self.X.shape}"
            )
        if self.y.size and self.y.min() < 1:
            raise ValueError("labels must be 1-based positive integers")
        if self.true_probs is not None:
            self.true_probs = np.asarray(self.true_probs, dtype=float)
            if self.true_probs.ndim != 2 or self.true_probs.shape[0] != self.X.shape[0]:
                raise ValueError("true_probs must have one row per observation")
            row_err = np.abs(self.true_probs.sum(axis=1) - 1.0)
            if self.true_probs.size and row_err.max() > 1e-10:
                raise ValueError("true_probs rows must sum to 1")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def subset(self, indices: np.ndarray) -> "LabeledDataset":
        """Row-subset keeping true probabilities and the label mapping."""
        idx = np.asarray(indices, dtype=int)
        probs = None if self.true_probs is None else self.true_probs[idx]
        return LabeledDataset(
            X=self.X[idx], y=self.y[idx], true_probs=probs, label_names=self.label_names
        )
