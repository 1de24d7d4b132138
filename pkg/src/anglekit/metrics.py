"""Evaluation metrics for labels and probability estimates."""

from __future__ import annotations

import numpy as np

__all__ = ["PROB_FLOOR", "error_rate", "mad", "cre", "nll"]

PROB_FLOOR = 1e-12  # applied before logarithms; saturated estimates stay finite


def error_rate(predictions, truth) -> float:
    """Fraction of disagreeing labels."""
    p = np.asarray(predictions)
    t = np.asarray(truth)
    if p.ndim != 1 or p.shape != t.shape or p.size == 0:
        raise ValueError("predictions and truth must be equal-length non-empty vectors")
    return float(np.mean(p != t))


def mad(true_probs, est_probs) -> float:
    """Mean over observations of the L1 distance between probability rows.

    The inner sum runs over all k classes and is not divided by k, so each
    row contributes at most 2.
    """
    T = np.asarray(true_probs, dtype=float)
    E = np.asarray(est_probs, dtype=float)
    if T.ndim != 2 or T.shape != E.shape:
        raise ValueError(f"probability matrices must share an (n, k) shape, got {T.shape} vs {E.shape}")
    for name, A in (("true", T), ("estimated", E)):
        if np.abs(A.sum(axis=1) - 1.0).max() > 1e-6:
            raise ValueError(f"{name} probability rows must sum to 1")
    return float(np.abs(T - E).sum(axis=1).mean())


def _true_class_probs(est_probs, truth) -> np.ndarray:
    E = np.asarray(est_probs, dtype=float)
    t = np.asarray(truth, dtype=int)
    if E.ndim != 2 or t.shape != (E.shape[0],):
        raise ValueError("est_probs must be (n, k) with one truth label per row")
    if E.shape[0] == 0:
        raise ValueError("est_probs must be non-empty")
    if t.min() < 1 or t.max() > E.shape[1]:
        raise ValueError(f"labels must lie in 1..{E.shape[1]}")
    return np.clip(E[np.arange(E.shape[0]), t - 1], PROB_FLOOR, None)


def cre(est_probs, truth) -> float:
    """Mean of -p log p over the estimated probabilities of the observed class.

    Note this scores p, not -log p: it is at most 1/e and is small both when
    the observed class gets probability near 1 and near 0.
    """
    p = _true_class_probs(est_probs, truth)
    return float(np.mean(-p * np.log(p)))


def nll(est_probs, truth) -> float:
    """Mean negative log probability of the observed class (standard log loss)."""
    p = _true_class_probs(est_probs, truth)
    return float(np.mean(-np.log(p)))
