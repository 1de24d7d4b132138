"""Class probability estimation through the inverse loss derivative.

For vertex scores u_1..u_k the class-j probability estimate is

    P_j = (1/l'(u_j)) / sum_i (1/l'(u_i))

which, with the strictly negative derivatives of the shipped losses, equals
the normalization of the positive weights w_j = -1/l'(u_j). Working with the
positive weights avoids negative intermediaries; the ratio is unchanged.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateDerivativeError
from .losses import LossFunction

__all__ = [
    "SCORE_CLAMP",
    "class_probabilities",
    "probability_matrix",
    "binary_probability",
]

SCORE_CLAMP = 1e8  # weights like (1+u)^2 stay finite; ordering is preserved


def _weights(scores: np.ndarray, loss: LossFunction) -> np.ndarray:
    u = np.clip(scores, -SCORE_CLAMP, SCORE_CLAMP)
    d = np.asarray(loss.deriv(u), dtype=float)
    if not np.all(np.isfinite(d)) or np.any(d >= 0.0):
        raise DegenerateDerivativeError(
            "loss derivative must be finite and strictly negative at every score"
        )
    w = -1.0 / d
    if not np.all(np.isfinite(w)):
        raise DegenerateDerivativeError("inverse loss derivative is not finite")
    return w


def class_probabilities(scores: np.ndarray, loss: LossFunction) -> np.ndarray:
    """Probability vector for one observation's k vertex scores."""
    u = np.asarray(scores, dtype=float)
    if u.ndim != 1 or u.size < 2:
        raise ValueError(f"scores must be a vector of at least 2 entries, got shape {u.shape}")
    w = _weights(u, loss)
    return w / w.sum()


def probability_matrix(scores: np.ndarray, loss: LossFunction) -> np.ndarray:
    """Row-wise ``class_probabilities`` for an (n, k) score matrix."""
    U = np.asarray(scores, dtype=float)
    if U.ndim != 2 or U.shape[1] < 2:
        raise ValueError(f"scores must be an (n, k) matrix with k >= 2, got shape {U.shape}")
    w = _weights(U, loss)
    return w / w.sum(axis=1, keepdims=True)


def binary_probability(f: float, loss: LossFunction) -> float:
    """Class-(+1) probability l'(-f) / (l'(-f) + l'(f)) of a binary classifier.

    Identical to component 1 of ``class_probabilities`` under the k=2
    encoding with scores (f, -f).
    """
    f = float(f)
    if not np.isfinite(f):
        raise ValueError("decision value must be finite")
    f = float(np.clip(f, -SCORE_CLAMP, SCORE_CLAMP))
    d_neg = float(loss.deriv(-f))
    d_pos = float(loss.deriv(f))
    for d in (d_neg, d_pos):
        if not np.isfinite(d) or d >= 0.0:
            raise DegenerateDerivativeError(
                "loss derivative must be finite and strictly negative"
            )
    return d_neg / (d_neg + d_pos)
