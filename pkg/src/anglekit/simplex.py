"""Simplex vertex geometry for angle-based multicategory classification.

A k-class problem is encoded by k unit vectors in R^{k-1} pointing to the
vertices of a centered regular simplex: distinct vertices have pairwise
inner product -1/(k-1) and the vertices sum to zero. A classifier output
f lives in R^{k-1}; the score of class j is <W_j, f>, and the predicted
class is the one whose vertex makes the smallest angle with f, i.e. the
largest score.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "SimplexCode",
    "simplex_vertices",
    "vertex_scores",
    "reconstruct",
    "predict_label",
]

SCORE_SUM_TOLERANCE = 1e-8


@dataclass(frozen=True, eq=False)
class SimplexCode:
    """The k class vertices, stored as rows of a read-only (k, k-1) array."""

    k: int
    vertices: np.ndarray

    def vertex(self, label: int) -> np.ndarray:
        """Vertex assigned to class ``label`` (1-based)."""
        if not 1 <= label <= self.k:
            raise ValueError(f"label must lie in 1..{self.k}, got {label}")
        return self.vertices[label - 1]


def simplex_vertices(k: int) -> SimplexCode:
    """Build (and cache) the simplex code for ``k`` classes.

    Vertex 1 is (k-1)^{-1/2} * 1; vertex j >= 2 is
    -(1 + sqrt(k)) / (k-1)^{3/2} * 1 + sqrt(k/(k-1)) * e_{j-1}.
    """
    if int(k) != k or k < 2:
        raise ValueError(f"class count must be an integer >= 2, got {k!r}")
    return _build(int(k))


@lru_cache(maxsize=None)
def _build(k: int) -> SimplexCode:
    vertices = np.full((k, k - 1), -(1.0 + np.sqrt(k)) / (k - 1) ** 1.5)
    vertices[0, :] = 1.0 / np.sqrt(k - 1)
    idx = np.arange(1, k)
    vertices[idx, idx - 1] += np.sqrt(k / (k - 1))
    vertices.setflags(write=False)
    return SimplexCode(k=k, vertices=vertices)


def vertex_scores(f: np.ndarray, code: SimplexCode) -> np.ndarray:
    """Inner products <W_j, f> for j = 1..k. They sum to zero."""
    f = np.asarray(f, dtype=float)
    if f.shape != (code.k - 1,):
        raise ValueError(
            f"decision vector must have dimension {code.k - 1}, got shape {f.shape}"
        )
    return code.vertices @ f


def reconstruct(scores: np.ndarray, code: SimplexCode) -> np.ndarray:
    """Invert ``vertex_scores``: f = ((k-1)/k) * sum_j u_j W_j.

    The k scores of any f in R^{k-1} sum to zero, so score vectors that
    are not zero-sum (beyond tolerance) cannot come from a decision vector
    and are rejected.
    """
    u = np.asarray(scores, dtype=float)
    if u.shape != (code.k,):
        raise ValueError(f"score vector must have dimension {code.k}, got shape {u.shape}")
    total = float(u.sum())
    if abs(total) > SCORE_SUM_TOLERANCE:
        raise ValueError(f"scores must sum to zero, got sum {total:.3e}")
    return ((code.k - 1) / code.k) * (code.vertices.T @ u)


def predict_label(scores: np.ndarray) -> int:
    """Index (1-based) of the largest score; ties go to the smallest index."""
    u = np.asarray(scores, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise ValueError("scores must be a non-empty vector")
    return int(np.argmax(u)) + 1
