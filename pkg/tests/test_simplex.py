import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anglekit.simplex import (
    SimplexCode,
    predict_label,
    reconstruct,
    simplex_vertices,
    vertex_scores,
)

SQRT2 = np.sqrt(2.0)


def test_k2_vertices():
    code = simplex_vertices(2)
    np.testing.assert_allclose(code.vertices, [[1.0], [-1.0]], atol=1e-15)


def test_k3_vertices_closed_form():
    code = simplex_vertices(3)
    w1 = np.array([1.0, 1.0]) / SQRT2
    w2 = -(1.0 + np.sqrt(3.0)) / (2.0 * SQRT2) * np.ones(2) + np.sqrt(1.5) * np.array([1.0, 0.0])
    w3 = -(1.0 + np.sqrt(3.0)) / (2.0 * SQRT2) * np.ones(2) + np.sqrt(1.5) * np.array([0.0, 1.0])
    np.testing.assert_allclose(code.vertices, [w1, w2, w3], atol=1e-14)


@pytest.mark.parametrize("k", range(2, 21))
def test_geometry_invariants(k):
    code = simplex_vertices(k)
    V = code.vertices
    assert V.shape == (k, k - 1)
    np.testing.assert_allclose(np.linalg.norm(V, axis=1), 1.0, atol=1e-12)
    G = V @ V.T
    off_diagonal = G[~np.eye(k, dtype=bool)]
    np.testing.assert_allclose(off_diagonal, -1.0 / (k - 1), atol=1e-12)
    np.testing.assert_allclose(V.sum(axis=0), 0.0, atol=1e-12)
    np.testing.assert_allclose(V.T @ V, k / (k - 1) * np.eye(k - 1), atol=1e-10)


def test_vertices_cached_and_immutable():
    a = simplex_vertices(4)
    b = simplex_vertices(4)
    assert a is b
    with pytest.raises(ValueError):
        a.vertices[0, 0] = 99.0


@pytest.mark.parametrize("bad", [1, 0, -3, 2.5])
def test_invalid_class_count(bad):
    with pytest.raises(ValueError):
        simplex_vertices(bad)


def test_scores_zero_vector():
    code = simplex_vertices(5)
    np.testing.assert_array_equal(vertex_scores(np.zeros(4), code), np.zeros(5))


def test_scores_k2():
    code = simplex_vertices(2)
    np.testing.assert_allclose(vertex_scores(np.array([2.5]), code), [2.5, -2.5])


def test_scores_sum_to_zero():
    rng = np.random.default_rng(1)
    for k in (2, 3, 5, 10):
        code = simplex_vertices(k)
        for _ in range(50):
            u = vertex_scores(rng.standard_normal(k - 1) * 10, code)
            assert abs(u.sum()) < 1e-10


def test_scores_dimension_mismatch():
    with pytest.raises(ValueError):
        vertex_scores(np.zeros(3), simplex_vertices(3))


def test_reconstruct_zero():
    code = simplex_vertices(4)
    np.testing.assert_array_equal(reconstruct(np.zeros(4), code), np.zeros(3))


def test_reconstruct_k2():
    code = simplex_vertices(2)
    np.testing.assert_allclose(reconstruct(np.array([1.7, -1.7]), code), [1.7])


def test_reconstruct_rejects_nonzero_sum():
    code = simplex_vertices(3)
    with pytest.raises(ValueError):
        reconstruct(np.array([1.0, 1.0, 1.0]), code)


@settings(max_examples=100, deadline=None)
@given(
    st.integers(min_value=2, max_value=10),
    st.integers(min_value=0, max_value=2**32 - 1),
)
def test_round_trip_property(k, seed):
    code = simplex_vertices(k)
    f = np.random.default_rng(seed).standard_normal(k - 1) * 5
    np.testing.assert_allclose(reconstruct(vertex_scores(f, code), code), f, atol=1e-10)


def test_round_trip_bulk():
    rng = np.random.default_rng(42)
    for k in (2, 3, 5, 10):
        code = simplex_vertices(k)
        F = rng.standard_normal((1000, k - 1)) * 3
        U = F @ code.vertices.T
        R = ((k - 1) / k) * (U @ code.vertices)
        assert np.abs(R - F).max() < 1e-10


def test_predict_label_basic():
    assert predict_label(np.array([0.5, -0.2, -0.3])) == 1
    assert predict_label(np.array([0.0, 0.0, 0.0])) == 1  # tie to smallest index
    assert predict_label(np.array([-1.0, 2.0, 2.0])) == 2


def test_predict_label_own_vertex():
    for k in (2, 3, 6):
        code = simplex_vertices(k)
        for j in range(1, k + 1):
            assert predict_label(vertex_scores(code.vertex(j), code)) == j


def test_predict_label_empty():
    with pytest.raises(ValueError):
        predict_label(np.array([]))
