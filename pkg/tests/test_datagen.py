import numpy as np
import pytest

from anglekit.datagen import (
    DEFAULT_TEST_SIZE,
    ExampleSpec,
    bayes_error,
    example1_spec,
    example2_spec,
    example_spec,
    gen_example1,
    gen_example2,
    generate,
    true_probabilities,
    true_probability_matrix,
)


def test_example1_spec_layout():
    spec = example1_spec()
    assert (spec.k, spec.signal_dim, spec.noise_dim, spec.p) == (3, 10, 1490, 1500)
    expected = np.zeros((3, 10))
    expected[0, 0:4] = 3.0
    expected[1, 3:7] = 3.0
    expected[2, 6:10] = 3.0
    np.testing.assert_array_equal(spec.class_means, expected)
    np.testing.assert_array_equal(spec.signal_sd, np.full(10, 2.0))
    assert spec.noise_sd == pytest.approx(np.sqrt(0.02))


def test_example2_spec_layout():
    spec = example2_spec()
    assert (spec.k, spec.signal_dim, spec.noise_dim, spec.p) == (10, 2, 498, 500)
    np.testing.assert_allclose(spec.class_means[0], [3.0, 0.0], atol=1e-14)
    np.testing.assert_allclose(np.linalg.norm(spec.class_means, axis=1), 3.0, atol=1e-12)
    # adjacent means sit one chord apart on the radius-3 circle
    chord = np.linalg.norm(spec.class_means[0] - spec.class_means[1])
    assert chord == pytest.approx(2.0 * 3.0 * np.sin(np.pi / 10.0), abs=1e-12)
    assert spec.noise_sd == pytest.approx(0.1)


def test_example_spec_lookup():
    assert example_spec("ex1").example_id == "ex1"
    assert example_spec("ex2").example_id == "ex2"
    with pytest.raises(ValueError):
        example_spec("ex3")


def test_stock_test_sizes():
    # the full protocol pairs 300/300 train/tune with these test sizes
    assert DEFAULT_TEST_SIZE == {"ex1": 29400, "ex2": 10000}


def test_generated_shapes_and_probs():
    data = gen_example1(40, seed=1)
    assert data.X.shape == (40, 1500)
    assert data.y.shape == (40,)
    assert data.true_probs.shape == (40, 3)
    np.testing.assert_allclose(data.true_probs.sum(axis=1), 1.0, atol=1e-10)
    data2 = gen_example2(25, seed=1)
    assert data2.X.shape == (25, 500)
    assert data2.true_probs.shape == (25, 10)


def test_generation_reproducible():
    a = gen_example2(30, seed=9)
    b = gen_example2(30, seed=9)
    np.testing.assert_array_equal(a.X, b.X)
    np.testing.assert_array_equal(a.y, b.y)
    c = gen_example2(30, seed=10)
    assert not np.array_equal(a.X, c.X)


def test_class_proportions_uniform():
    data = gen_example1(30000, seed=3)
    counts = np.bincount(data.y, minlength=4)[1:]
    expected = 10000.0
    chi_square = float(((counts - expected) ** 2 / expected).sum())
    assert chi_square < 13.8  # 0.999 quantile of chi2 with 2 dof


def test_signal_means_match_layout():
    data = gen_example1(30000, seed=4)
    in_class1 = data.X[data.y == 1]
    observed = in_class1[:, 0].mean()
    tolerance = 3.0 * 2.0 / np.sqrt(len(in_class1))
    assert abs(observed - 3.0) < tolerance
    # a coordinate that is silent for class 1
    observed_silent = in_class1[:, 9].mean()
    assert abs(observed_silent) < tolerance


def test_true_probabilities_dominant_at_mean():
    spec = example1_spec()
    x = np.zeros(spec.p)
    x[:10] = spec.class_means[0] * 3  # far along the class-1 direction
    p = true_probabilities(x, spec)
    assert p.argmax() == 0 and p[0] > 0.99


def test_true_probabilities_symmetric_point():
    spec = example2_spec()
    p = true_probabilities(np.zeros(spec.p), spec)
    np.testing.assert_allclose(p, 0.1, atol=1e-12)


def test_true_probabilities_brute_force_oracle():
    # direct density ratios without log-space tricks
    spec = example1_spec()
    rng = np.random.default_rng(5)
    data = generate(spec, 100, seed=6)
    for i in range(100):
        signal = data.X[i, :10]
        dens = np.array([
            np.prod(np.exp(-0.5 * ((signal - spec.class_means[j]) / 2.0) ** 2))
            for j in range(3)
        ])
        expected = dens / dens.sum()
        np.testing.assert_allclose(data.true_probs[i], expected, atol=1e-10)


def test_noise_columns_exchangeable():
    spec = example2_spec()
    data = generate(spec, 20, seed=7)
    X = data.X.copy()
    rng = np.random.default_rng(8)
    noise = X[:, 2:]
    X_permuted = np.concatenate([X[:, :2], noise[:, rng.permutation(noise.shape[1])]], axis=1)
    np.testing.assert_array_equal(
        true_probability_matrix(X_permuted, spec), true_probability_matrix(X, spec)
    )


def test_true_probability_argmax_matches_bayes_rule():
    spec = example2_spec()
    data = generate(spec, 500, seed=9)
    probs = true_probability_matrix(data.X, spec)
    np.testing.assert_array_equal(probs.argmax(axis=1), data.true_probs.argmax(axis=1))


def test_bayes_error_degenerate_spec():
    means = np.ones((4, 2))
    spec = ExampleSpec(
        example_id="degenerate", k=4, signal_dim=2, noise_dim=0,
        class_means=means, signal_sd=np.ones(2), noise_sd=1.0,
    )
    err, se = bayes_error(spec, n_mc=20000, seed=1)
    assert err == pytest.approx(0.75, abs=0.02)
    assert 0.0 < se < 0.01


def test_bayes_error_reproducible():
    spec = example2_spec()
    a = bayes_error(spec, 5000, seed=2)
    b = bayes_error(spec, 5000, seed=2)
    assert a == b


def test_dimension_validation():
    spec = example1_spec()
    with pytest.raises(ValueError):
        true_probabilities(np.zeros(10), spec)
    with pytest.raises(ValueError):
        generate(spec, 0)
    with pytest.raises(ValueError):
        bayes_error(spec, 0)
