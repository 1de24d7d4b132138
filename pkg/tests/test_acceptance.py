"""Acceptance suite: one printed pass/fail line per criterion.

Run `pytest tests/test_acceptance.py -v -s` to watch the lines as they
complete. The benchmark criteria replicate the evaluation protocols at desk
scale and dominate the runtime (a few minutes total).
"""

import time
from pathlib import Path

import numpy as np
import pytest

from anglekit.cli import main, mean_metric, run_real_bench, run_simulated_bench
from anglekit.dataio import load_csv
from anglekit.datagen import bayes_error, example1_spec, example2_spec, generate
from anglekit.datasets import LabeledDataset
from anglekit.linear_model import FitConfig, fit, objective, penalty_value, smooth_gradient
from anglekit.losses import get_loss
from anglekit.probability import binary_probability, class_probabilities, probability_matrix
from anglekit.simplex import simplex_vertices, vertex_scores
from anglekit.tuning import lambda_grid

WINE = Path(__file__).resolve().parent.parent / "data" / "wine.csv"


def report(number, name, ok, elapsed, budget, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" [{detail}]" if detail else ""
    print(f"criterion {number:02d} {name}: {status} ({elapsed:.1f}s){suffix}")
    assert ok, f"criterion {number} {name} failed{suffix}"
    assert elapsed < budget, f"criterion {number} exceeded its {budget}s budget ({elapsed:.1f}s)"


def test_criterion_01_simplex_geometry():
    start = time.perf_counter()
    ok = True
    for k in range(2, 21):
        V = simplex_vertices(k).vertices
        gram = V @ V.T
        ok &= np.abs(np.linalg.norm(V, axis=1) - 1.0).max() < 1e-10
        ok &= np.abs(gram[~np.eye(k, dtype=bool)] + 1.0 / (k - 1)).max() < 1e-10
        ok &= np.abs(V.sum(axis=0)).max() < 1e-10
        ok &= np.abs(V.T @ V - k / (k - 1) * np.eye(k - 1)).max() < 1e-10
    report(1, "simplex geometry", bool(ok), time.perf_counter() - start, 1.0)


def test_criterion_02_reconstruction_round_trip():
    start = time.perf_counter()
    rng = np.random.default_rng(2002)
    worst = 0.0
    for k in (2, 3, 5, 10):
        V = simplex_vertices(k).vertices
        F = rng.standard_normal((1000, k - 1)) * 5.0
        R = ((k - 1) / k) * ((F @ V.T) @ V)
        worst = max(worst, float(np.abs(R - F).max()))
    report(2, "round trip", worst < 1e-10, time.perf_counter() - start, 1.0,
           f"max err {worst:.2e}")


def test_criterion_03_gradient_correctness():
    start = time.perf_counter()
    rng = np.random.default_rng(2003)
    worst = 0.0
    for trial in range(50):
        n = int(rng.integers(10, 31))
        p = int(rng.integers(2, 9))
        k = int(rng.integers(2, 5))
        loss_id = ("logistic", "soft")[trial % 2]
        penalty = ("l1", "l2")[(trial // 2) % 2]
        code = simplex_vertices(k)
        data = LabeledDataset(X=rng.standard_normal((n, p)), y=rng.integers(1, k + 1, n))
        cfg = FitConfig(loss_id=loss_id, penalty=penalty, lambda_=0.0)
        B = 0.5 * rng.standard_normal((p, k - 1))
        b0 = 0.5 * rng.standard_normal(k - 1)
        gB, gb0 = smooth_gradient(B, b0, data, cfg, code)
        h = 1e-5
        fB = np.zeros_like(B)
        for i in range(p):
            for j in range(k - 1):
                up, dn = B.copy(), B.copy()
                up[i, j] += h
                dn[i, j] -= h
                fB[i, j] = (objective(up, b0, data, cfg, code)
                            - objective(dn, b0, data, cfg, code)) / (2 * h)
        fb0 = np.zeros_like(b0)
        for j in range(k - 1):
            up, dn = b0.copy(), b0.copy()
            up[j] += h
            dn[j] -= h
            fb0[j] = (objective(B, up, data, cfg, code)
                      - objective(B, dn, data, cfg, code)) / (2 * h)
        scale = max(np.abs(fB).max(), np.abs(fb0).max(), 1e-8)
        worst = max(worst, np.abs(gB - fB).max() / scale, np.abs(gb0 - fb0).max() / scale)
    report(3, "gradient correctness", worst < 1e-5, time.perf_counter() - start, 10.0,
           f"max rel err {worst:.2e}")


def test_criterion_04_norm_bound_across_grid():
    start = time.perf_counter()
    train = generate(example1_spec(), 300, seed=400)
    code = simplex_vertices(3)
    ok = True
    worst = -np.inf
    for loss_id in ("logistic", "soft"):
        at_zero = get_loss(loss_id).at_zero()
        for penalty in ("l1", "l2"):
            for lam in lambda_grid():
                cfg = FitConfig(loss_id=loss_id, penalty=penalty, lambda_=float(lam),
                                standardize=False)
                model = fit(train, cfg, code)
                slack = lam * penalty_value(model.B, penalty) - at_zero
                worst = max(worst, slack)
                ok &= slack <= 1e-6
    report(4, "norm bound over grid", bool(ok), time.perf_counter() - start, 300.0,
           f"max lambda*J - loss(0) = {worst:.2e}")


def test_criterion_05_shrinkage_to_uniform():
    start = time.perf_counter()
    train = generate(example1_spec(), 300, seed=500)
    test = generate(example1_spec(), 300, seed=501)
    code = simplex_vertices(3)
    worst = 0.0
    for loss_id in ("logistic", "soft"):
        cfg = FitConfig(loss_id=loss_id, penalty="l2", lambda_=2.0**10, standardize=False)
        model = fit(train, cfg, code)
        scores = model.decision_values(test.X) @ code.vertices.T
        probs = probability_matrix(scores, get_loss(loss_id))
        worst = max(worst, float(np.abs(probs - 1.0 / 3.0).max()))
    report(5, "shrinkage to 1/k", worst < 0.05, time.perf_counter() - start, 60.0,
           f"max |P - 1/3| = {worst:.4f}")


def test_criterion_06_binary_consistency():
    start = time.perf_counter()
    rng = np.random.default_rng(2006)
    logistic = get_loss("logistic")
    code = simplex_vertices(2)
    worst_sigmoid = worst_path = 0.0
    for f in rng.uniform(-20, 20, 1000):
        direct = binary_probability(f, logistic)
        worst_sigmoid = max(worst_sigmoid, abs(direct - 1.0 / (1.0 + np.exp(-f))))
        via_k2 = class_probabilities(vertex_scores(np.array([f]), code), logistic)[0]
        worst_path = max(worst_path, abs(direct - via_k2))
    ok = worst_sigmoid < 1e-12 and worst_path < 1e-12
    report(6, "binary consistency", ok, time.perf_counter() - start, 10.0,
           f"sigmoid gap {worst_sigmoid:.1e}, k=2 path gap {worst_path:.1e}")


def test_criterion_07_bayes_error_calibration():
    start = time.perf_counter()
    err1, se1 = bayes_error(example1_spec(), 100_000, seed=700)
    err2, se2 = bayes_error(example2_spec(), 100_000, seed=701)
    ok = abs(100.0 * err1 - 5.51) <= 0.5 and abs(100.0 * err2 - 35.0) <= 1.0
    report(7, "Bayes error calibration", ok, time.perf_counter() - start, 120.0,
           f"ex1 {100 * err1:.2f} (target 5.51 +- 0.5), ex2 {100 * err2:.2f} (target 35.0 +- 1.0)")


def test_criterion_08_example1_refit_direction():
    start = time.perf_counter()
    rows = run_simulated_bench("ex1", ["soft", "logistic"], "l2",
                               n_train=300, n_tune=300, n_test=3000,
                               replicates=3, seed=800)
    ok = True
    details = []
    for loss_id in ("soft", "logistic"):
        mad_orig = mean_metric(rows, loss_id, "mad")
        mad_refit = mean_metric(rows, f"refit_{loss_id}", "mad")
        err_orig = mean_metric(rows, loss_id, "error")
        err_refit = mean_metric(rows, f"refit_{loss_id}", "error")
        ok &= mad_refit <= 0.5 * mad_orig
        ok &= err_refit <= err_orig + 0.04
        details.append(f"{loss_id}: mad {100 * mad_orig:.1f}->{100 * mad_refit:.1f}, "
                       f"err {100 * err_orig:.1f}->{100 * err_refit:.1f}")
    report(8, "example 1 refit direction", bool(ok), time.perf_counter() - start, 900.0,
           "; ".join(details))


def test_criterion_09_example2_refit_direction():
    start = time.perf_counter()
    rows = run_simulated_bench("ex2", ["soft"], "l2",
                               n_train=300, n_tune=300, n_test=3000,
                               replicates=2, seed=900)
    mad_orig = mean_metric(rows, "soft", "mad")
    mad_refit = mean_metric(rows, "refit_soft", "mad")
    report(9, "example 2 refit direction", mad_refit < mad_orig,
           time.perf_counter() - start, 1200.0,
           f"mad {100 * mad_orig:.1f} -> {100 * mad_refit:.1f}")


@pytest.mark.skipif(not WINE.exists(), reason="data/wine.csv not present")
def test_criterion_10_wine_refit_direction():
    start = time.perf_counter()
    wine = load_csv(WINE, label_column="class")
    rows = run_real_bench(wine, ["soft", "logistic"], "l2",
                          replicates=10, folds=4, seed=1000)
    ok = True
    details = []
    for loss_id in ("soft", "logistic"):
        cre_orig = mean_metric(rows, loss_id, "cre")
        cre_refit = mean_metric(rows, f"refit_{loss_id}", "cre")
        ok &= cre_refit < cre_orig
        details.append(f"{loss_id}: cre {100 * cre_orig:.2f}->{100 * cre_refit:.2f}")
    report(10, "Wine refit direction", bool(ok), time.perf_counter() - start, 600.0,
           "; ".join(details))


def test_criterion_11_probability_properties():
    start = time.perf_counter()
    rng = np.random.default_rng(1100)
    ok = True
    for loss_id in ("logistic", "soft"):
        loss = get_loss(loss_id)
        for k in (2, 3, 5, 10):
            U = rng.uniform(-10, 10, size=(2500, k))
            P = probability_matrix(U, loss)
            ok &= bool(np.all(P > 0.0) and np.all(P < 1.0))
            ok &= bool(np.abs(P.sum(axis=1) - 1.0).max() < 1e-10)
            perm = rng.permutation(k)
            ok &= bool(np.abs(probability_matrix(U[:, perm], loss) - P[:, perm]).max() < 1e-12)
            bumped = U.copy()
            j = int(rng.integers(k))
            bumped[:, j] += 0.5
            ok &= bool(np.all(probability_matrix(bumped, loss)[:, j] >= P[:, j] - 1e-12))
    report(11, "probability properties", bool(ok), time.perf_counter() - start, 60.0)


def test_criterion_12_bench_determinism(tmp_path):
    start = time.perf_counter()
    args = ["bench", "--example", "ex2", "--train", "30", "--tune", "30", "--test", "40",
            "--losses", "soft", "--replicates", "2", "--seed", "12"]
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    identical = a.read_bytes() == b.read_bytes()
    report(12, "bench determinism", identical, time.perf_counter() - start, 300.0)
