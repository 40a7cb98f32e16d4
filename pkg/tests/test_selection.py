import itertools
import math

import numpy as np
import pytest

from conftest import standardized_pair
from factorscreen._errors import DegenerateFit, EmptySubset, EmptyValidGrid, InvalidK
from factorscreen.linalg import center_response, standardize_columns
from factorscreen.selection import (bic_penalty, bic_score, default_d_grid, fit_subset_ols,
                                    grid_search, nested_fits, select_k)
from factorscreen.simulate import gen_example1
from factorscreen.transforms import (ImportanceScores, Method, importance_scores, profile_fpsis,
                                     profile_ppis, profile_sis, profile_tppis, truncation_index)


def brute_bic(y, X, Xh, yh, subset):
    """BIC of ``subset`` with coefficients from a plain lstsq on the profiled data."""
    beta = np.linalg.lstsq(Xh[:, subset], yh, rcond=None)[0]
    r = y - X[:, subset] @ beta
    n, p = X.shape
    return math.log(r @ r) + math.log(p) / n * len(subset) * math.log(n)


def test_fit_orthonormal_columns(rng):
    Q = np.linalg.qr(rng.standard_normal((12, 3)))[0]
    yh = rng.standard_normal(12)
    pd = profile_sis(Q, yh)
    fit = fit_subset_ols(pd, [0, 1, 2])
    np.testing.assert_allclose(fit.beta, Q.T @ yh, atol=1e-12)
    assert not fit.rank_deficient


def test_fit_recovers_noiseless_beta(rng):
    X = rng.standard_normal((15, 6))
    beta = np.array([1.0, -2.0, 0.5])
    pd = profile_sis(X, X[:, [0, 2, 4]] @ beta)
    np.testing.assert_allclose(fit_subset_ols(pd, [0, 2, 4]).beta, beta, atol=1e-8)


def test_fit_duplicate_column_is_flagged(rng):
    x = rng.standard_normal(10)
    X = np.column_stack([x, x, rng.standard_normal(10)])
    y = 2 * x
    fit = fit_subset_ols(profile_sis(X, y), [0, 1])
    assert fit.rank_deficient
    np.testing.assert_allclose(fit.beta, [1.0, 1.0], atol=1e-8)


def test_fit_empty_subset(small_pair):
    with pytest.raises(EmptySubset):
        fit_subset_ols(profile_sis(*small_pair), [])


def test_bic_hand_value():
    n, p = 100, 1000
    X = np.zeros((n, p))
    y = np.zeros(n)
    y[0] = math.exp(2.0)  # ||y||^2 = e^4, beta = 0
    assert bic_score(y, X, [0, 1, 2, 3], np.zeros(4)) == pytest.approx(5.27245, abs=1e-5)


def test_bic_empty_model_and_zero_coefficient(small_pair):
    X, y = small_pair
    assert bic_score(y, X, [], []) == pytest.approx(math.log(y.values @ y.values))
    b1 = bic_score(y, X, [0], [0.7])
    b2 = bic_score(y, X, [0, 5], [0.7, 0.0])
    assert b2 - b1 == pytest.approx(bic_penalty(X.n, X.p, 1), abs=1e-12)


def test_bic_degenerate():
    X = np.eye(3)
    with pytest.raises(DegenerateFit):
        bic_score(np.array([1.0, 2.0, 3.0]), X, [0, 1, 2], [1.0, 2.0, 3.0])


PROFILERS = {
    "sis": lambda X, y: profile_sis(X, y),
    "fpsis": lambda X, y: profile_fpsis(X, y, 2),
    "ppis": lambda X, y: profile_ppis(X, y, 2),
    "tppis": lambda X, y: profile_tppis(X, y, 1, 0.6),
}


@pytest.mark.parametrize("name", PROFILERS)
def test_select_k_matches_recomputation(small_pair, name):
    X, y = small_pair
    pd = PROFILERS[name](X, y)
    sc = importance_scores(pd)
    model = select_k(pd, sc, y, X)
    K = X.n - 2
    path = [brute_bic(y.values, X.values, pd.X_hat, pd.y_hat, sc.ranking[:k])
            for k in range(1, K + 1)]
    np.testing.assert_allclose(model.bic_path, path, atol=1e-10)
    best = int(np.argmin(path))
    assert model.k == best + 1
    assert model.bic == pytest.approx(path[best], abs=1e-10)
    beta = fit_subset_ols(pd, sc.ranking[: best + 1]).beta
    np.testing.assert_allclose(model.beta_hat, beta, atol=1e-8)
    # BIC decomposes into log RSS plus the size penalty
    r = y.values - X.values[:, model.indices] @ model.beta_hat
    assert model.bic - math.log(r @ r) == pytest.approx(bic_penalty(X.n, X.p, model.k), abs=1e-10)


def test_nested_fits_rank_deficient_matches_min_norm(rng):
    # 4 profiled directions, so subsets larger than 4 are wide
    X, y = standardized_pair(rng, 8, 20)
    pd = profile_tppis(X, y, 1, 0.625)
    order = importance_scores(pd).ranking[:6]
    B, deficient = nested_fits(pd, order)
    for k in range(1, 7):
        ref = np.linalg.lstsq(pd.X_hat[:, order[:k]], pd.y_hat, rcond=1e-5)[0]
        fit_r = pd.X_hat[:, order[:k]] @ B[:k, k - 1]
        np.testing.assert_allclose(fit_r, pd.X_hat[:, order[:k]] @ ref, atol=1e-10)
        if deficient[k - 1]:
            np.testing.assert_allclose(B[:k, k - 1], ref, atol=1e-8)
    assert deficient[4:].all()


def test_select_k_single_candidate(small_pair):
    X, y = small_pair
    pd = profile_sis(X, y)
    model = select_k(pd, importance_scores(pd), y, X, k_max=1)
    assert model.k == 1
    with pytest.raises(InvalidK):
        select_k(pd, importance_scores(pd), y, X, k_max=0)


def test_select_k_invariant_outside_top(small_pair, rng):
    X, y = small_pair
    pd = profile_sis(X, y)
    sc = importance_scores(pd)
    m1 = select_k(pd, sc, y, X, k_max=5)
    tail = sc.ranking[5:]
    perm = np.arange(X.p)
    perm[tail] = rng.permutation(tail)
    Xp = X.values[:, perm]
    pd2 = profile_sis(Xp, y)
    m2 = select_k(pd2, importance_scores(pd2), y, Xp, k_max=5)
    np.testing.assert_array_equal(perm[m2.indices], m1.indices)
    assert m2.bic == m1.bic


def test_select_k_finds_true_size_with_oracle_ranking():
    hits = 0
    for r in range(100):
        ds = gen_example1(100, 200, 0.5, seed=11, replicate=r)
        X, y = standardize_columns(ds.X_raw), center_response(ds.y_raw)
        pd = profile_sis(X, y)
        omega = importance_scores(pd).omega.copy()
        omega[:4] = np.abs(omega).max() + 1 + np.arange(4, 0, -1)
        sc = ImportanceScores(omega, np.argsort(-np.abs(omega), kind="stable"))
        hits += select_k(pd, sc, y, X, k_max=20).k == 4
    assert hits >= 90


def test_default_d_grid():
    assert default_d_grid(100) == [20, 40, 60, 80, 99]
    assert set(default_d_grid(3)) <= {1, 2}


def exhaustive_grid(method, X, y, ds, alphas):
    best = None
    n = X.n
    for d, a in itertools.product(ds, alphas):
        if a is not None and d >= truncation_index(n, a):
            continue
        pd = profile_tppis(X, y, d, a) if a is not None else profile_fpsis(X, y, d)
        sc = importance_scores(pd)
        for k in range(1, n - 1):
            b = brute_bic(y.values, X.values, pd.X_hat, pd.y_hat, sc.ranking[:k])
            key = (b, d, a if a is not None else -1.0, k)
            if best is None or key < best:
                best = key
    return best


def test_grid_search_tppis_matches_exhaustive(small_pair):
    X, y = small_pair
    res = grid_search(Method.TPPIS, X, y, d_grid=[1, 3], alpha_grid=[0.6, 1.0],
                      include_eigen_ratio=False)
    b, d, a, k = exhaustive_grid(Method.TPPIS, X, y, [1, 3], [0.6, 1.0])
    assert (res.best_d, res.best_alpha, res.best_k) == (d, a, k)
    assert res.best_bic == pytest.approx(b, abs=1e-10)
    assert res.best_bic == min(t[3] for t in res.trace)
    assert {(t[0], t[1]) for t in res.trace} == {(1, 0.6), (1, 1.0), (3, 0.6), (3, 1.0)}


def test_grid_search_fpsis_bic_matches_exhaustive(small_pair):
    X, y = small_pair
    res = grid_search(Method.FPSIS_BIC, X, y, d_grid=[1, 2, 4], include_eigen_ratio=False)
    b, d, _, k = exhaustive_grid(Method.FPSIS_BIC, X, y, [1, 2, 4], [None])
    assert (res.best_d, res.best_k) == (d, k)
    assert res.best_alpha is None
    assert res.best_bic == pytest.approx(b, abs=1e-10)


def test_grid_search_skips_invalid_cells(small_pair):
    X, y = small_pair
    n = X.n
    res = grid_search(Method.TPPIS, X, y, d_grid=[2, 7], alpha_grid=[0.2, 0.6],
                      include_eigen_ratio=False)
    assert {(t[0], t[1]) for t in res.trace} == {(2, 0.6)}
    with pytest.raises(EmptyValidGrid):
        grid_search(Method.TPPIS, X, y, d_grid=[n], include_eigen_ratio=False)


def test_grid_search_single_combo(small_pair):
    X, y = small_pair
    res = grid_search(Method.TPPIS, X, y, d_grid=[2], alpha_grid=[1.0], include_eigen_ratio=False)
    assert (res.best_d, res.best_alpha) == (2, 1.0)


def test_grid_search_sis_and_eigen_ratio_methods(small_pair):
    X, y = small_pair
    sis = grid_search("sis", X, y, d_grid=[3], alpha_grid=[0.4])
    assert sis.best_d is None and sis.best_alpha is None
    fp = grid_search("fpsis", X, y, d_grid=[5])
    from factorscreen.linalg import eigen_ratio_d, thin_svd
    assert fp.best_d == eigen_ratio_d(thin_svd(X).mu)


def test_profiled_residual_option(rng):
    X, y = standardized_pair(rng, 30, 60)
    pd = profile_ppis(X, y, 2)
    sc = importance_scores(pd)
    model = select_k(pd, sc, y, X, k_max=5, residual="profiled")
    r = pd.y_hat - pd.X_hat[:, model.indices] @ model.beta_hat
    assert model.bic == pytest.approx(math.log(r @ r) + bic_penalty(X.n, X.p, model.k), abs=1e-10)
    with pytest.raises(ValueError):
        select_k(pd, sc, y, X, residual="bogus")
