import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from factorscreen._errors import DegenerateSpectrum, NonFiniteInput, ZeroVarianceColumn
from factorscreen.linalg import (DesignMatrix, center_response, eigen_ratio_d,
                                 standardize_columns, thin_svd)


def test_standardize_hand_example():
    X = standardize_columns(np.array([[1.0, 4.0], [2.0, 0.0], [3.0, 2.0]]))
    np.testing.assert_allclose(X.values[:, 0], [-1.0, 0.0, 1.0])
    assert X.standardized


def test_standardize_constant_column_names_it():
    with pytest.raises(ZeroVarianceColumn) as err:
        standardize_columns(np.array([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]]))
    assert err.value.column == 1


def test_standardize_rejects_nan():
    with pytest.raises(NonFiniteInput):
        standardize_columns(np.array([[1.0, np.nan], [2.0, 1.0]]))


def test_standardize_moments_and_idempotence(rng):
    raw = rng.normal(3.0, 7.0, size=(25, 40))
    X = standardize_columns(raw)
    assert np.abs(X.values.mean(axis=0)).max() <= 1e-10
    assert np.abs(X.values.std(axis=0, ddof=1) - 1).max() <= 1e-8
    np.testing.assert_allclose(standardize_columns(X.values).values, X.values, atol=1e-12)


def test_design_matrix_is_read_only(rng):
    X = DesignMatrix(rng.standard_normal((3, 4)))
    with pytest.raises(ValueError):
        X.values[0, 0] = 1.0


def test_center_response():
    np.testing.assert_array_equal(center_response([1.0, 2.0, 3.0]).values, [-1.0, 0.0, 1.0])
    np.testing.assert_array_equal(center_response([0.0, 0.0]).values, [0.0, 0.0])


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=50))
def test_center_response_mean_zero(v):
    out = center_response(v).values
    assert abs(out.mean()) <= 1e-12 * max(1.0, np.abs(v).max())


def test_svd_diagonal():
    s = thin_svd(np.array([[2.0, 0.0], [0.0, 1.0]]))
    np.testing.assert_allclose(s.mu, [2.0, 1.0])
    np.testing.assert_allclose(np.abs(s.U), np.eye(2))
    np.testing.assert_allclose(np.abs(s.V), np.eye(2))


def test_svd_rank_one(rng):
    u = rng.standard_normal(6)
    v = rng.standard_normal(9)
    u, v = u / np.linalg.norm(u), v / np.linalg.norm(v)
    s = thin_svd(3.0 * np.outer(u, v))
    assert s.mu[0] == pytest.approx(3.0)
    assert s.mu[1] < 1e-12
    assert s.numerical_rank == 1


def test_svd_invariants_and_sign_convention(rng):
    X = rng.standard_normal((20, 50))
    s = thin_svd(X)
    np.testing.assert_allclose(s.U.T @ s.U, np.eye(20), atol=1e-10)
    np.testing.assert_allclose(s.V.T @ s.V, np.eye(20), atol=1e-10)
    assert np.all(np.diff(s.mu) <= 0)
    assert np.linalg.norm(s.U * s.mu @ s.V.T - X) <= 1e-10 * np.linalg.norm(X)
    big = s.U[np.abs(s.U).argmax(axis=0), np.arange(20)]
    assert np.all(big > 0)
    # deterministic under a sign flip of the input
    s2 = thin_svd(-X)
    np.testing.assert_allclose(s2.U, s.U, atol=1e-10)


@pytest.mark.parametrize("mu, d", [((10, 2, 1), 1), ((3, 3, 1), 2), ((1, 1, 1), 1)])
def test_eigen_ratio_hand_values(mu, d):
    assert eigen_ratio_d(np.array(mu, dtype=float)) == d


def test_eigen_ratio_skips_null_tail():
    # the trailing zero would give an infinite ratio at l = 3
    assert eigen_ratio_d(np.array([10.0, 2.0, 1.0, 0.0])) == 1


def test_eigen_ratio_degenerate():
    with pytest.raises(DegenerateSpectrum):
        eigen_ratio_d(np.array([1.0, 0.0]))


@settings(max_examples=60)
@given(st.lists(st.floats(1e-3, 1e3), min_size=2, max_size=12), st.floats(1e-3, 1e3))
def test_eigen_ratio_scale_invariant(vals, c):
    mu = np.sort(np.array(vals))[::-1]
    assert eigen_ratio_d(c * mu) == eigen_ratio_d(mu)
