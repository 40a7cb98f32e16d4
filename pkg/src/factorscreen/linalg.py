"""Data conditioning and the thin SVD shared by all screening methods."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._errors import (
    ConvergenceFailure,
    DegenerateSpectrum,
    NonFiniteInput,
    ZeroVarianceColumn,
)

# singular values below this fraction of the largest are numerically null
NULL_SV_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """An ``n x p`` predictor matrix.

    ``standardized`` records whether the columns were centred and scaled to
    unit sample standard deviation by :func:`standardize_columns`.
    """

    values: np.ndarray
    standardized: bool = False

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError(f"design matrix must be 2-D, got shape {values.shape}")
        if values.shape[0] < 2 or values.shape[1] < 1:
            raise ValueError(f"need n >= 2 and p >= 1, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise NonFiniteInput("design matrix contains NaN or inf")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class ResponseVector:
    values: np.ndarray
    centered: bool = False

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise ValueError(f"response must be a non-empty 1-D vector, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise NonFiniteInput("response contains NaN or inf")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class ThinSvd:
    """``X = U @ diag(mu) @ V.T`` with ``U`` n x r, ``V`` p x r, r = min(n, p)."""

    U: np.ndarray
    mu: np.ndarray
    V: np.ndarray

    @property
    def rank_tol(self) -> float:
        return NULL_SV_RTOL * (self.mu[0] if self.mu.size else 0.0)

    @property
    def numerical_rank(self) -> int:
        return int(np.count_nonzero(self.mu > self.rank_tol))


def _as_design(X) -> np.ndarray:
    if isinstance(X, DesignMatrix):
        return X.values
    return np.asarray(X, dtype=float)


def standardize_columns(raw) -> DesignMatrix:
    """Centre each column and scale it to unit sample sd (denominator n-1).

    Raises
    ------
    ZeroVarianceColumn
        If a column's sample sd is below 1e-12.
    NonFiniteInput
        If the input contains NaN or inf.
    """
    X = np.array(_as_design(raw), dtype=float)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {X.shape}")
    if X.shape[0] < 2:
        raise ValueError("standardization needs at least two rows")
    if not np.all(np.isfinite(X)):
        raise NonFiniteInput("design matrix contains NaN or inf")
    X -= X.mean(axis=0)
    sd = X.std(axis=0, ddof=1)
    bad = np.flatnonzero(sd < 1e-12)
    if bad.size:
        raise ZeroVarianceColumn(int(bad[0]), float(sd[bad[0]]))
    X /= sd
    return DesignMatrix(X, standardized=True)


def center_response(raw) -> ResponseVector:
    y = np.array(raw.values if isinstance(raw, ResponseVector) else raw, dtype=float)
    if y.ndim != 1 or y.size < 1:
        raise ValueError(f"response must be a non-empty 1-D vector, got shape {y.shape}")
    if not np.all(np.isfinite(y)):
        raise NonFiniteInput("response contains NaN or inf")
    return ResponseVector(y - y.mean(), centered=True)


def thin_svd(X) -> ThinSvd:
    """Thin SVD with a deterministic sign convention.

    Each column of ``U`` is flipped so that its largest-magnitude entry is
    positive; the matching column of ``V`` is flipped with it.
    """
    A = _as_design(X)
    try:
        U, mu, Vt = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    pivot = np.abs(U).argmax(axis=0)
    signs = np.sign(U[pivot, np.arange(U.shape[1])])
    signs[signs == 0] = 1.0
    U = U * signs
    V = Vt.T * signs
    for arr in (U, mu, V):
        arr.flags.writeable = False
    return ThinSvd(U=U, mu=mu, V=V)


def eigen_ratio_d(mu) -> int:
    """Number of common factors from the largest consecutive ratio of squared
    singular values.

    Trailing values below ``1e-12 * mu[0]`` are dropped first. Ties go to
    the smallest index, so the returned count is as small as possible.

    >>> eigen_ratio_d([10.0, 2.0, 1.0])
    1
    >>> eigen_ratio_d([3.0, 3.0, 1.0])
    2
    """
    mu = np.asarray(mu, dtype=float)
    if mu.ndim != 1 or mu.size < 2:
        raise DegenerateSpectrum("need at least two singular values")
    if np.any(np.diff(mu) > 0):
        raise ValueError("singular values must be nonincreasing")
    usable = mu[mu > NULL_SV_RTOL * mu[0]] if mu[0] > 0 else mu[:0]
    if usable.size < 2:
        raise DegenerateSpectrum(f"only {usable.size} singular values above the null threshold")
    sq = usable**2
    return int(np.argmax(sq[:-1] / sq[1:])) + 1
