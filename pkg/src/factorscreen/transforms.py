"""Profiling transforms for the five screening methods and their scores.

Every transform maps ``(X, y)`` to ``(X_hat, y_hat)`` by left-multiplying
with an ``n x n`` matrix built from the thin SVD ``X = U D V^T``.  None of
them materialise that matrix; projections are applied as skinny products
``U1 @ (U1.T @ A)``.

Besides ``X_hat`` itself, each :class:`ProfiledData` records a factorisation
``X_hat = basis @ diag(scale) @ loadings.T`` with orthonormal ``basis``.  The
subset fitter in :mod:`factorscreen.selection` uses it to avoid touching the
full ``n x p`` matrix.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ._errors import InvalidFactorCount, InvalidK, InvalidTruncation, SingularScale
from .linalg import DesignMatrix, ResponseVector, ThinSvd, thin_svd


class Method(str, enum.Enum):
    SIS = "SIS"
    FPSIS = "FPSIS"
    FPSIS_BIC = "FPSIS_BIC"
    PPIS = "PPIS"
    TPPIS = "TPPIS"

    @classmethod
    def parse(cls, name) -> "Method":
        if isinstance(name, cls):
            return name
        key = str(name).strip().upper().replace("-", "_")
        try:
            return cls[key]
        except KeyError:
            raise ValueError(f"unknown method {name!r}; expected one of "
                             f"{', '.join(m.value.lower().replace('_', '-') for m in cls)}") from None


class PpisVariant(str, enum.Enum):
    #: whiten the retained directions with D2^{-1} (Puffer preconditioning)
    PUFFER_INVERSE = "PufferInverse"
    #: use D2 as printed, giving X_hat = U2 D2^2 V2^T
    LITERAL_D2 = "LiteralD2"


def truncation_index(n: int, alpha: float) -> int:
    """``floor(n * alpha)``, robust to representation error such as 100*0.6."""
    return int(math.floor(n * alpha + 1e-9))


@dataclass(frozen=True)
class ProjectionSpec:
    method: Method
    d: int | None = None
    alpha: float | None = None
    ppis_variant: PpisVariant = PpisVariant.PUFFER_INVERSE

    def __post_init__(self):
        object.__setattr__(self, "method", Method.parse(self.method))
        object.__setattr__(self, "ppis_variant", PpisVariant(self.ppis_variant))
        if self.alpha is not None and not 0.0 < self.alpha <= 1.0:
            raise InvalidTruncation(f"alpha must lie in (0, 1], got {self.alpha}")

    def validate(self, n: int) -> None:
        """Raise if ``d``/``alpha`` are unusable for a sample of size ``n``."""
        if self.method is Method.SIS:
            return
        if self.d is None or not 1 <= self.d <= n - 1:
            raise InvalidFactorCount(f"d must satisfy 1 <= d <= n-1 = {n - 1}, got {self.d}")
        if self.method is Method.TPPIS:
            if self.alpha is None:
                raise InvalidTruncation("TPPIS needs alpha")
            t = truncation_index(n, self.alpha)
            if t <= self.d:
                raise InvalidTruncation(f"need d < floor(n*alpha) = {t}, got d = {self.d}")


@dataclass(frozen=True, eq=False)
class ProfiledData:
    """Transformed response and design, ``(Q y, Q X)``.

    ``X_hat`` is built on first access; everything else in the package works
    from the factorisation ``basis @ diag(scale) @ loadings.T``.
    """

    y_hat: np.ndarray
    spec: ProjectionSpec
    basis: np.ndarray
    scale: np.ndarray
    loadings: np.ndarray
    _builder: object = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def X_hat(self) -> np.ndarray:
        if "X_hat" not in self._cache:
            if self._builder is not None:
                Xh = self._builder()
            else:
                Xh = (self.basis * self.scale) @ self.loadings.T
            Xh.flags.writeable = False
            self._cache["X_hat"] = Xh
        return self._cache["X_hat"]

    @property
    def n(self) -> int:
        return self.y_hat.shape[0]

    @property
    def p(self) -> int:
        return self.loadings.shape[0]

    @property
    def rank(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True, eq=False)
class ImportanceScores:
    """Scores ``omega = X_hat.T @ y_hat`` and the 0-based ranking by ``|omega|``."""

    omega: np.ndarray
    ranking: np.ndarray


def _arrays(X, y):
    Xv = X.values if isinstance(X, DesignMatrix) else np.asarray(X, dtype=float)
    yv = y.values if isinstance(y, ResponseVector) else np.asarray(y, dtype=float)
    if Xv.shape[0] != yv.shape[0]:
        raise ValueError(f"X has {Xv.shape[0]} rows but y has {yv.shape[0]} entries")
    return Xv, yv


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


def _remove_factors(U1, a):
    """Apply ``I - U1 U1^T`` to a vector or matrix without forming it."""
    return a - U1 @ (U1.T @ a)


def profile_sis(X, y) -> ProfiledData:
    """Identity transform: SIS screens on the raw standardized data."""
    Xv, yv = _arrays(X, y)
    n = Xv.shape[0]
    return ProfiledData(
        y_hat=_frozen(yv),
        spec=ProjectionSpec(Method.SIS),
        basis=np.eye(n),
        scale=np.ones(n),
        loadings=Xv.T,
        _builder=lambda: np.array(Xv),
    )


def profile_fpsis(X, y, d: int, svd: ThinSvd | None = None,
                  method: Method = Method.FPSIS) -> ProfiledData:
    """Project out the first ``d`` left singular vectors."""
    Xv, yv = _arrays(X, y)
    spec = ProjectionSpec(method, d=d)
    spec.validate(Xv.shape[0])
    svd = svd if svd is not None else thin_svd(Xv)
    U1 = svd.U[:, :d]
    r = max(svd.numerical_rank, d)
    return ProfiledData(
        y_hat=_frozen(_remove_factors(U1, yv)),
        spec=spec,
        basis=svd.U[:, d:r],
        scale=svd.mu[d:r],
        loadings=svd.V[:, d:r],
        _builder=lambda: _remove_factors(U1, Xv),
    )


def _preconditioned(Xv, yv, svd, d, stop, spec):
    U1 = svd.U[:, :d]
    # numerically null directions carry no signal and cannot be inverted
    stop = min(stop, svd.numerical_rank)
    if stop <= d:
        raise SingularScale(
            f"no non-null singular directions left after removing d = {d} factors")
    U2 = svd.U[:, d:stop]
    mu2 = svd.mu[d:stop]
    V2 = svd.V[:, d:stop]
    if spec.ppis_variant is PpisVariant.PUFFER_INVERSE:
        weight, scale = 1.0 / mu2, np.ones_like(mu2)
    else:
        weight, scale = mu2, mu2**2

    def apply(a):
        a = _remove_factors(U1, a)
        coef = U2.T @ a
        coef = coef * (weight if coef.ndim == 1 else weight[:, None])
        return U2 @ coef

    return ProfiledData(
        y_hat=_frozen(apply(yv)),
        spec=spec,
        basis=U2,
        scale=_frozen(scale),
        loadings=V2,
        _builder=lambda: apply(Xv),
    )


def profile_ppis(X, y, d: int, variant=PpisVariant.PUFFER_INVERSE,
                 svd: ThinSvd | None = None) -> ProfiledData:
    """Remove ``d`` factors, then rescale the remaining directions by ``D2^-1``
    (or ``D2`` for ``LiteralD2``)."""
    Xv, yv = _arrays(X, y)
    spec = ProjectionSpec(Method.PPIS, d=d, ppis_variant=variant)
    spec.validate(Xv.shape[0])
    svd = svd if svd is not None else thin_svd(Xv)
    return _preconditioned(Xv, yv, svd, d, svd.U.shape[1], spec)


def profile_tppis(X, y, d: int, alpha: float, svd: ThinSvd | None = None,
                  variant=PpisVariant.PUFFER_INVERSE) -> ProfiledData:
    """Like :func:`profile_ppis` but keep only directions ``d+1 .. floor(n*alpha)``.

    With ``alpha = 1`` this runs exactly the same computation as PPIS.
    """
    Xv, yv = _arrays(X, y)
    n = Xv.shape[0]
    spec = ProjectionSpec(Method.TPPIS, d=d, alpha=alpha, ppis_variant=variant)
    spec.validate(n)
    svd = svd if svd is not None else thin_svd(Xv)
    return _preconditioned(Xv, yv, svd, d, truncation_index(n, alpha), spec)


def rank_by_magnitude(omega) -> np.ndarray:
    """Indices sorted by decreasing ``|omega|``; ties keep ascending index."""
    return np.argsort(-np.abs(omega), kind="stable")


def importance_scores(pd: ProfiledData) -> ImportanceScores:
    omega = pd.loadings @ (pd.scale * (pd.basis.T @ pd.y_hat))
    return ImportanceScores(omega=_frozen(omega), ranking=_frozen(rank_by_magnitude(omega)))


def select_top_k(scores: ImportanceScores, k: int) -> np.ndarray:
    """First ``k`` entries of the ranking (0-based column indices)."""
    p = scores.ranking.shape[0]
    if not 1 <= k <= p:
        raise InvalidK(f"k must satisfy 1 <= k <= p = {p}, got {k}")
    return scores.ranking[:k].copy()
