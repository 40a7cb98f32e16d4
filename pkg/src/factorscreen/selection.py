"""Subset least squares, the high-dimensional BIC and the (d, alpha, k) search."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

import numpy as np
from scipy import linalg as sla

from ._errors import DegenerateFit, EmptySubset, EmptyValidGrid, InvalidK, ScreeningError
from .linalg import DesignMatrix, ResponseVector, ThinSvd, eigen_ratio_d, thin_svd
from .transforms import (
    ImportanceScores,
    Method,
    PpisVariant,
    ProfiledData,
    importance_scores,
    profile_fpsis,
    profile_ppis,
    profile_sis,
    profile_tppis,
    truncation_index,
)

#: Gram matrices whose eigenvalue ratio falls below this are rank deficient
GRAM_RTOL = 1e-10
#: the same cut expressed on singular values of the subset design
SV_RTOL = math.sqrt(GRAM_RTOL)
RSS_FLOOR = 1e-300

DEFAULT_D_FRACTIONS = (0.2, 0.4, 0.6, 0.8, 1.0)
DEFAULT_ALPHA_GRID = (0.2, 0.4, 0.6, 0.8, 1.0)


class SubsetFit(NamedTuple):
    beta: np.ndarray
    rank_deficient: bool


@dataclass(frozen=True, eq=False)
class SubsetModel:
    """BIC-optimal nested subset for one profiled dataset.

    ``indices`` are 0-based columns in ranking order.  ``bic_path[k-1]`` holds
    the criterion for the top-``k`` set, NaN where the fit was degenerate.
    """

    indices: np.ndarray
    beta_hat: np.ndarray
    bic: float
    rank_deficient: bool = False
    bic_path: np.ndarray = field(default=None, repr=False)

    @property
    def k(self) -> int:
        return int(self.indices.shape[0])


class GridCell(NamedTuple):
    d: int | None
    alpha: float | None
    model: SubsetModel
    scores: ImportanceScores


@dataclass(frozen=True, eq=False)
class GridSearchResult:
    method: Method
    best_d: int | None
    best_alpha: float | None
    best_k: int
    best_bic: float
    best_model: SubsetModel
    best_scores: ImportanceScores
    cells: list = field(repr=False)

    @property
    def selected(self) -> np.ndarray:
        return self.best_model.indices

    @property
    def trace(self) -> list:
        """Every evaluated ``(d, alpha, k, bic)``, skipping degenerate fits."""
        return list(self.iter_trace())

    def iter_trace(self) -> Iterator[tuple]:
        for cell in self.cells:
            for k, bic in enumerate(cell.model.bic_path, start=1):
                if np.isfinite(bic):
                    yield (cell.d, cell.alpha, k, float(bic))


def _values(a):
    if isinstance(a, (DesignMatrix, ResponseVector)):
        return a.values
    return np.asarray(a, dtype=float)


def _min_norm_lstsq(A, b):
    return np.linalg.lstsq(A, b, rcond=SV_RTOL)[0]


def _gram_ok(G) -> bool:
    ev = np.linalg.eigvalsh(G)
    return ev[-1] > 0 and ev[0] > GRAM_RTOL * ev[-1]


def fit_subset_ols(pd: ProfiledData, subset) -> SubsetFit:
    """Least squares of ``y_hat`` on the columns ``subset`` of ``X_hat``.

    Falls back to the minimum-norm solution, with ``rank_deficient=True``,
    when the Gram matrix has eigenvalue ratio below ``1e-10``.
    """
    subset = np.asarray(subset, dtype=int)
    if subset.size == 0:
        raise EmptySubset("cannot fit an empty subset")
    Xm = pd.X_hat[:, subset]
    G = Xm.T @ Xm
    if _gram_ok(G):
        return SubsetFit(sla.solve(G, Xm.T @ pd.y_hat, assume_a="pos"), False)
    return SubsetFit(_min_norm_lstsq(Xm, pd.y_hat), True)


def bic_penalty(n: int, p: int, size: int) -> float:
    return (math.log(p) / n) * size * math.log(n)


def bic_from_rss(rss: float, n: int, p: int, size: int) -> float:
    if not rss >= RSS_FLOOR:
        raise DegenerateFit(f"residual sum of squares {rss:.3g} is numerically zero")
    return math.log(rss) + bic_penalty(n, p, size)


def bic_score(y, X, subset, beta_hat) -> float:
    """``log ||y - X[:, subset] @ beta_hat||^2 + (log p / n) |subset| log n``.

    ``y`` and ``X`` are the data the residual is measured on; pass the
    untransformed standardized data for the usual criterion.
    """
    yv, Xv = _values(y), _values(X)
    n, p = Xv.shape
    subset = np.asarray(subset, dtype=int)
    resid = yv - Xv[:, subset] @ np.asarray(beta_hat, dtype=float) if subset.size else yv
    return bic_from_rss(float(resid @ resid), n, p, int(subset.size))


def _cond_ok(diag_abs, exact) -> bool:
    """Rank test on a triangular factor.

    ``min|diag| / max|diag|`` never underestimates the true singular value
    ratio, so a small proxy is conclusive; a moderate one is confirmed by the
    exact computation.
    """
    hi = diag_abs.max()
    if hi == 0:
        return False
    ratio = diag_abs.min() / hi
    if ratio <= SV_RTOL:
        return False
    if ratio < 1e-2:
        sv = exact()
        return sv[0] > 0 and sv[-1] > SV_RTOL * sv[0]
    return True


def nested_fits(pd: ProfiledData, order) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients for every prefix ``order[:k]``, k = 1..len(order).

    Returns a ``K x K`` matrix whose column ``k-1`` holds the top-``k``
    coefficients (zero padded) and a boolean rank-deficiency flag per ``k``.
    Works on the factorised design ``X_hat[:, M] = basis @ A`` so the cost is
    independent of ``p``.
    """
    order = np.asarray(order, dtype=int)
    K = order.size
    A = pd.scale[:, None] * pd.loadings[order].T
    c = pd.basis.T @ pd.y_hat
    m = A.shape[0]
    B = np.zeros((K, K))
    deficient = np.zeros(K, dtype=bool)
    if m == 0:
        # the profiled design is identically zero
        deficient[:] = True
        return B, deficient

    kq = min(K, m)
    if kq:
        Q, R = np.linalg.qr(A[:, :kq])
        qc = Q.T @ c
        dR = np.abs(np.diag(R))
    G = None
    for k in range(1, K + 1):
        if k <= kq and _cond_ok(dR[:k], lambda: sla.svdvals(R[:k, :k])):
            B[:k, k - 1] = sla.solve_triangular(R[:k, :k], qc[:k])
            continue
        deficient[k - 1] = True
        if k >= m:
            # wide subset: minimum-norm solution through the m x m row Gram
            if G is None:
                G = A[:, :k] @ A[:, :k].T
            else:
                a = A[:, k - 1]
                G += np.outer(a, a)
            try:
                L = np.linalg.cholesky(G)
            except np.linalg.LinAlgError:
                L = None
            if L is not None and _cond_ok(np.diag(L) ** 2, lambda: np.linalg.eigvalsh(G)[::-1]):
                z = sla.cho_solve((L, True), c)
                B[:k, k - 1] = A[:, :k].T @ z
                continue
        B[:k, k - 1] = _min_norm_lstsq(A[:, :k], c)
    return B, deficient


def select_k(pd: ProfiledData, scores: ImportanceScores, y, X, k_max: int | None = None,
             residual: str = "original") -> SubsetModel:
    """Pick the number of top-ranked variables minimising the BIC.

    ``k`` runs over ``1 .. min(k_max, n - 2)``; beyond that the original-scale
    least squares residual vanishes and the criterion is meaningless.  The
    coefficients are fitted on the profiled data.  With ``residual="original"``
    the residual is measured on the untransformed ``(y, X)``; ``"profiled"``
    measures it on ``(y_hat, X_hat)`` instead.  Ties go to the smaller ``k``.
    """
    yv, Xv = _values(y), _values(X)
    n, p = Xv.shape
    if k_max is None:
        k_max = p
    if k_max < 1:
        raise InvalidK(f"k_max must be >= 1, got {k_max}")
    K = max(1, min(k_max, n - 2, p))
    order = scores.ranking[:K]
    B, deficient = nested_fits(pd, order)
    if residual == "original":
        R = yv[:, None] - Xv[:, order] @ B
    elif residual == "profiled":
        A = pd.scale[:, None] * pd.loadings[order].T
        R = pd.y_hat[:, None] - pd.basis @ (A @ B)
    else:
        raise ValueError(f"residual must be 'original' or 'profiled', got {residual!r}")
    rss = np.einsum("ij,ij->j", R, R)
    path = np.full(K, np.nan)
    for k in range(1, K + 1):
        try:
            path[k - 1] = bic_from_rss(float(rss[k - 1]), n, p, k)
        except DegenerateFit:
            continue
    if not np.isfinite(path).any():
        raise DegenerateFit("every candidate subset gave a numerically zero residual")
    best = int(np.nanargmin(path))
    return SubsetModel(
        indices=order[: best + 1].copy(),
        beta_hat=B[: best + 1, best].copy(),
        bic=float(path[best]),
        rank_deficient=bool(deficient[best]),
        bic_path=path,
    )


def default_d_grid(n: int, fractions: Sequence[float] = DEFAULT_D_FRACTIONS) -> list[int]:
    """``round(f * n)`` for each fraction, clamped to ``[1, n - 1]``."""
    return [int(min(max(round(f * n), 1), n - 1)) for f in fractions]


def _dedupe(values):
    out = []
    for v in values:
        if v not in out:
            out.append(v)
    return out


def _profile(method, X, y, d, alpha, svd, variant):
    if method is Method.SIS:
        return profile_sis(X, y)
    if method in (Method.FPSIS, Method.FPSIS_BIC):
        return profile_fpsis(X, y, d, svd=svd, method=method)
    if method is Method.PPIS:
        return profile_ppis(X, y, d, variant=variant, svd=svd)
    return profile_tppis(X, y, d, alpha, svd=svd, variant=variant)


def grid_search(method, X, y, d_grid: Sequence[int] | None = None,
                alpha_grid: Sequence[float] | None = None, k_max: int | None = None, *,
                svd: ThinSvd | None = None, include_eigen_ratio: bool = True,
                variant=PpisVariant.PUFFER_INVERSE, residual: str = "original",
                keep_cells: bool = True) -> GridSearchResult:
    """Run one screening method end to end and return its BIC-optimal setting.

    ``X`` and ``y`` should already be standardized and centred.  SIS ignores
    both grids.  FPSIS and PPIS use the eigen-ratio ``d`` only.  FPSIS_BIC
    searches ``d_grid`` and TPPIS searches ``d_grid x alpha_grid``; for those
    two the eigen-ratio ``d`` is appended unless ``include_eigen_ratio`` is
    false.  Combinations with ``d >= floor(n * alpha)`` are skipped.  Ties in
    BIC are broken towards smaller ``d``, then ``alpha``, then ``k``.
    """
    method = Method.parse(method)
    Xv, yv = _values(X), _values(y)
    n = Xv.shape[0]
    if method is not Method.SIS and svd is None:
        svd = thin_svd(Xv)

    if method is Method.SIS:
        combos = [(None, None)]
    elif method in (Method.FPSIS, Method.PPIS):
        combos = [(eigen_ratio_d(svd.mu), None)]
    else:
        ds = list(default_d_grid(n) if d_grid is None else d_grid)
        if include_eigen_ratio:
            ds.append(eigen_ratio_d(svd.mu))
        ds = sorted(_dedupe(int(d) for d in ds))
        if not ds:
            raise EmptyValidGrid("empty d grid")
        if method is Method.FPSIS_BIC:
            combos = [(d, None) for d in ds]
        else:
            alphas = sorted(_dedupe(float(a) for a in (alpha_grid or DEFAULT_ALPHA_GRID)))
            combos = [(d, a) for d in ds for a in alphas]

    cells = []
    for d, alpha in combos:
        if d is not None and not 1 <= d <= n - 1:
            continue
        if alpha is not None and d >= truncation_index(n, alpha):
            continue
        try:
            pd = _profile(method, Xv, yv, d, alpha, svd, variant)
        except ScreeningError:
            if method in (Method.FPSIS_BIC, Method.TPPIS):
                continue
            raise
        scores = importance_scores(pd)
        model = select_k(pd, scores, yv, Xv, k_max=k_max, residual=residual)
        cells.append(GridCell(d, alpha, model, scores))
    if not cells:
        raise EmptyValidGrid(f"no valid (d, alpha) combination for {method.value} with n = {n}")

    def key(cell):
        return (cell.model.bic,
                -1 if cell.d is None else cell.d,
                -1.0 if cell.alpha is None else cell.alpha,
                cell.model.k)

    best = min(cells, key=key)
    return GridSearchResult(
        method=method,
        best_d=best.d,
        best_alpha=best.alpha,
        best_k=best.model.k,
        best_bic=best.model.bic,
        best_model=best.model,
        best_scores=best.scores,
        cells=cells if keep_cells else [best],
    )
