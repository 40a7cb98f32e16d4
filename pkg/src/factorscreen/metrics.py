"""Confusion counts and the recall-weighted F score for variable selection."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ._errors import IndexOutOfRange


class ConfusionCounts(NamedTuple):
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp else 0.0


def _index_set(idx, p, name):
    s = {int(i) for i in np.asarray(idx, dtype=int).ravel()}
    bad = [i for i in s if not 0 <= i < p]
    if bad:
        raise IndexOutOfRange(f"{name} contains indices outside [0, {p}): {sorted(bad)[:5]}")
    return s


def confusion(selected, true_support, p: int) -> ConfusionCounts:
    """Counts for 0-based index sets ``selected`` and ``true_support``."""
    sel = _index_set(selected, p, "selected")
    true = _index_set(true_support, p, "true_support")
    tp = len(sel & true)
    fp = len(sel - true)
    fn = len(true - sel)
    return ConfusionCounts(tp, fp, p - tp - fp - fn, fn)


def f_theta(counts: ConfusionCounts, theta: float = 2.0) -> float:
    """``(1 + theta^2) P R / (R + theta^2 P)``; 0 when nothing is correct."""
    if theta <= 0:
        raise ValueError(f"theta must be positive, got {theta}")
    P, R = counts.precision, counts.recall
    if counts.tp == 0:
        return 0.0
    t2 = theta * theta
    return (1 + t2) * P * R / (R + t2 * P)


def f2_score(selected, true_support, p: int) -> float:
    return f_theta(confusion(selected, true_support, p), 2.0)
