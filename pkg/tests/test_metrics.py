import numpy as np
import pytest
from hypothesis import given, strategies as st

from factorscreen._errors import IndexOutOfRange
from factorscreen.metrics import ConfusionCounts, confusion, f2_score, f_theta


def test_confusion_examples():
    assert confusion([0, 1], [0, 1], 5) == (2, 0, 3, 0)
    assert confusion([0], [1], 3) == (0, 1, 1, 1)


def test_confusion_out_of_range():
    with pytest.raises(IndexOutOfRange):
        confusion([5], [0], 5)
    with pytest.raises(IndexOutOfRange):
        confusion([0], [-1], 5)


@given(st.integers(1, 40).flatmap(lambda p: st.tuples(
    st.just(p), st.sets(st.integers(0, p - 1)), st.sets(st.integers(0, p - 1)))))
def test_confusion_sums(args):
    p, sel, true = args
    c = confusion(sorted(sel), sorted(true), p)
    assert sum(c) == p
    assert c.tp + c.fn == len(true)


def test_f_theta_hand_values():
    assert f_theta(ConfusionCounts(3, 0, 5, 0)) == 1.0
    assert f_theta(ConfusionCounts(4, 1, 10, 0), 2.0) == pytest.approx(0.95238, abs=1e-5)
    assert f_theta(ConfusionCounts(0, 3, 5, 2)) == 0.0


def test_f1_is_harmonic_mean():
    c = ConfusionCounts(3, 2, 10, 4)
    P, R = 3 / 5, 3 / 7
    assert f_theta(c, 1.0) == pytest.approx(2 / (1 / P + 1 / R))


def test_theta_must_be_positive():
    with pytest.raises(ValueError):
        f_theta(ConfusionCounts(1, 0, 0, 0), 0.0)


@given(st.integers(1, 20), st.integers(0, 20), st.integers(0, 20))
def test_f_theta_monotone(tp, fp, fn):
    base = f_theta(ConfusionCounts(tp, fp, 0, fn))
    assert f_theta(ConfusionCounts(tp + 1, fp, 0, fn)) >= base - 1e-15
    assert f_theta(ConfusionCounts(tp, fp + 1, 0, fn)) <= base + 1e-15
    assert f_theta(ConfusionCounts(tp, fp, 0, fn + 1)) <= base + 1e-15


def test_f2_score_shortcut():
    assert f2_score(np.array([0, 1, 2, 3, 9]), [0, 1, 2, 3], 20) == pytest.approx(0.95238, abs=1e-5)
