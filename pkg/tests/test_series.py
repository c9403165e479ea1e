from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from iterfe.errors import CompositionAtUnit, NotReversible
from iterfe.exact import RationalFunction, ratfunc_compose
from iterfe.series import (
    LaurentSeries,
    Series,
    borel_transform,
    differentiate,
    inverse_borel_transform,
    reversion,
    series_compose,
)
from strategies import maps_fixing_zero, small_fractions

t = RationalFunction.t()
ORDER = 12


def series(min_val=0):
    return st.lists(small_fractions, min_size=1, max_size=ORDER + 1 - min_val).map(
        lambda cs: Series([0] * min_val + cs, ORDER)
    )


def test_reversion_catalan():
    g = reversion(Series([0, 1, 1], 5))
    assert g.coeffs == (0, 1, -1, 2, -5, 14)


def test_fibonacci_compose():
    s = series_compose(Series.from_ratfunc(1 / (1 - t), 4), Series.from_ratfunc(t + t ** 2, 4))
    assert s.coeffs == (1, 1, 2, 3, 5)


def test_compose_requires_zero_constant():
    with pytest.raises(CompositionAtUnit):
        series_compose(Series.t(3), Series([1, 1], 3))
    with pytest.raises(NotReversible):
        reversion(Series([0, 0, 1], 3))


def test_laurent_roundtrip():
    L = LaurentSeries.from_ratfunc((1 + t) / t, 5)
    assert L.shift == -1
    assert (L * LaurentSeries(1, Series.constant(1, 5))).series.coeffs[:2] == (1, 1)


def test_composition_order_tracks_precision():
    f = Series([0, 0, 1], 4)  # t^2 + O(t^5)
    g = Series([0, 0, 1], 6)  # t^2 + O(t^7)
    assert series_compose(f, g).order == 8


@given(series(), series(), series())
def test_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)


@given(series())
def test_inverse(a):
    if a.coeffs[0]:
        assert (a * a.inverse()).coeffs == Series.constant(1, ORDER).coeffs


@given(series(min_val=1))
def test_reversion_roundtrip(f):
    if f.coeffs[1]:
        g = reversion(f)
        ident = Series.t(ORDER)
        assert series_compose(f, g) == ident
        assert series_compose(g, f) == ident


@given(maps_fixing_zero(), maps_fixing_zero())
def test_compose_matches_exact(R, S):
    Rs, Ss = Series.from_ratfunc(R, ORDER), Series.from_ratfunc(S, ORDER)
    assert series_compose(Rs, Ss).agrees_with(Series.from_ratfunc(ratfunc_compose(R, S), ORDER))


@given(series(), series(min_val=1))
def test_series_chain_rule(f, g):
    lhs = differentiate(series_compose(f, g))
    rhs = series_compose(differentiate(f), g) * differentiate(g)
    assert lhs.agrees_with(rhs)


@given(series())
def test_borel_roundtrip(f):
    assert inverse_borel_transform(borel_transform(f)) == f


def test_borel_exp():
    assert borel_transform(Series([1] * 5)).coeffs == tuple(Fraction(1, k) for k in (1, 1, 2, 6, 24))
