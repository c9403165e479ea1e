from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from iterfe.dynamics import (
    SUPERATTRACTING,
    check_assumption_R,
    chebyshev,
    critical_portrait,
    find_conjugating_homography,
    fixed_points,
    multiplier_data,
    preimages,
    replay_certificate,
)
from iterfe.errors import NotFixingZero
from iterfe.exact import INF, Homography, Polynomial, RationalFunction, ratfunc_compose

t = RationalFunction.t()


def test_multiplier_data():
    md = multiplier_data(t ** 2 + t ** 3)
    assert (md.d, md.r1, md.kind) == (2, 0, SUPERATTRACTING)
    assert multiplier_data(t / (1 + t)).r1 == 1
    with pytest.raises(NotFixingZero):
        multiplier_data(1 + t)


@pytest.mark.parametrize(
    "R, kind",
    [
        (t, "Violated"),
        (-t, "Violated"),
        (-t / (1 + t), "Violated"),
        (t / (1 + t), "Satisfied"),
        (t / (1 - t), "Satisfied"),
        (t ** 2 + t ** 3, "Satisfied"),
        (3 * t + t ** 2, "OtherMultiplierCase"),
    ],
)
def test_assumption_R(R, kind):
    assert check_assumption_R(R).kind == kind


@given(st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4)))
def test_assumption_involutions(c):
    # Moebius maps fixing 0 with finite order over Q are involutions -t/(1 + c t)
    status = check_assumption_R(-t / (1 + c * t))
    assert status.kind == "Violated" and status.iterate == 2


@given(st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4)))
def test_assumption_parabolic_moebius(c):
    assert check_assumption_R(t / (1 + c * t)).kind == ("Violated" if c == 0 else "Satisfied")


def test_chebyshev_identity():
    for d in range(1, 7):
        T = RationalFunction(chebyshev(d))
        assert T.compose(RationalFunction(chebyshev(2))) == RationalFunction(chebyshev(2 * d))
    assert chebyshev(5).coeffs == tuple(Fraction(c) for c in (0, 5, 0, -20, 0, 16))


def test_fixed_points_and_preimages():
    R = 2 * t ** 2 - 1
    assert fixed_points(R) == [Fraction(-1, 2), Fraction(1), INF]
    assert preimages(R, Fraction(1)) == [Fraction(-1), Fraction(1)]
    assert preimages(t ** 2, INF) == [INF]


def test_portrait_t_squared():
    rep = critical_portrait(t ** 2)
    assert rep.status == "FiniteP"
    assert rep.postcritical_set == [Fraction(0)]
    assert rep.includes_infinity


def test_portrait_chebyshev():
    rep = critical_portrait(2 * t ** 2 - 1)
    assert rep.status == "FiniteP"
    assert rep.postcritical_set == [Fraction(-1), Fraction(1)]


def test_portrait_infinite_certified():
    R = t ** 2 + t ** 3
    rep = critical_portrait(R, max_iter=20)
    assert rep.status == "InfiniteCertified"
    assert replay_certificate(R, rep.certificate)
    bad = dict(rep.certificate, interval=["0", "1"])
    assert not replay_certificate(R, bad)


def test_conjugacy_monomial():
    R = t ** 2 / (1 - 2 * t + 2 * t ** 2)
    res = find_conjugating_homography(R)
    assert res.kind == "Monomial" and res.verified
    assert res.m.as_ratfunc() == t / (1 + t)


def test_conjugacy_none_for_infinite_p():
    assert find_conjugating_homography(t ** 2 + t ** 3).kind == "None"


def test_conjugacy_chebyshev():
    # conjugate T_2 by m(t) = 1/t... m must send INF to 0; take m = 1/(t+3)
    m = Homography(0, 1, 1, 3)
    mf = m.as_ratfunc()
    R = ratfunc_compose(ratfunc_compose(mf, RationalFunction(chebyshev(2))), m.inverse().as_ratfunc())
    res = find_conjugating_homography(R)
    assert res.kind == "ChebyshevPlus"
    assert ratfunc_compose(R, res.m.as_ratfunc()) == ratfunc_compose(res.m.as_ratfunc(), RationalFunction(chebyshev(2)))


@given(
    st.integers(2, 4),
    st.builds(Fraction, st.integers(-5, 5).filter(bool), st.integers(1, 5)),
    st.builds(Fraction, st.integers(-5, 5).filter(bool), st.integers(1, 5)),
)
def test_monomial_conjugates_recovered(d, p, q):
    # m sends 0 -> 0, INF -> p, 1 -> q (when distinct); R = m o t^d o m^-1 fixes 0 with local degree d
    if p == q:
        return
    m = Homography.through_points(0, p, q)
    mf = m.as_ratfunc()
    R = ratfunc_compose(ratfunc_compose(mf, RationalFunction(Polynomial.monomial(d))), m.inverse().as_ratfunc())
    res = find_conjugating_homography(R)
    assert res.kind == "Monomial"
    m2 = res.m.as_ratfunc()
    assert ratfunc_compose(R, m2) == ratfunc_compose(m2, RationalFunction(Polynomial.monomial(d)))
    assert critical_portrait(R).status == "FiniteP"


def test_portrait_json_is_stable():
    a = critical_portrait(t ** 2 + t ** 3).to_json()
    b = critical_portrait(t ** 2 + t ** 3).to_json()
    assert a == b
