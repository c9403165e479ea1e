from fractions import Fraction

from hypothesis import strategies as st

from iterfe.exact import Polynomial, RationalFunction

small_fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def polynomials(max_degree=4, min_valuation=0):
    return st.lists(small_fractions, min_size=0, max_size=max_degree + 1).map(
        lambda cs: Polynomial([0] * min_valuation + cs)
    )


def nonzero_polynomials(max_degree=4):
    return polynomials(max_degree).filter(bool)


def ratfuncs(max_degree=3):
    return st.builds(RationalFunction, polynomials(max_degree), nonzero_polynomials(max_degree))


def maps_fixing_zero(min_valuation=1, max_degree=4):
    """R with R(0) = 0 and a nonzero term of degree >= min_valuation."""
    num = st.lists(small_fractions, min_size=1, max_size=max_degree).map(
        lambda cs: Polynomial([0] * min_valuation + cs)
    ).filter(bool)
    den = st.lists(small_fractions, min_size=0, max_size=2).map(lambda cs: Polynomial([1] + cs))
    return st.builds(RationalFunction, num, den)
