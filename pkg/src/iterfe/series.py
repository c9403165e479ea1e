"""Truncated formal power series over Q with explicit, pessimistic precision.

A :class:`Series` of order N stands for ``sum_{n<=N} c_n t^n + O(t^(N+1))``:
the coefficients ``c_0..c_N`` are exact and nothing beyond N is known.
Every operation returns the largest order that its inputs justify.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from . import kernels
from .errors import CompositionAtUnit, DivisionByNonUnit, NotReversible
from .exact import Polynomial, RationalFunction, as_fraction, as_ratfunc, format_rational


class Series:
    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Sequence = (), order: int | None = None):
        cs = [as_fraction(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("series order must be >= 0")
        if len(cs) > order + 1:
            cs = cs[: order + 1]
        else:
            cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("Series is immutable")

    # construction -----------------------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "Series":
        return cls((), order)

    @classmethod
    def constant(cls, c, order: int) -> "Series":
        return cls((c,), order)

    @classmethod
    def t(cls, order: int) -> "Series":
        return cls((0, 1), order)

    @classmethod
    def from_polynomial(cls, p: Polynomial, order: int) -> "Series":
        return cls(p.coeffs[: order + 1], order)

    @classmethod
    def from_ratfunc(cls, rf, order: int) -> "Series":
        """Taylor expansion at 0 of a rational function regular at 0."""
        rf = as_ratfunc(rf)
        if rf.den.coeff(0) == 0:
            raise DivisionByNonUnit(f"{rf} has a pole at 0; use LaurentSeries.from_ratfunc")
        num = cls.from_polynomial(rf.num, order)
        if rf.den.degree == 0:
            return num * (1 / rf.den.coeff(0))
        return num / cls.from_polynomial(rf.den, order)

    @classmethod
    def coerce(cls, x, order: int) -> "Series":
        if isinstance(x, Series):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.constant(x, order)
        if isinstance(x, Polynomial):
            return cls.from_polynomial(x, order)
        if isinstance(x, RationalFunction):
            return cls.from_ratfunc(x, order)
        raise TypeError(f"cannot convert {type(x).__name__} to a series")

    # inspection -------------------------------------------------------------------

    @property
    def valuation(self):
        """Index of the first nonzero coefficient, or None if zero to this order."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def _valuation_bound(self) -> int:
        v = self.valuation
        return self.order + 1 if v is None else v

    def coeff(self, n: int) -> Fraction:
        if n > self.order:
            raise IndexError(f"coefficient {n} is beyond the known order {self.order}")
        return self.coeffs[n] if n >= 0 else Fraction(0)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise ValueError(f"cannot raise precision from {self.order} to {order}")
        return Series(self.coeffs[: order + 1], order)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("Series", self.order, self.coeffs))

    def agrees_with(self, other: "Series") -> bool:
        """True when both series have the same coefficients up to the smaller order."""
        n = min(self.order, other.order)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    def is_zero(self) -> bool:
        return self.valuation is None

    def to_polynomial(self) -> Polynomial:
        return Polynomial(self.coeffs)

    # ring operations --------------------------------------------------------------

    def _coerce_other(self, other):
        if isinstance(other, Series):
            return other
        if isinstance(other, (int, Fraction)):
            return Series.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        n = min(self.order, other.order)
        return Series([a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1])], n)

    __radd__ = __add__

    def __neg__(self):
        return Series([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Series":
        c = as_fraction(c)
        return Series([c * x for x in self.coeffs], self.order)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Series):
            return NotImplemented
        order = min(self.order + other._valuation_bound(), other.order + self._valuation_bound())
        return Series(kernels.mul_trunc(self.coeffs, other.coeffs, order), order)

    __rmul__ = __mul__

    def inverse(self) -> "Series":
        g0 = self.coeffs[0]
        if g0 == 0:
            raise DivisionByNonUnit("series with zero constant term is not a unit")
        n = self.order
        inv0 = 1 / g0
        h = [inv0]
        g = self.coeffs
        for k in range(1, n + 1):
            acc = Fraction(0)
            for j in range(1, k + 1):
                if g[j]:
                    acc += g[j] * h[k - j]
            h.append(-acc * inv0)
        return Series(h, n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / as_fraction(other))
        if not isinstance(other, Series):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse().scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = Series.constant(1, self.order + k * self._valuation_bound())
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_t_power(self, k: int) -> "Series":
        """Multiply by t^k (k >= 0); precision grows by k."""
        return Series([0] * k + list(self.coeffs), self.order + k)

    def div_t_power(self, k: int) -> "Series":
        """Divide by t^k; requires coefficients 0..k-1 to vanish."""
        if any(self.coeffs[:k]):
            raise DivisionByNonUnit(f"series is not divisible by t^{k}")
        if k > self.order:
            raise ValueError("not enough precision to divide by t^k")
        return Series(self.coeffs[k:], self.order - k)

    # serialization ----------------------------------------------------------------

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "Series":
        return cls([Fraction(c) for c in data["coeffs"]], data["order"])

    def __repr__(self):
        return f"Series({self}, order={self.order})"

    def __str__(self):
        terms = str(Polynomial(self.coeffs))
        return f"{terms} + O(t^{self.order + 1})"


def arithmetic(f: Series, g: Series, kind: str) -> Series:
    """Binary ring/field operation selected by name: add, sub, mul or div."""
    if kind == "add":
        return f + g
    if kind == "sub":
        return f - g
    if kind == "mul":
        return f * g
    if kind == "div":
        if g.coeffs[0] == 0:
            raise DivisionByNonUnit("divisor has positive valuation; shift by t^k explicitly")
        return f / g
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def composition_order(f: Series, g: Series) -> int:
    """Largest exponent of f(g(t)) determined by the known coefficients of f and g.

    With v = valuation(g): unknown f_n (n > order(f)) start at t^((order(f)+1)·v),
    and the unknown tail of g enters through the lowest k >= 1 with f_k != 0
    at t^((k-1)·v + order(g) + 1).
    """
    v = g._valuation_bound()
    bound = (f.order + 1) * v - 1
    for k in range(1, f.order + 1):
        if f.coeffs[k]:
            bound = min(bound, (k - 1) * v + g.order)
            break
    return bound


def series_compose(f: Series, g: Series) -> Series:
    """f(g(t)) by Horner evaluation in the truncated ring; requires g(0) = 0."""
    if g.coeffs[0] != 0:
        raise CompositionAtUnit("inner series must have zero constant term")
    order = composition_order(f, g)
    acc: list = []
    for c in reversed(f.coeffs):
        acc = kernels.mul_trunc(acc, g.coeffs, order) if acc else []
        if acc:
            acc[0] += c
        elif c:
            acc = [c]
    return Series(acc, order)


def reversion(f: Series) -> Series:
    """Compositional inverse g with f(g(t)) = t, by Lagrange inversion.

    [t^n] g = (1/n) [t^(n-1)] (t/f)^n.
    """
    if f.order < 1 or f.coeffs[0] != 0 or f.coeffs[1] == 0:
        raise NotReversible("reversion needs f(0) = 0 and f'(0) != 0")
    n_max = f.order
    h = Series(f.coeffs[1:], n_max - 1).inverse()
    g = [Fraction(0)]
    power = [Fraction(1)]
    for n in range(1, n_max + 1):
        power = kernels.mul_trunc(power, h.coeffs, n_max - 1)
        g.append(power[n - 1] / n if n - 1 < len(power) else Fraction(0))
    return Series(g, n_max)


def differentiate(f: Series) -> Series:
    if f.order < 1:
        raise ValueError("cannot differentiate a series known only to order 0")
    return Series([k * c for k, c in enumerate(f.coeffs)][1:], f.order - 1)


def borel_transform(f: Series) -> Series:
    """Coefficient n divided by n! (ordinary to exponential generating function)."""
    out = []
    fact = 1
    for n, c in enumerate(f.coeffs):
        if n:
            fact *= n
        out.append(c / fact)
    return Series(out, f.order)


def inverse_borel_transform(f: Series) -> Series:
    return Series([c * factorial(n) for n, c in enumerate(f.coeffs)], f.order)


@dataclass(frozen=True)
class LaurentSeries:
    """t^shift · series, for the rare coefficients with a pole at 0."""

    shift: int
    series: Series

    @classmethod
    def from_ratfunc(cls, rf, order: int) -> "LaurentSeries":
        rf = as_ratfunc(rf)
        k = rf.den.valuation or 0
        den = Polynomial(rf.den.coeffs[k:])
        return cls(-k, Series.from_ratfunc(RationalFunction(rf.num, den), order))

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        return LaurentSeries(self.shift + other.shift, self.series * other.series)

    def to_series(self) -> Series:
        if self.shift >= 0:
            return self.series.mul_t_power(self.shift)
        return self.series.div_t_power(-self.shift)
