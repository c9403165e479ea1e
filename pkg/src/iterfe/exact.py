"""Exact scalars, dense polynomials, reduced rational functions and homographies over Q.

Scalars are :class:`fractions.Fraction`. Every value in this module is
immutable; equality of reduced objects is syntactic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, isqrt, lcm
from typing import NamedTuple, Sequence

from . import kernels
from .errors import DegenerateComposition, ZeroInput

Rational = Fraction


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(x: Fraction) -> str:
    """Canonical ``p/q`` (or ``p`` when q = 1) text form."""
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class _Infinity:
    """The point at infinity of the projective line over Q."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def p1_sort_key(p):
    return (1, Fraction(0)) if p is INF else (0, p)


def format_p1(p) -> str:
    return "inf" if p is INF else format_rational(p)


class Polynomial:
    """Dense polynomial in t; ``coeffs[i]`` is the coefficient of t^i, no trailing zeros."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Sequence = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def t(cls) -> "Polynomial":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c=1) -> "Polynomial":
        return cls([0] * degree + [c])

    @property
    def degree(self) -> int:
        """Degree, or -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @property
    def valuation(self):
        """Index of the first nonzero coefficient (None for zero)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self):
        return bool(self.coeffs)

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Polynomial.constant(other).coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(("Polynomial", self.coeffs)))
        return self._hash

    @staticmethod
    def _coerce(x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, (int, Fraction)):
            return Polynomial.constant(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial([c * other for c in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        n = self.degree + other.degree
        return Polynomial(kernels.mul_trunc(self.coeffs, other.coeffs, n))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other: "Polynomial"):
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return Polynomial(), self
        quo = [Fraction(0)] * (len(rem) - dq)
        inv_lead = 1 / other.lead
        for i in range(len(rem) - 1 - dq, -1, -1):
            q = rem[i + dq] * inv_lead
            quo[i] = q
            if q:
                for j, c in enumerate(other.coeffs):
                    rem[i + j] -= q * c
        return Polynomial(quo), Polynomial(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, Polynomial) else Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def compose(self, inner: "Polynomial") -> "Polynomial":
        """self(inner(t)) by Horner's rule."""
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def monic(self) -> "Polynomial":
        if not self:
            return self
        return self * (1 / self.lead)

    def shift(self, k: int) -> "Polynomial":
        """Multiply by t^k (k >= 0)."""
        if not self:
            return self
        return Polynomial([0] * k + list(self.coeffs))

    def primitive_integer_coeffs(self) -> list[int]:
        """Integer coefficients of the primitive integer multiple of self."""
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(gcd, ints, 0)
        return [x // g for x in ints] if g else ints

    @staticmethod
    def gcd(a: "Polynomial", b: "Polynomial") -> "Polynomial":
        """Monic gcd (zero if both are zero)."""
        while b:
            a, b = b, a % b
        return a.monic()

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_polynomial(self)


def format_polynomial(p: Polynomial, var: str = "t") -> str:
    if not p.coeffs:
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if i == 0:
            body = format_rational(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += sign + body
    return out


T = Polynomial.t()


class RationalFunction:
    """Reduced fraction num/den of polynomials over Q with monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, *, reduced: bool = False):
        num = _as_poly(num)
        den = Polynomial.constant(1) if den is None else _as_poly(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not reduced:
            if not num:
                den = Polynomial.constant(1)
            else:
                g = Polynomial.gcd(num, den)
                if g.degree > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            lead = den.lead
            if lead != 1:
                num = num * (1 / lead)
                den = den * (1 / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def t(cls) -> "RationalFunction":
        return cls(T, reduced=True)

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls(Polynomial.constant(c), reduced=True)

    @staticmethod
    def _coerce(x):
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, Polynomial):
            return RationalFunction(x, reduced=True)
        if isinstance(x, (int, Fraction)):
            return RationalFunction.constant(x)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    @property
    def degree(self) -> int:
        """Degree of the map t -> self(t): max of numerator and denominator degrees."""
        return max(self.num.degree, self.den.degree)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(("RationalFunction", self.num, self.den)))
        return self._hash

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k: int):
        if k >= 0:
            return RationalFunction(self.num ** k, self.den ** k, reduced=True).renormalized()
        if not self:
            raise ZeroDivisionError("negative power of zero")
        return RationalFunction(self.den ** (-k), self.num ** (-k))

    def renormalized(self) -> "RationalFunction":
        lead = self.den.lead
        if lead == 1:
            return self
        return RationalFunction(self.num * (1 / lead), self.den * (1 / lead), reduced=True)

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num(x) / d

    def evaluate_p1(self, x):
        """Value at a point of the projective line (``INF`` allowed on both sides)."""
        if x is INF:
            dn, dd = self.num.degree, self.den.degree
            if dn > dd:
                return INF
            if dn < dd:
                return Fraction(0)
            return self.num.lead / self.den.lead
        d = self.den(x)
        if d == 0:
            return INF
        return self.num(x) / d

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den
        )

    def compose(self, inner: "RationalFunction") -> "RationalFunction":
        return ratfunc_compose(self, inner)

    def iterate(self, k: int) -> "RationalFunction":
        result = RationalFunction.t()
        for _ in range(k):
            result = ratfunc_compose(self, result)
        return result

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.constant(x)
    if isinstance(x, (list, tuple)):
        return Polynomial(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a polynomial")


def as_ratfunc(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction(x, reduced=True)
    if isinstance(x, (int, Fraction)):
        return RationalFunction.constant(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational function")


def ratfunc_compose(outer: RationalFunction, inner: RationalFunction) -> RationalFunction:
    """Reduced composition outer(inner(t)).

    With outer = P/Q, inner = U/V and n = max(deg P, deg Q), both P(U/V) and
    Q(U/V) are brought over V^n before reducing.
    """
    outer, inner = as_ratfunc(outer), as_ratfunc(inner)
    P, Q = outer.num, outer.den
    U, V = inner.num, inner.den
    n = max(P.degree, Q.degree, 0)
    upow = [Polynomial.constant(1)]
    vpow = [Polynomial.constant(1)]
    for _ in range(n):
        upow.append(upow[-1] * U)
        vpow.append(vpow[-1] * V)
    num = Polynomial()
    den = Polynomial()
    for i in range(n + 1):
        term = upow[i] * vpow[n - i]
        if P.coeff(i):
            num = num + term * P.coeff(i)
        if Q.coeff(i):
            den = den + term * Q.coeff(i)
    if not den:
        raise DegenerateComposition(f"denominator of ({outer})∘({inner}) vanishes identically")
    return RationalFunction(num, den)


def ratfunc_log_derivative(a: RationalFunction) -> RationalFunction:
    """a'/a, reduced."""
    a = as_ratfunc(a)
    if not a:
        raise ZeroInput("logarithmic derivative of zero")
    N, D = a.num, a.den
    return RationalFunction(N.derivative() * D - N * D.derivative(), N * D)


class RationalRoots(NamedTuple):
    roots: list  # (root, multiplicity) pairs sorted by root
    remainder_degree: int


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def rational_roots(p: Polynomial) -> RationalRoots:
    """Rational roots with multiplicities, by the rational-root test on the primitive integer form.

    ``remainder_degree`` is the degree of the cofactor left after dividing out
    every rational root, i.e. the number of irrational roots with multiplicity.
    """
    p = _as_poly(p)
    if not p:
        raise ZeroInput("rational roots of the zero polynomial")
    roots = []
    v = p.valuation
    q = Polynomial(p.coeffs[v:])
    if v:
        roots.append((Fraction(0), v))
    if q.degree > 0:
        ints = q.primitive_integer_coeffs()
        candidates = set()
        for num in _divisors(ints[0]):
            for den in _divisors(ints[-1]):
                candidates.add(Fraction(num, den))
                candidates.add(Fraction(-num, den))
        for c in sorted(candidates):
            mult = 0
            while q.degree > 0 and q(c) == 0:
                q = q.exact_div(Polynomial((-c, 1)))
                mult += 1
            if mult:
                roots.append((c, mult))
    roots.sort(key=lambda rm: rm[0])
    return RationalRoots(roots, q.degree)


@dataclass(frozen=True)
class Homography:
    """t -> (alpha*t + beta) / (gamma*t + delta) with nonzero determinant."""

    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.alpha * self.delta - self.beta * self.gamma == 0:
            raise ValueError("homography with zero determinant")

    @classmethod
    def identity(cls) -> "Homography":
        return cls(1, 0, 0, 1)

    @classmethod
    def through_points(cls, image_of_zero, image_of_inf, image_of_one) -> "Homography":
        """The unique homography sending 0, INF, 1 to the given distinct points of P^1(Q)."""

        def vec(p):
            return (Fraction(1), Fraction(0)) if p is INF else (as_fraction(p), Fraction(1))

        z, w, o = vec(image_of_zero), vec(image_of_inf), vec(image_of_one)
        # o = lam * w + mu * z
        det = w[0] * z[1] - w[1] * z[0]
        if det == 0:
            raise ValueError("images of 0 and INF coincide")
        lam = (o[0] * z[1] - o[1] * z[0]) / det
        mu = (w[0] * o[1] - w[1] * o[0]) / det
        if lam == 0 or mu == 0:
            raise ValueError("image of 1 coincides with another image")
        return cls(lam * w[0], mu * z[0], lam * w[1], mu * z[1]).normalized()

    def normalized(self) -> "Homography":
        """Scale the matrix so the last nonzero of (delta, gamma) equals 1."""
        s = self.delta if self.delta else self.gamma
        return Homography(self.alpha / s, self.beta / s, self.gamma / s, self.delta / s)

    def as_ratfunc(self) -> RationalFunction:
        return RationalFunction(Polynomial((self.beta, self.alpha)), Polynomial((self.delta, self.gamma)))

    def matrix(self):
        return ((self.alpha, self.beta), (self.gamma, self.delta))

    def compose(self, inner: "Homography") -> "Homography":
        """self ∘ inner, i.e. the matrix product self @ inner."""
        a, b, c, d = self.alpha, self.beta, self.gamma, self.delta
        e, f, g, h = inner.alpha, inner.beta, inner.gamma, inner.delta
        return Homography(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "Homography":
        return Homography(self.delta, -self.beta, -self.gamma, self.alpha)

    def __call__(self, x):
        if x is INF:
            return INF if self.gamma == 0 else self.alpha / self.gamma
        x = as_fraction(x)
        d = self.gamma * x + self.delta
        if d == 0:
            return INF
        return (self.alpha * x + self.beta) / d

    def to_json(self):
        return [format_rational(v) for v in (self.alpha, self.beta, self.gamma, self.delta)]

    def __str__(self):
        return str(self.as_ratfunc())
