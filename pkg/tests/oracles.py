"""Naive reference implementations used only as test oracles.

Series are plain lists of Fractions of a fixed length; nothing here calls the
package's series or solver code.
"""
from fractions import Fraction


def taylor(num, den, n):
    """Coefficients of num/den (lists, den[0] != 0) through t^n by long division."""
    num = [Fraction(x) for x in num] + [Fraction(0)] * (n + 1)
    den = [Fraction(x) for x in den] + [Fraction(0)] * (n + 1)
    out = []
    for k in range(n + 1):
        c = (num[k] - sum(out[j] * den[k - j] for j in range(k))) / den[0]
        out.append(c)
    return out


def mul(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n)]


def compose(f, g):
    """f(g) with g[0] == 0, truncated to len(f)."""
    n = len(f)
    out = [Fraction(0)] * n
    power = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for k in range(n):
        out = [x + f[k] * y for x, y in zip(out, power)]
        power = mul(power, g)
    return out


def binomial_power(x, alpha):
    """(1 + x)^alpha with x[0] == 0."""
    n = len(x)
    out = [Fraction(0)] * n
    term = [Fraction(1)] + [Fraction(0)] * (n - 1)
    coeff = Fraction(1)
    for k in range(n):
        out = [a + coeff * b for a, b in zip(out, term)]
        term = mul(term, x)
        coeff = coeff * (alpha - k) / (k + 1)
    return out


def boettcher_product(u, d, n):
    """tau = t * prod_{j>=0} u(R^j(t))^(1/d^(j+1)) for R = t^d u(t), u(0) = 1."""
    t = [Fraction(0), Fraction(1)] + [Fraction(0)] * (n - 1)
    R = mul([Fraction(0)] * d + [Fraction(1)] + [Fraction(0)] * n, u + [Fraction(0)] * (n + 1))[: n + 1]
    R = (R + [Fraction(0)] * (n + 1))[: n + 1]
    u = (list(u) + [Fraction(0)] * (n + 1))[: n + 1]
    acc = [Fraction(1)] + [Fraction(0)] * n
    it = t[: n + 1]
    j = 0
    while any(it) and j < 64:
        ui = compose(u, it)
        ui[0] -= 1
        acc = mul(acc, binomial_power(ui, Fraction(1, d ** (j + 1))))
        it = compose(R, it)
        j += 1
    return [Fraction(0)] + acc[:n]
