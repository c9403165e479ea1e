"""Solvers for f(R(t)) = a(t) f(t) + b(t) and its relatives.

Coefficient recursions work on the power matrix M[n][k] = [t^n] R(t)^k.
Row n of the equation reads

    sum_k (M[n][k] - a_{n-k}) y_k = b_n,

and after a shift s (nonzero only when R'(0) = a(0) = 1) row k + s is the
first one in which y_k appears, with coefficient lambda(k). Indices where
lambda vanishes are resonant: the coefficient is free when the rest of the
row vanishes and the equation is obstructed otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Optional

from . import kernels
from .dynamics import fixed_points, leading_coefficient_at_zero, multiplier_data, preimages
from .errors import (
    GroundFieldExtensionRequired,
    NotContractive,
    Obstructed,
    UnsupportedMultiplier,
    ZeroInput,
)
from .exact import (
    INF,
    Polynomial,
    RationalFunction,
    as_fraction,
    as_ratfunc,
    format_rational,
    ratfunc_compose,
    ratfunc_log_derivative,
    rational_roots,
)
from .linalg import solve_affine
from .series import Series, differentiate, series_compose

DEFAULT_DEG_BOUND = 40
DEFAULT_DENOMINATOR_BOUND = 12


# helpers ---------------------------------------------------------------------------


def _as_series(x, order: int) -> Series:
    if isinstance(x, Series):
        return x
    return Series.coerce(x, order)


def _map_series(R, order: int) -> Series:
    """R expanded at 0 to the given order (R must fix 0)."""
    if isinstance(R, Series):
        if R.coeffs[0] != 0:
            raise ValueError("R must fix 0")
        return R
    R = as_ratfunc(R)
    multiplier_data(R)  # raises NotFixingZero
    return Series.from_ratfunc(R, order)


def _map_valuation(R) -> int:
    if isinstance(R, Series):
        v = R.valuation
        if v is None:
            raise ZeroInput("R vanishes to the known order")
        return v
    return multiplier_data(R).d


def _power_columns(Rs: Series, n_max: int) -> list:
    """cols[k][n] = [t^n] R^k for n <= n_max, for every k with R^k not O(t^(n_max+1))."""
    v = Rs._valuation_bound()
    cols = [[Fraction(1)]]
    k = 1
    while k * v <= n_max:
        cols.append(kernels.mul_trunc(cols[-1], Rs.coeffs, n_max))
        k += 1
    return cols


def _coeff(col: list, n: int) -> Fraction:
    return col[n] if n < len(col) else Fraction(0)


def _first_nonlinear(R) -> int:
    """Smallest p >= 2 with [t^p] R != 0 (R tangent to the identity)."""
    if isinstance(R, Series):
        for p in range(2, R.order + 1):
            if R.coeffs[p]:
                return p
        raise ValueError("R agrees with t to the known order")
    R = as_ratfunc(R)
    diff = R.num - Polynomial.t() * R.den
    if not diff:
        raise ValueError("R is the identity map")
    return diff.valuation


def _valuation_of_minus_one(a) -> Optional[int]:
    """Valuation of a - 1 (None when a = 1, or when a - 1 vanishes to the known order)."""
    if isinstance(a, Series):
        for q in range(1, a.order + 1):
            if a.coeffs[q]:
                return q
        return None
    a = as_ratfunc(a)
    diff = a.num - a.den
    return diff.valuation if diff else None


@dataclass(frozen=True)
class _Resonance:
    shift: int
    r1: Fraction
    a0: Fraction
    rp: Fraction = Fraction(0)
    p: Optional[int] = None
    aq: Fraction = Fraction(0)
    q: Optional[int] = None

    def weight(self, k: int) -> Fraction:
        if self.shift == 0:
            return self.r1 ** k - self.a0
        lam = Fraction(0)
        if self.p is not None and self.shift == self.p - 1:
            lam += k * self.rp
        if self.q is not None and self.shift == self.q:
            lam -= self.aq
        return lam


def _resonance(R, a) -> _Resonance:
    R1 = _map_series(R, 1) if not isinstance(R, Series) else R
    a0s = _as_series(a, 0)
    r1 = R1.coeffs[1] if R1.order >= 1 else Fraction(0)
    a0 = a0s.coeffs[0]
    if not (r1 == 1 and a0 == 1):
        return _Resonance(0, r1, a0)
    p = _first_nonlinear(R)
    q = _valuation_of_minus_one(a)
    s = p - 1 if q is None else min(p - 1, q)
    Rs = _map_series(R, p)
    aq = _as_series(a, q).coeffs[q] if q is not None else Fraction(0)
    return _Resonance(s, r1, a0, Rs.coeffs[p], p, aq, q)


# standard form -----------------------------------------------------------------------


@dataclass
class FESolution:
    series: Optional[Series]
    free_indices: list = field(default_factory=list)
    obstructions: list = field(default_factory=list)
    shift: int = 0
    message: str = ""

    @property
    def ok(self) -> bool:
        return not self.obstructions

    def to_json(self) -> dict:
        return {
            "series": None if self.series is None else self.series.to_json(),
            "free_indices": list(self.free_indices),
            "obstructions": list(self.obstructions),
            "shift": self.shift,
            "message": self.message,
        }


def solve_fe_standard(R, a, b, order: int, normalization: Optional[dict] = None, *, strict: bool = False) -> FESolution:
    """Power-series solution of f(R(t)) = a(t) f(t) + b(t) to the given order.

    ``a`` and ``b`` may be rational functions regular at 0 or series; the
    guaranteed order is lowered when a series input is too short.
    Resonant coefficients with vanishing forcing take their value from
    ``normalization`` (default 0). On an obstruction the result carries no
    series, unless ``strict`` is set, in which case Obstructed is raised.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    normalization = {int(k): as_fraction(v) for k, v in (normalization or {}).items()}
    res = _resonance(R, a)
    s = res.shift
    n_rows = order + s
    As = _as_series(a, n_rows)
    Bs = _as_series(b, n_rows)
    n_y = min(order, As.order - s, Bs.order - s)
    if n_y < 0:
        raise ValueError("a and b are not known to enough precision")
    n_rows = n_y + s
    Rs = _map_series(R, n_rows)
    if Rs.order < n_rows:
        n_y = Rs.order - s
        n_rows = Rs.order
    cols = _power_columns(Rs, n_rows)
    acoef, bcoef = As.coeffs, Bs.coeffs

    for n in range(s):
        if bcoef[n]:
            msg = f"row {n} reads 0 = {format_rational(bcoef[n])}"
            if strict:
                raise Obstructed(n, msg)
            return FESolution(None, [], [n], s, msg)

    y: list = []
    free = []
    for k in range(n_y + 1):
        n = k + s
        forcing = bcoef[n]
        for j in range(k):
            yj = y[j]
            if yj:
                e = (_coeff(cols[j], n) if j < len(cols) else 0) - acoef[n - j]
                if e:
                    forcing -= e * yj
        lam = res.weight(k)
        if lam:
            y.append(forcing / lam)
        elif forcing == 0:
            y.append(normalization.get(k, Fraction(0)))
            free.append(k)
        else:
            msg = f"resonant index {k} has forcing {format_rational(forcing)}"
            if strict:
                raise Obstructed(k, msg)
            return FESolution(None, free, [k], s, msg)
    stray = sorted(k for k in normalization if k not in free and k <= n_y)
    if stray:
        raise ValueError(f"normalization given for non-free indices {stray}")
    return FESolution(Series(y, n_y), free, [], s)


# contractive form ------------------------------------------------------------------


def solve_fe_contractive(R, c, d, order: int) -> Series:
    """Unique solution of y = c(t) y(R(t)) + d(t), valid when the right side is contractive."""
    Cs = _as_series(c, order)
    Ds = _as_series(d, order)
    vR = _map_valuation(R)
    vc = Cs.valuation
    if vc is not None and vc == 0 and vR < 2:
        raise NotContractive("need valuation(c) >= 1 or valuation(R) >= 2")
    n_y = min(order, Cs.order, Ds.order)
    if vc is None and Cs.order >= n_y:
        return Ds.truncate(n_y)
    Rs = _map_series(R, n_y)
    n_y = min(n_y, Rs.order)
    cols = _power_columns(Rs, n_y)
    # crow[k][n] = [t^n] c * R^k
    crow = [kernels.mul_trunc(Cs.coeffs, col, n_y) for col in cols]
    y = []
    for n in range(n_y + 1):
        acc = Ds.coeffs[n]
        for k in range(min(n, len(crow))):
            if y[k]:
                acc += y[k] * _coeff(crow[k], n)
        if n == 0 and vc == 0:
            c0 = Cs.coeffs[0]
            if c0 != 1:
                acc = Ds.coeffs[0] / (1 - c0)
            elif Ds.coeffs[0] == 0:
                acc = Fraction(0)
            else:
                raise Obstructed(0, "constant term: y0 = y0 + d0 with d0 != 0")
        y.append(acc)
    return Series(y, n_y)


# verification ----------------------------------------------------------------------


def _pole_order(x) -> int:
    if isinstance(x, Series):
        return 0
    x = as_ratfunc(x)
    return x.den.valuation or 0


def _shifted_series(x, k: int, order: int) -> Series:
    """t^k x as a series (k at least the pole order of x at 0)."""
    if isinstance(x, Series):
        return x.mul_t_power(k) if k else x
    x = as_ratfunc(x)
    return Series.from_ratfunc(x * RationalFunction(Polynomial.monomial(k)), order)


def fe_residual(R, a, b, f: Series):
    """(k, t^k (f(R) - a f - b)) where k clears the poles of a and b at 0."""
    v = _map_valuation(R)
    n_r = (f.order + 1) * v
    Rs = _map_series(R, n_r)
    k = max(_pole_order(a), _pole_order(b))
    phi = series_compose(f, Rs)
    lhs = phi.mul_t_power(k) if k else phi
    At = _shifted_series(a, k, n_r + k)
    Bt = _shifted_series(b, k, n_r + k)
    return k, lhs - At * f - Bt


def verify_fe(R, a, b, f: Series) -> int:
    """Largest n such that f(R) - a f - b vanishes through t^n (-1 if not even at t^0)."""
    k, res = fe_residual(R, a, b, f)
    v = res.valuation
    top = res.order if v is None else v - 1
    return top - k


def verify_fe_contractive(R, c, d, y: Series) -> int:
    """Largest n such that y - c y(R) - d vanishes through t^n (-1 if not even at t^0)."""
    v = _map_valuation(R)
    n_r = (y.order + 1) * v
    Rs = _map_series(R, n_r)
    res = y - _as_series(c, n_r) * series_compose(y, Rs) - _as_series(d, n_r)
    first = res.valuation
    return res.order if first is None else first - 1


# Boettcher and Julia functions -------------------------------------------------------


def _integer_root(n: int, k: int) -> Optional[int]:
    if n < 0:
        return None
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x ** k == n else None


def exact_root(x, k: int) -> Optional[Fraction]:
    """A rational k-th root of x (the positive one when k is even), or None."""
    x = as_fraction(x)
    if k == 1:
        return x
    sign = 1
    if x < 0:
        if k % 2 == 0:
            return None
        sign, x = -1, -x
    p = _integer_root(x.numerator, k)
    q = _integer_root(x.denominator, k)
    if p is None or q is None:
        return None
    return sign * Fraction(p, q)


def boettcher(R, order: int) -> Series:
    """tau = u t + O(t^2) with tau(R(t)) = tau(t)^d and u^(d-1) = r_d."""
    md = multiplier_data(R)
    d = md.d
    if d < 2:
        raise ValueError("Boettcher coordinates need a zero of order d >= 2 at 0")
    rd = leading_coefficient_at_zero(R)
    u = exact_root(rd, d - 1)
    if u is None:
        raise GroundFieldExtensionRequired(f"u^{d - 1} = {format_rational(rd)} has no rational root u; the normalization needs a field extension")
    if order < 0:
        raise ValueError("order must be >= 0")
    if order == 0:
        return Series.zero(0)
    n_h = order - 1  # tau = u t h(t), h = 1 + O(t)
    Rs = Series.from_ratfunc(R, n_h + d)
    g = Rs.div_t_power(d).scale(1 / rd)  # R = r_d t^d g
    cols = _power_columns(Rs.truncate(n_h), n_h)
    h = [Fraction(1)]
    P = [Fraction(1)]  # coefficients of h^d
    H = [Fraction(1)]  # coefficients of h(R)
    for n in range(1, n_h + 1):
        # [t^n] h(R) only involves h_k with d k <= n
        H.append(sum((h[k] * _coeff(cols[k], n) for k in range(1, len(cols)) if k * d <= n), Fraction(0)))
        A = sum((g.coeffs[j] * H[n - j] for j in range(n + 1)), Fraction(0))
        B = sum((((d + 1) * k - n) * h[k] * P[n - k] for k in range(1, n)), Fraction(0)) / n
        h.append((A - B) / d)
        P.append(A)
    return Series([0] + [u * x for x in h], order)


def julia_psi_details(R, order: int, *, nonresonant: bool = False):
    """(psi, k): the normalized Julia function of R^k with k the iterate actually used."""
    R = as_ratfunc(R)
    md = multiplier_data(R)
    if md.d >= 2:
        tau = boettcher(R, order + 1)
        psi = tau.div_t_power(1) / differentiate(tau)
        psi = psi.mul_t_power(1).truncate(order)
        return _normalize(psi), 1
    k = 1
    if md.r1 == -1:
        R = ratfunc_compose(R, R)
        k = 2
    elif md.r1 != 1 and not nonresonant:
        raise UnsupportedMultiplier(f"R'(0) = {format_rational(md.r1)}; pass nonresonant=True to opt in")
    Rp = R.derivative()
    if multiplier_data(R).r1 == 1:
        p = _first_nonlinear(R)
        sol = solve_fe_standard(R, Rp, 0, order, {p: 1})
    else:
        sol = solve_fe_standard(R, Rp, 0, order, {1: 1})
    if not sol.ok:
        raise Obstructed(sol.obstructions[0], sol.message)
    return _normalize(sol.series), k


def _normalize(psi: Series) -> Series:
    v = psi.valuation
    if v is None:
        return psi
    return psi.scale(1 / psi.coeffs[v])


def julia_psi(R, order: int, *, nonresonant: bool = False) -> Series:
    """Normalized psi with psi(R) = (R'/d) psi, where R is replaced by R∘R when R'(0) = -1."""
    return julia_psi_details(R, order, nonresonant=nonresonant)[0]


# polynomial and rational solutions ------------------------------------------------------


def _clear(R, a, b, deg_bound: int):
    """Columns and right-hand side of the den-cleared system for polynomial y."""
    R, a, b = as_ratfunc(R), as_ratfunc(a), as_ratfunc(b)
    P, Q = R.num, R.den
    D = deg_bound
    common = a.den * b.den
    qD = Q ** D
    cols = []
    ppow = Polynomial.constant(1)
    qpows = [Polynomial.constant(1)]
    for _ in range(D):
        qpows.append(qpows[-1] * Q)
    anb = a.num * b.den * qD
    for i in range(D + 1):
        cols.append(ppow * qpows[D - i] * common - anb.shift(i))
        ppow = ppow * P
    rhs = b.num * a.den * qD
    return cols, rhs


def polynomial_solution_space(R, a, b, deg_bound: int = DEFAULT_DEG_BOUND):
    """(particular, basis) for polynomial solutions of degree <= deg_bound, or None.

    ``particular`` has minimal degree; ``basis`` spans the polynomial
    solutions of the homogeneous equation.
    """
    cols, rhs = _clear(R, a, b, deg_bound)
    n_rows = max([c.degree for c in cols] + [rhs.degree, 0]) + 1
    rows = [[c.coeff(m) for c in cols] for m in range(n_rows)]
    found = solve_affine(rows, [rhs.coeff(m) for m in range(n_rows)], deg_bound + 1)
    if found is None:
        return None
    particular, basis = found
    basis = _echelon_by_degree(basis)
    for vec in basis:
        lead = max(i for i, x in enumerate(vec) if x)
        if particular[lead]:
            f = particular[lead]
            particular = [x - f * y for x, y in zip(particular, vec)]
    return Polynomial(particular), [Polynomial(v) for v in basis]


def _echelon_by_degree(vectors):
    """Basis with distinct leading (highest) indices, each lead normalized to 1, by decreasing lead."""
    out = []
    rest = [list(v) for v in vectors]
    while rest:
        leads = [max((i for i, x in enumerate(v) if x), default=-1) for v in rest]
        top = max(leads)
        if top < 0:
            break
        j = leads.index(top)
        piv = rest.pop(j)
        piv = [x / piv[top] for x in piv]
        rest = [[x - v[top] * y for x, y in zip(v, piv)] for v in rest]
        out.append(piv)
    return out


def find_polynomial_solution(R, a, b, deg_bound: int = DEFAULT_DEG_BOUND) -> Optional[Polynomial]:
    found = polynomial_solution_space(R, a, b, deg_bound)
    return None if found is None else found[0]


def is_exact_solution(R, a, b, f) -> bool:
    R, a, b, f = as_ratfunc(R), as_ratfunc(a), as_ratfunc(b), as_ratfunc(f)
    return ratfunc_compose(f, R) == a * f + b


def rational_reconstructions(S: Series, max_degree: int):
    """Candidates U/V with deg U, deg V <= max_degree and S = U/V + O(t^(N+1)), by extended Euclid."""
    N = S.order
    r0, r1 = Polynomial.monomial(N + 1), S.to_polynomial()
    s0, s1 = Polynomial(), Polynomial.constant(1)
    out = []
    while r1:
        if r1.degree <= max_degree and s1.degree <= max_degree and s1.coeff(0) != 0:
            out.append(RationalFunction(r1, s1))
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    return out


def find_rational_solution(R, a, b, deg_bound: int = 12) -> Optional[RationalFunction]:
    """A verified rational solution with numerator and denominator degree <= deg_bound, or None.

    Polynomials come from the exact linear system; other candidates from a
    rational reconstruction of the power-series solution. Absence is only
    a statement about these bounds.
    """
    poly = find_polynomial_solution(R, a, b, deg_bound)
    if poly is not None:
        return RationalFunction(poly)
    a_rf, b_rf = as_ratfunc(a), as_ratfunc(b)
    if a_rf.den.coeff(0) == 0 or b_rf.den.coeff(0) == 0:
        return None
    try:
        sol = solve_fe_standard(R, a_rf, b_rf, 2 * deg_bound + 2)
    except (ValueError, ZeroDivisionError):
        return None
    if not sol.ok:
        return None
    for cand in rational_reconstructions(sol.series, deg_bound):
        if is_exact_solution(R, a_rf, b_rf, cand):
            return cand
    return None


# multiplicative (algebraic power) solutions ----------------------------------------------


@dataclass(frozen=True)
class MultiplicativeSolution:
    """a = c * prod s_i^lambda_i with s_i = (R - a_i)/(t - a_i)."""

    points: tuple
    exponents: tuple
    scalar: Fraction
    N: int

    def factors(self, R):
        R = as_ratfunc(R)
        t = RationalFunction.t()
        return [(R - p) / (t - p) for p in self.points]

    def identity_holds(self, R, a) -> bool:
        """Exact check of a^N = c^N prod s_i^(N lambda_i)."""
        rhs = RationalFunction.constant(self.scalar ** self.N)
        for s, lam in zip(self.factors(R), self.exponents):
            rhs = rhs * s ** int(lam * self.N)
        return as_ratfunc(a) ** self.N == rhs

    def witness(self) -> RationalFunction:
        """f^N for f = t^lambda_0 prod (1 - t/a_i)^lambda_i (lambda_0 for the point 0)."""
        out = RationalFunction.constant(1)
        for p, lam in zip(self.points, self.exponents):
            e = int(lam * self.N)
            base = RationalFunction.t() if p == 0 else RationalFunction(Polynomial((1, -1 / p)))
            out = out * base ** e
        return out

    def series(self, order: int) -> Series:
        """f = t^lambda_0 prod (1 - t/a_i)^lambda_i expanded with binomial series."""
        shift = 0
        out = Series.constant(1, order)
        for p, lam in zip(self.points, self.exponents):
            if p == 0:
                shift = int(lam)
                continue
            out = out * binomial_series(lam, -1 / p, order)
        if shift < 0:
            raise ValueError("solution has a pole at 0")
        return out.mul_t_power(shift).truncate(order) if shift else out

    def to_json(self) -> dict:
        return {
            "points": [format_rational(p) for p in self.points],
            "exponents": [format_rational(x) for x in self.exponents],
            "scalar": format_rational(self.scalar),
            "N": self.N,
            "witness": str(self.witness()),
        }


def binomial_series(lam, z, order: int) -> Series:
    """(1 + z t)^lam to the given order, lam rational."""
    lam, z = as_fraction(lam), as_fraction(z)
    coeffs = [Fraction(1)]
    c = Fraction(1)
    for n in range(1, order + 1):
        c = c * (lam - n + 1) / n * z
        coeffs.append(c)
    return Series(coeffs, order)


def default_candidate_points(R, a) -> list:
    """Roots of a's numerator and denominator, fixed points of R and their one-step neighbours."""
    R, a = as_ratfunc(R), as_ratfunc(a)
    pts = set()
    for poly in (a.num, a.den):
        if poly.degree > 0:
            pts.update(r for r, _ in rational_roots(poly).roots)
    try:
        fix = [p for p in fixed_points(R) if p is not INF]
    except ValueError:
        fix = []
    pts.update(fix)
    for p in fix:
        pts.update(x for x in preimages(R, p) if x is not INF)
        img = R.evaluate_p1(p)
        if img is not INF:
            pts.add(img)
    return sorted(pts)


def _lowest_coefficient(rf: RationalFunction) -> Fraction:
    n, d = rf.num, rf.den
    return n.coeff(n.valuation) / d.coeff(d.valuation)


def find_multiplicative_solution(
    R, a, candidate_points=None, exponent_denominator_bound: int = DEFAULT_DENOMINATOR_BOUND
) -> Optional[MultiplicativeSolution]:
    """Exponents lambda with a'/a = sum lambda_i s_i'/s_i, verified as a^N = c^N prod s_i^(N lambda_i)."""
    R, a = as_ratfunc(R), as_ratfunc(a)
    if not a:
        raise ZeroInput("a must be nonzero")
    if candidate_points is None:
        candidate_points = default_candidate_points(R, a)
    points = sorted({as_fraction(p) for p in candidate_points})
    t = RationalFunction.t()
    factors = [(R - p) / (t - p) for p in points]
    target = ratfunc_log_derivative(a)
    logs = [ratfunc_log_derivative(s) if s else None for s in factors]
    keep = [i for i, L in enumerate(logs) if L is not None]
    points = [points[i] for i in keep]
    factors = [factors[i] for i in keep]
    logs = [logs[i] for i in keep]
    den = Polynomial.constant(1)
    for rf in [target] + logs:
        den = den * rf.den.exact_div(Polynomial.gcd(den, rf.den))
    lhs = target.num * den.exact_div(target.den)
    cols = [L.num * den.exact_div(L.den) for L in logs]
    n_rows = max([c.degree for c in cols] + [lhs.degree, 0]) + 1
    rows = [[c.coeff(m) for c in cols] for m in range(n_rows)]
    found = solve_affine(rows, [lhs.coeff(m) for m in range(n_rows)], len(cols))
    if found is None:
        return None
    lam = found[0]
    if any(x.denominator > exponent_denominator_bound for x in lam):
        return None
    pairs = [(p, x) for p, x in zip(points, lam) if x]
    if any(p == 0 and x.denominator != 1 for p, x in pairs):
        return None
    N = 1
    for _, x in pairs:
        N = lcm(N, x.denominator)
    c = _lowest_coefficient(a)
    for p, x in pairs:
        if p == 0:
            c = c / leading_coefficient_at_zero(R) ** int(x)
    sol = MultiplicativeSolution(tuple(p for p, _ in pairs), tuple(x for _, x in pairs), c, N)
    if not sol.identity_holds(R, a):
        return None
    return sol

