"""Local and global dynamics of a rational map R over Q with R(0) = 0.

Covers the multiplier at 0, the check that no iterate of R is the identity,
critical portraits with exact orbit iteration, interval certificates for
infinite post-critical sets, Chebyshev polynomials and the search for a
homography conjugating R to t^d or to +-T_d.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import NotFixingZero, ZeroInput
from .exact import (
    INF,
    Homography,
    Polynomial,
    RationalFunction,
    as_fraction,
    as_ratfunc,
    format_p1,
    format_rational,
    p1_sort_key,
    ratfunc_compose,
    rational_roots,
)

SUPERATTRACTING = "Superattracting"
UNIT = "UnitMultiplier"
NEG_UNIT = "NegUnitMultiplier"
OTHER = "OtherMultiplier"


@dataclass(frozen=True)
class MultiplierData:
    d: int
    r1: Fraction
    kind: str

    def to_json(self):
        return {"d": self.d, "r1": format_rational(self.r1), "class": self.kind}


def _check_fixes_zero(R: RationalFunction):
    if not R:
        raise ZeroInput("R must be nonzero")
    if R.den.coeff(0) == 0:
        raise NotFixingZero(f"R = {R} has a pole at 0")
    if R.num.coeff(0) != 0:
        raise NotFixingZero(f"R(0) = {format_rational(R(Fraction(0)))} != 0")


def multiplier_data(R) -> MultiplierData:
    R = as_ratfunc(R)
    _check_fixes_zero(R)
    d = R.num.valuation
    r1 = R.num.coeff(1) / R.den.coeff(0)
    if d >= 2:
        kind = SUPERATTRACTING
    elif r1 == 1:
        kind = UNIT
    elif r1 == -1:
        kind = NEG_UNIT
    else:
        kind = OTHER
    return MultiplierData(d, r1, kind)


def leading_coefficient_at_zero(R) -> Fraction:
    """r_d, the coefficient of t^d in the expansion of R at 0."""
    R = as_ratfunc(R)
    d = R.num.valuation
    return R.num.coeff(d) / R.den.coeff(0)


# assumption check ---------------------------------------------------------------


@dataclass(frozen=True)
class AssumptionStatus:
    kind: str  # Satisfied | Violated | OtherMultiplierCase
    reason: str
    iterate: Optional[int] = None

    @property
    def satisfied(self) -> bool:
        return self.kind == "Satisfied"

    def to_json(self):
        out = {"status": self.kind, "reason": self.reason}
        if self.iterate is not None:
            out["iterate"] = self.iterate
        return out


def _mobius_matrix(R: RationalFunction):
    return (R.num.coeff(1), R.num.coeff(0), R.den.coeff(1), R.den.coeff(0))


def _matmul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def check_assumption_R(R, iterate_budget: int = 12) -> AssumptionStatus:
    """Decide whether R fixes 0, has an admissible multiplier and no identity iterate."""
    R = as_ratfunc(R)
    try:
        md = multiplier_data(R)
    except (NotFixingZero, ZeroInput) as exc:
        return AssumptionStatus("Violated", str(exc))
    if md.kind == OTHER:
        return AssumptionStatus(
            "OtherMultiplierCase", f"R'(0) = {format_rational(md.r1)} is neither 0 nor a root of unity"
        )
    if R.degree >= 2:
        return AssumptionStatus("Satisfied", f"map degree {R.degree} >= 2 grows under iteration")
    # Moebius case: the iterate R^k is the identity iff the matrix power is scalar
    m = _mobius_matrix(R)
    power = m
    for k in range(1, iterate_budget + 1):
        a, b, c, d = power
        if b == 0 and c == 0 and a == d:
            return AssumptionStatus("Violated", f"R^{k} = t", k)
        power = _matmul(power, m)
    # elements of finite order in PGL2(Q) have order 1, 2, 3, 4 or 6
    if iterate_budget >= 6:
        return AssumptionStatus("Satisfied", "Moebius map of infinite order (finite orders over Q divide 4 or 6)")
    return AssumptionStatus("Satisfied", f"no identity iterate up to k = {iterate_budget}")


def chebyshev(d: int) -> Polynomial:
    if d < 0:
        raise ValueError("Chebyshev index must be >= 0")
    prev, cur = Polynomial.constant(1), Polynomial.t()
    if d == 0:
        return prev
    two_t = Polynomial((0, 2))
    for _ in range(d - 1):
        prev, cur = cur, two_t * cur - prev
    return cur


# P^1 helpers ---------------------------------------------------------------------


def fixed_points(R) -> list:
    """Rational fixed points of R on P^1(Q), INF last."""
    R = as_ratfunc(R)
    poly = R.num - Polynomial.t() * R.den
    if not poly:
        raise ValueError("every point is fixed by the identity map")
    pts = [r for r, _ in rational_roots(poly).roots]
    if R.evaluate_p1(INF) is INF:
        pts.append(INF)
    return pts


def preimages(R, y) -> list:
    """Rational preimages of y under R on P^1(Q)."""
    R = as_ratfunc(R)
    poly = R.den if y is INF else R.num - R.den * as_fraction(y)
    pts = [r for r, _ in rational_roots(poly).roots] if poly else []
    at_inf = R.evaluate_p1(INF)
    if at_inf is y or (at_inf is not INF and y is not INF and at_inf == y):
        pts.append(INF)
    return sorted(set(pts), key=p1_sort_key)


def _height_bits(x) -> int:
    if x is INF:
        return 0
    return x.numerator.bit_length() + x.denominator.bit_length()


# interval certificates -------------------------------------------------------------


def _lower_bound(p: Polynomial, lo: Fraction, hi: Fraction) -> Fraction:
    """Monomial-wise lower bound of p on [lo, hi] with 0 <= lo."""
    total = Fraction(0)
    for i, c in enumerate(p.coeffs):
        total += c * (lo ** i if c > 0 else hi ** i)
    return total


def _positive_pieces(p: Polynomial, c: Fraction, max_depth: int = 14):
    """Subdivision of [0, c] on whose pieces the monomial bound of p is positive, or None."""
    pieces = []
    stack = [(Fraction(0), c, 0)]
    while stack:
        lo, hi, depth = stack.pop()
        if _lower_bound(p, lo, hi) > 0:
            pieces.append((lo, hi))
            continue
        if depth >= max_depth:
            return None
        mid = (lo + hi) / 2
        stack.append((mid, hi, depth + 1))
        stack.append((lo, mid, depth + 1))
    pieces.sort()
    return pieces


def _strip_t(p: Polynomial):
    v = p.valuation or 0
    return Polynomial(p.coeffs[v:])


def _certificate_polys(R: RationalFunction, side: int):
    """Polynomials in y > 0 that must be positive for 0 < R(x)/x < 1 at x = side*y."""
    flip = Polynomial((0, side))
    h_num = Polynomial(R.num.coeffs[1:])  # N/t, exact since N(0) = 0
    den = R.den.compose(flip)
    num = h_num.compose(flip)
    return den, num


def _check_pieces(p: Polynomial, pieces, c: Fraction) -> bool:
    """The pieces tile [0, c] and the monomial bound of p is positive on each."""
    if not pieces or pieces[0][0] != 0 or pieces[-1][1] != c:
        return False
    if any(hi != lo for (_, hi), (lo, _) in zip(pieces, pieces[1:])):
        return False
    return all(lo < hi and _lower_bound(p, lo, hi) > 0 for lo, hi in pieces)


def _try_interval(R: RationalFunction, v: Fraction, c: Fraction):
    side = 1 if v > 0 else -1
    den, num = _certificate_polys(R, side)
    sign = 1 if den.coeff(0) > 0 else -1
    conditions = [
        ("denominator of R has constant sign on I", den * sign),
        ("R(x)/x > 0 on I", num * sign),
        ("R(x)/x < 1 on I", (den - num) * sign),
    ]
    inequalities = []
    for label, poly in conditions:
        q = _strip_t(poly)
        if not q or q.coeff(0) <= 0:
            return None
        pieces = _positive_pieces(q, c)
        if pieces is None:
            return None
        inequalities.append({"claim": label, "polynomial": str(q), "pieces": pieces})
    return side, sign, inequalities


def _interval_json(side: int, c: Fraction):
    lo, hi = (Fraction(0), c) if side > 0 else (-c, Fraction(0))
    return [format_rational(lo), format_rational(hi)]


def find_interval_certificate(R, orbit_points, max_points: int = 6) -> Optional[dict]:
    """Search an interval I around 0 with 0 < R(x)/x < 1 on I containing an orbit point.

    On such an I, R maps I into itself and strictly decreases |x|, so the
    orbit of a point of I never repeats.
    """
    R = as_ratfunc(R)
    tried = 0
    for index, v in enumerate(orbit_points):
        if v is INF or v == 0:
            continue
        if tried >= max_points:
            break
        tried += 1
        for j in range(5):
            c = abs(v) * (1 + Fraction(1, 2 ** j))
            found = _try_interval(R, v, c)
            if found is None:
                continue
            side, sign, inequalities = found
            return {
                "kind": "contracting-interval",
                "interval": _interval_json(side, c),
                "orbit_point": format_rational(v),
                "orbit_index": index,
                "variable": "x = y" if side > 0 else "x = -y",
                "denominator_sign": sign,
                "inequalities": [
                    {
                        "claim": q["claim"],
                        "polynomial_in_y": q["polynomial"],
                        "positive_on_pieces": [[format_rational(lo), format_rational(hi)] for lo, hi in q["pieces"]],
                    }
                    for q in inequalities
                ],
            }
    return None


def replay_certificate(R, certificate: dict) -> bool:
    """Re-check an interval certificate from its JSON form, without any search."""
    R = as_ratfunc(R)
    lo, hi = (Fraction(x) for x in certificate["interval"])
    v = Fraction(certificate["orbit_point"])
    side = 1 if lo == 0 else -1
    c = hi if side > 0 else -lo
    if c <= 0 or not (lo < v < hi):
        return False
    den, num = _certificate_polys(R, side)
    sign = certificate["denominator_sign"]
    expected = [den * sign, num * sign, (den - num) * sign]
    if len(certificate["inequalities"]) != 3:
        return False
    for poly, entry in zip(expected, certificate["inequalities"]):
        q = _strip_t(poly)
        if str(q) != entry["polynomial_in_y"] or not q or q.coeff(0) <= 0:
            return False
        pieces = [(Fraction(a), Fraction(b)) for a, b in entry["positive_on_pieces"]]
        if not _check_pieces(q, pieces, c):
            return False
    return True


# critical portrait -----------------------------------------------------------------


@dataclass
class OrbitReport:
    critical_points: list  # (Fraction, multiplicity)
    critical_at_infinity: int
    irrational_critical_count: int
    critical_values: list  # points of P^1(Q)
    orbits: dict  # critical value -> list of iterates (starting with the value)
    status: str  # FiniteP | InfiniteCertified | Unknown
    portrait: list = field(default_factory=list)  # cycles, for FiniteP
    certificate: Optional[dict] = None
    reason: str = ""

    @property
    def postcritical_set(self) -> list:
        """Finite points of P(R) seen so far (INF is reported by ``includes_infinity``)."""
        pts = {x for orbit in self.orbits.values() for x in orbit if x is not INF}
        return sorted(pts)

    @property
    def includes_infinity(self) -> bool:
        return any(x is INF for orbit in self.orbits.values() for x in orbit)

    def to_json(self) -> dict:
        out = {
            "critical_points": [[format_rational(x), m] for x, m in self.critical_points],
            "critical_at_infinity": self.critical_at_infinity,
            "irrational_critical_count": self.irrational_critical_count,
            "critical_values": [format_p1(v) for v in self.critical_values],
            "orbits": [
                {"value": format_p1(v), "iterates": [format_p1(x) for x in self.orbits[v]]}
                for v in self.critical_values
            ],
            "status": self.status,
        }
        if self.status == "FiniteP":
            out["postcritical_set"] = [format_rational(x) for x in self.postcritical_set]
            out["includes_infinity"] = self.includes_infinity
            out["portrait"] = [[format_p1(x) for x in cyc] for cyc in self.portrait]
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.reason:
            out["reason"] = self.reason
        return out


def _iterate_orbit(R: RationalFunction, v, max_iter: int, height_bits: int):
    """Orbit prefix of v and its cycle (None if no repetition within the budget)."""
    seen = {}
    orbit = []
    x = v
    for _ in range(max_iter + 1):
        if x in seen:
            start = seen[x]
            return orbit, orbit[start:]
        seen[x] = len(orbit)
        orbit.append(x)
        if _height_bits(x) > height_bits:
            return orbit, None
        x = R.evaluate_p1(x)
    return orbit, None


def critical_portrait(R, max_iter: int = 64, height_bits: int = 512) -> OrbitReport:
    R = as_ratfunc(R)
    if R.degree < 1:
        raise ValueError("critical portrait needs a nonconstant map")
    w = R.num.derivative() * R.den - R.num * R.den.derivative()
    found = rational_roots(w) if w else None
    crit = list(found.roots) if found else []
    irrational = found.remainder_degree if found else 0
    at_inf = 2 * R.degree - 2 - w.degree
    values = {R.evaluate_p1(x) for x, _ in crit}
    if at_inf > 0:
        values.add(R.evaluate_p1(INF))
    values = sorted(values, key=p1_sort_key)
    orbits = {}
    cycles = []
    open_orbits = []
    for v in values:
        orbit, cycle = _iterate_orbit(R, v, max_iter, height_bits)
        orbits[v] = orbit
        if cycle is None:
            open_orbits.append(v)
        else:
            key = tuple(sorted(cycle, key=p1_sort_key))
            if all(tuple(sorted(c, key=p1_sort_key)) != key for c in cycles):
                cycles.append(cycle)
    report = OrbitReport(crit, max(at_inf, 0), irrational, values, orbits, "Unknown")
    if open_orbits:
        for v in open_orbits:
            cert = find_interval_certificate(R, orbits[v])
            if cert is not None:
                cert["critical_value"] = format_p1(v)
                report.status = "InfiniteCertified"
                report.certificate = cert
                report.reason = "orbit strictly decreases in modulus inside an invariant interval"
                return report
        report.reason = f"orbit budget exhausted (max_iter={max_iter}, height_bits={height_bits})"
        return report
    if irrational:
        report.reason = f"{irrational} irrational critical point(s) not iterated"
        return report
    report.status = "FiniteP"
    report.portrait = cycles
    return report


# conjugacy search ------------------------------------------------------------------


@dataclass(frozen=True)
class ConjugacyResult:
    kind: str  # Monomial | ChebyshevPlus | ChebyshevMinus | None | Unknown
    m: Optional[Homography]
    verified: bool
    reason: str = ""

    def to_json(self):
        return {
            "kind": self.kind,
            "m": None if self.m is None else str(self.m),
            "matrix": None if self.m is None else self.m.to_json(),
            "verified": self.verified,
            "reason": self.reason,
        }


def _try_homography(R, target, zero, inf, one):
    pts = [zero, inf, one]
    for i in range(3):
        for j in range(i + 1, 3):
            if pts[i] is pts[j] or (pts[i] is not INF and pts[j] is not INF and pts[i] == pts[j]):
                return None
    try:
        m = Homography.through_points(zero, inf, one)
    except ValueError:
        return None
    mf = m.as_ratfunc()
    if ratfunc_compose(R, mf) == ratfunc_compose(mf, target):
        return m
    return None


def _homography_from(images):
    """Homography sending INF, 1, -1 to the three given points."""
    inf_img, one_img, minus_img = images
    base = Homography.through_points(minus_img, inf_img, one_img)
    # (t+1)/2 sends -1, INF, 1 to 0, INF, 1
    return base.compose(Homography(Fraction(1, 2), Fraction(1, 2), 0, 1))


def find_conjugating_homography(R, max_iter: int = 64) -> ConjugacyResult:
    """Rational m with R∘m = m∘t^d or R∘m = m∘(+-T_d), with 0 corresponding to a fully ramified point."""
    R = as_ratfunc(R)
    md = multiplier_data(R)
    if md.d < 2:
        raise ValueError("conjugacy search needs a superattracting fixed point (d >= 2)")
    d = md.d
    report = critical_portrait(R, max_iter=max_iter)
    if report.status == "InfiniteCertified":
        return ConjugacyResult("None", None, False, "post-critical set is infinite; t^d and T_d are post-critically finite")
    if R.degree != d:
        return ConjugacyResult(
            "None", None, False, f"map degree {R.degree} differs from the local degree {d} at 0"
        )
    fix = fixed_points(R)
    mono = RationalFunction(Polynomial.monomial(d))
    for e in fix:
        if e == 0:
            continue
        for one in fix:
            for zero, inf in ((Fraction(0), e), (e, Fraction(0))):
                m = _try_homography(R, mono, zero, inf, one)
                if m is not None:
                    return ConjugacyResult("Monomial", m, True, f"R(m(t)) = m(t^{d})")
    tcheb = RationalFunction(chebyshev(d))
    for kind, target in (("ChebyshevPlus", tcheb), ("ChebyshevMinus", -tcheb)):
        for m in _chebyshev_candidates(R, d, kind == "ChebyshevPlus", fix):
            mf = m.as_ratfunc()
            if ratfunc_compose(R, mf) == ratfunc_compose(mf, target):
                sign = "" if kind == "ChebyshevPlus" else "-"
                return ConjugacyResult(kind, m, True, f"R(m(t)) = m({sign}T_{d}(t))")
    return ConjugacyResult("Unknown", None, False, "no rational homography found; irrational conjugacies not excluded")


def _chebyshev_candidates(R, d: int, plus: bool, fix):
    """Homographies with m(INF) = 0 and m(+-1) placed on the orbit pattern of +-T_d."""
    pairs = []
    if plus:
        for p in fix:
            if d % 2 == 0:
                pairs.extend((p, q) for q in preimages(R, p))
            else:
                pairs.extend((p, q) for q in fix)
    else:
        if d % 2 == 0:
            for q in fix:
                pairs.extend((p, q) for p in preimages(R, q))
        else:
            for p in fixed_points(ratfunc_compose(R, R)):
                pairs.append((p, R.evaluate_p1(p)))
    seen = set()
    for one_img, minus_img in pairs:
        pts = (Fraction(0), one_img, minus_img)
        if len({p1_sort_key(x) for x in pts}) < 3:
            continue
        key = tuple(p1_sort_key(x) for x in pts)
        if key in seen:
            continue
        seen.add(key)
        try:
            yield _homography_from(pts)
        except ValueError:
            continue
