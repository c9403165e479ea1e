"""Dispatch from (R, a, b) to the strongest verdict the dichotomies support.

Outcomes, strongest first:

* ``Rational``: a verified rational solution exists.
* ``AlgebraicPower``: f^N is rational for a verified multiplicative solution.
* ``DiffTranscendental``: every hypothesis checked, rational and algebraic
  branches excluded (or excluded by an explicit external assertion).
* ``RiccatiResidual``: the residual first-order case f' = alpha f + beta of
  the general dichotomy could not be excluded.
* ``Conditional``: a bounded search came back empty; the gap is named.
* ``Unknown``: the hypotheses on R fail or fall outside the theory.

Every verdict carries an ordered list of (hypothesis, evidence) pairs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .dynamics import (
    SUPERATTRACTING,
    check_assumption_R,
    critical_portrait,
    find_conjugating_homography,
    multiplier_data,
)
from .exact import RationalFunction, as_ratfunc, format_rational
from .funceq import (
    DEFAULT_DENOMINATOR_BOUND,
    find_multiplicative_solution,
    find_rational_solution,
    solve_fe_standard,
    verify_fe,
)

SCHEMA = 1


@dataclass
class ClassifyOptions:
    external_nonalgebraic: bool = False
    deg_bound: int = 12
    denominator_bound: int = DEFAULT_DENOMINATOR_BOUND
    candidate_points: Optional[list] = None
    series_order: int = 20
    include_dynamics: bool = True

    def to_json(self) -> dict:
        return {
            "external_nonalgebraic": self.external_nonalgebraic,
            "deg_bound": self.deg_bound,
            "denominator_bound": self.denominator_bound,
            "candidate_points": None
            if self.candidate_points is None
            else [format_rational(p) for p in self.candidate_points],
            "series_order": self.series_order,
            "include_dynamics": self.include_dynamics,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ClassifyOptions":
        from fractions import Fraction

        data = dict(data)
        if data.get("candidate_points") is not None:
            data["candidate_points"] = [Fraction(p) for p in data["candidate_points"]]
        return cls(**data)


@dataclass
class Verdict:
    outcome: str
    witness: Optional[RationalFunction] = None
    N: Optional[int] = None
    detail: str = ""
    certificate: list = field(default_factory=list)
    inputs: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "outcome": self.outcome,
            "witness": None if self.witness is None else str(self.witness),
            "N": self.N,
            "detail": self.detail,
            "certificate": [{"hypothesis": h, "evidence": e} for h, e in self.certificate],
            "inputs": self.inputs,
        }


def certify_hypotheses(R, include_dynamics: bool = True) -> list:
    """Audit trail for the standing assumptions on R."""
    R = as_ratfunc(R)
    out = []
    try:
        md = multiplier_data(R)
    except ValueError as exc:
        return [("R fixes 0", f"no: {exc}")]
    out.append(("R fixes 0", "yes: R(0) = 0"))
    out.append(("multiplier at 0", f"d = {md.d}, R'(0) = {format_rational(md.r1)}, class {md.kind}"))
    status = check_assumption_R(R)
    if status.kind == "Violated":
        out.append(("no iterate of R is the identity", f"violated: {status.reason}"))
    elif status.kind == "OtherMultiplierCase":
        out.append(("R'(0) is 0 or a root of unity", f"fails: {status.reason}"))
    else:
        label = "parabolic map, no identity iterate" if md.r1 == 1 else "no iterate of R is the identity"
        out.append((label, f"satisfied: {status.reason}"))
    if include_dynamics and md.kind == SUPERATTRACTING and status.satisfied:
        report = critical_portrait(R)
        out.append(("post-critical set of R", f"{report.status}: {report.reason or 'all critical orbits closed'}"))
        conj = find_conjugating_homography(R)
        m = f", m = {conj.m}" if conj.m is not None else ""
        out.append(("rational conjugacy to t^d or +-T_d", f"{conj.kind}{m}: {conj.reason}"))
    return out


def _is_one(x: RationalFunction) -> bool:
    return x == RationalFunction.constant(1)


def _series_evidence(R, a, b, options, normalization=None):
    """Power-series solution and its verification order, when a and b are regular at 0."""
    if a.den.coeff(0) == 0 or b.den.coeff(0) == 0:
        return None, None
    try:
        sol = solve_fe_standard(R, a, b, options.series_order, normalization)
    except ValueError:
        return None, None
    if not sol.ok:
        return sol, None
    return sol, verify_fe(R, a, b, sol.series)


def _degree_criterion(R: RationalFunction, b: RationalFunction) -> Optional[str]:
    """Degree criterion for polynomial maps with vanishing linear part and polynomial b."""
    if not (R.is_polynomial() and b.is_polynomial()):
        return None
    P, B = R.num, b.num
    if not P or P.valuation is None or P.valuation < 2:
        return None
    if not B or B.coeff(0) != 0:
        return None
    if B.degree >= P.degree:
        return None
    return f"R in t^2 Q[t], b in t Q[t], b != 0, deg b = {B.degree} < {P.degree} = deg R"


def classify(R, a, b, options: Optional[ClassifyOptions] = None) -> Verdict:
    options = options or ClassifyOptions()
    R, a, b = as_ratfunc(R), as_ratfunc(a), as_ratfunc(b)
    multiplier_data(R)  # NotFixingZero propagates
    inputs = {"R": str(R), "a": str(a), "b": str(b), "options": options.to_json()}
    cert = certify_hypotheses(R, options.include_dynamics)

    def verdict(outcome, witness=None, N=None, detail=""):
        return Verdict(outcome, witness, N, detail, cert, inputs)

    status = check_assumption_R(R)
    if status.kind == "Violated":
        return verdict("Unknown", detail=f"assumption on R fails: {status.reason}")
    if status.kind == "OtherMultiplierCase":
        return verdict("Unknown", detail="multiplier neither 0 nor a root of unity; this case is outside the theory")
    if not a:
        cert.append(("a != 0", "fails: the equation reduces to f(R) = b"))
        return verdict("Unknown", detail="a = 0 is degenerate")

    if _is_one(a):
        return _classify_a_one(R, b, options, cert, verdict)
    if not b:
        return _classify_homogeneous(R, a, options, cert, verdict)
    return _classify_general(R, a, b, options, cert, verdict)


def _classify_a_one(R, b, options, cert, verdict):
    cert.append(("a = 1", "dichotomy for a = 1: a solution is rational or differentially transcendental"))
    if not b:
        cert.append(("homogeneous equation f(R) = f", "only constants solve it when no iterate of R is the identity"))
        return verdict("Rational", RationalFunction.constant(1), detail="every solution is constant")
    sol, order = _series_evidence(R, RationalFunction.constant(1), b, options, {0: 0})
    if sol is not None and not sol.ok:
        cert.append(("power-series solution", f"none: {sol.message}"))
        return verdict("Unknown", detail="no power-series solution exists")
    if order is not None:
        cert.append(("power-series solution", f"computed with f(0) = 0; verify_fe order {order}"))
    crit = _degree_criterion(R, b)
    if crit is not None:
        cert.append(("degree criterion hypotheses", crit))
        cert.append((
            "rational branch excluded",
            "a rational solution U/V has V constant, so deg f * deg R = deg b; impossible as deg b < deg R",
        ))
        return verdict("DiffTranscendental", detail="rational branch excluded by the degree criterion")
    found = find_rational_solution(R, RationalFunction.constant(1), b, options.deg_bound)
    if found is not None:
        cert.append(("rational solution", f"f = {found}, verified exactly"))
        return verdict("Rational", found)
    P, B = R.num, b.num
    if (
        R.is_polynomial()
        and b.is_polynomial()
        and (P.valuation or 0) >= 2
        and B.coeff(0) == 0
        and B.degree <= options.deg_bound * P.degree
    ):
        cert.append((
            "rational branch excluded",
            f"a rational solution is a polynomial of degree deg b / deg R = {B.degree}/{P.degree}"
            f" <= {options.deg_bound}; the exact linear system has no solution",
        ))
        return verdict("DiffTranscendental", detail="rational branch excluded by complete polynomial search")
    cert.append(("rational branch", f"no rational solution with degrees <= {options.deg_bound}"))
    return verdict("Conditional", detail=f"rational solutions of degree > {options.deg_bound} not excluded")


def _classify_homogeneous(R, a, options, cert, verdict):
    cert.append(("b = 0", "dichotomy for b = 0: some power f^N is rational or f is differentially transcendental"))
    sol, order = _series_evidence(R, a, RationalFunction.constant(0), options, None)
    if sol is not None and sol.ok and not sol.free_indices:
        cert.append(("power-series solutions", "only f = 0 (no resonant index)"))
        return verdict("Rational", RationalFunction.constant(0), detail="the only power-series solution is 0")
    if order is not None:
        cert.append(("power-series solution", f"free indices {sol.free_indices}; verify_fe order {order}"))
    ms = find_multiplicative_solution(R, a, options.candidate_points, options.denominator_bound)
    if ms is not None and ms.scalar == 1:
        cert.append((
            "multiplicative solution",
            f"points {[format_rational(p) for p in ms.points]}, exponents "
            f"{[format_rational(x) for x in ms.exponents]}; a^{ms.N} = prod s_i^(N lambda_i) verified exactly",
        ))
        if ms.N == 1:
            return verdict("Rational", ms.witness())
        return verdict("AlgebraicPower", ms.witness(), ms.N)
    why = "none within bounds" if ms is None else f"found with scalar {format_rational(ms.scalar)} != 1"
    cert.append((
        "algebraic branch",
        f"multiplicative search ({why}; exponent denominators <= {options.denominator_bound})",
    ))
    if options.external_nonalgebraic:
        cert.append(("external assertion", "the solution is not algebraic (supplied by the caller)"))
        return verdict("DiffTranscendental", detail="algebraic branch excluded by external assertion")
    return verdict("Conditional", detail="algebraicity not excluded at desk scale")


def _classify_general(R, a, b, options, cert, verdict):
    cert.append(("general a, b", "f differentially algebraic forces f' = alpha f + beta with alpha, beta rational"))
    sol, order = _series_evidence(R, a, b, options, None)
    if sol is not None and not sol.ok:
        cert.append(("power-series solution", f"none: {sol.message}"))
        return verdict("Unknown", detail="no power-series solution exists")
    if order is not None:
        cert.append(("power-series solution", f"verify_fe order {order}"))
    found = find_rational_solution(R, a, b, options.deg_bound)
    if found is not None:
        cert.append(("rational solution", f"f = {found}, verified exactly"))
        return verdict("Rational", found)
    cert.append(("rational branch", f"no rational solution with degrees <= {options.deg_bound}"))
    ms = find_multiplicative_solution(R, a, options.candidate_points, options.denominator_bound)
    if ms is not None and ms.scalar == 1:
        cert.append(("homogeneous algebraic solution", f"h^{ms.N} = {ms.witness()} solves h(R) = a h"))
        return verdict(
            "RiccatiResidual",
            detail="homogeneous equation has an algebraic solution; first-order case f' = alpha f + beta remains",
        )
    cert.append(("homogeneous algebraic solution", "none within bounds"))
    if options.external_nonalgebraic:
        cert.append((
            "external assertion",
            "no nonzero algebraic solution of h(R) = a h and f not algebraic (supplied by the caller)",
        ))
        return verdict("DiffTranscendental", detail="rational or differentially transcendental; rational excluded")
    return verdict(
        "Conditional",
        detail="algebraic homogeneous solutions and rational solutions excluded only within bounds;"
        " the first-order case f' = alpha f + beta is not tested",
    )


def replay(data: dict) -> Verdict:
    """Re-run a serialized verdict from its recorded inputs."""
    from .parser import parse_expression

    inputs = data["inputs"]
    options = ClassifyOptions.from_json(inputs["options"])
    return classify(
        parse_expression(inputs["R"]), parse_expression(inputs["a"]), parse_expression(inputs["b"]), options
    )


def replay_matches(data: dict) -> bool:
    return replay(data).to_json() == data
