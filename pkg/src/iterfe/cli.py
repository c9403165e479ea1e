"""Command-line front end.

Every subcommand builds a JSON-ready report dict; ``--format plain`` renders a
short human-readable view of the same report. Exit codes: 0 success, 1 usage
error, 2 obstruction or an ``Unknown`` verdict.

Batch mode: ``iterfe -`` reads one command per line from stdin (blank lines and
lines starting with ``#`` are skipped) and prints one compact JSON report per line.
"""
from __future__ import annotations

import argparse
import json
import random
import shlex
import sys
from fractions import Fraction

from . import apps
from .classify import ClassifyOptions, classify
from .dynamics import critical_portrait, find_conjugating_homography
from .errors import IterFEError, Obstructed, ParseError
from .exact import RationalFunction, format_rational, ratfunc_compose
from .funceq import boettcher, julia_psi_details, solve_fe_standard, verify_fe
from .parser import parse_expression
from .series import Series, reversion, series_compose

SCHEMA = 1
EXIT_OK, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2

GRAMMAR = """expression grammar (the only variable is t):
  expr     := term (('+' | '-') term)*
  term     := unary (('*' | '/') unary | unary)*   juxtaposition multiplies: 3t, 2(1+t)
  unary    := '-' unary | power                    '^' binds tighter: -t^2 = -(t^2)
  power    := primary ['^' INTEGER]                exponents are integer literals
  primary  := INTEGER | 't' | '(' expr ')'
  rational constants are quotients: 3/4*t, no decimals
examples: "t^2+t^3", "t^2/(4-3t)", "(2+t)*(4-3*t)/((4+t)*(2-t))"
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")

    def exit(self, status=0, message=None):
        if status:
            raise UsageError(message or "usage error")
        raise _HelpExit(message)


class _HelpExit(Exception):
    pass


def _expr(text: str) -> RationalFunction:
    try:
        return parse_expression(text)
    except ParseError as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from exc


def _int_set(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from exc


def _normalization(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--normalize expects idx=val, got {item!r}")
        idx, val = item.split("=", 1)
        try:
            out[int(idx)] = Fraction(val.strip())
        except ValueError as exc:
            raise UsageError(f"--normalize expects idx=val with rational val, got {item!r}") from exc
    return out


def _series_plain(s: Series) -> str:
    return ", ".join(format_rational(c) for c in s.coeffs)


# randomized self-test -----------------------------------------------------------


def _random_map(rng: random.Random) -> RationalFunction:
    t = RationalFunction.t()
    d = rng.randint(2, 4)
    R = t ** d
    for k in range(d + 1, d + 3):
        R = R + Fraction(rng.randint(-3, 3), rng.randint(1, 3)) * t ** k
    return R


def selftest(seed: int, rounds: int = 5, order: int = 10) -> dict:
    """Randomized exact identities on maps drawn from a seeded generator."""
    rng = random.Random(seed)
    checks = []
    t = RationalFunction.t()
    for _ in range(rounds):
        R = _random_map(rng)
        S = _random_map(rng)
        Rs, Ss = Series.from_ratfunc(R, order), Series.from_ratfunc(S, order)
        checks.append(("composition", series_compose(Rs, Ss).agrees_with(Series.from_ratfunc(ratfunc_compose(R, S), order))))
        g = Series.from_ratfunc(t + Fraction(rng.randint(-4, 4), rng.randint(1, 4)) * t ** 2, order)
        checks.append(("reversion", series_compose(g, reversion(g)) == Series.from_ratfunc(t, order)))
        b = Fraction(rng.randint(-4, 4), rng.randint(1, 4)) * t + Fraction(rng.randint(-4, 4)) * t ** 2
        sol = solve_fe_standard(R, 1, b, order, {0: 0})
        checks.append(("solver/verifier", sol.ok and verify_fe(R, 1, b, sol.series) >= order))
    return {
        "seed": seed,
        "checks": len(checks),
        "failed": sorted({name for name, ok in checks if not ok}),
        "passed": all(ok for _, ok in checks),
    }


# subcommands -------------------------------------------------------------------


def _cmd_solve(ns):
    R, a, b = _expr(ns.R), _expr(ns.a), _expr(ns.b)
    sol = solve_fe_standard(R, a, b, ns.order, _normalization(ns.normalize) or None)
    report = {"inputs": {"R": str(R), "a": str(a), "b": str(b), "order": ns.order}, **sol.to_json()}
    if sol.ok:
        report["verify_fe_order"] = verify_fe(R, a, b, sol.series)
        return EXIT_OK, report, _series_plain(sol.series)
    return EXIT_UNKNOWN, report, f"obstructed at indices {sol.obstructions}: {sol.message}"


def _cmd_classify(ns):
    R, a, b = _expr(ns.R), _expr(ns.a), _expr(ns.b)
    options = ClassifyOptions(external_nonalgebraic=ns.external_nonalgebraic, series_order=ns.order)
    v = classify(R, a, b, options)
    lines = [v.outcome + (f" (N = {v.N})" if v.N else "") + (f": {v.witness}" if v.witness is not None else "")]
    if v.detail:
        lines.append(v.detail)
    lines += [f"- {h}: {e}" for h, e in v.certificate]
    return (EXIT_UNKNOWN if v.outcome == "Unknown" else EXIT_OK), v.to_json(), "\n".join(lines)


def _cmd_julia(ns):
    R = _expr(ns.R)
    psi, k = julia_psi_details(R, ns.order, nonresonant=ns.nonresonant)
    report = {"inputs": {"R": str(R), "order": ns.order}, "iterate": k, "psi": psi.to_json()}
    return EXIT_OK, report, _series_plain(psi)


def _cmd_boettcher(ns):
    R = _expr(ns.R)
    tau = boettcher(R, ns.order)
    return EXIT_OK, {"inputs": {"R": str(R), "order": ns.order}, "tau": tau.to_json()}, _series_plain(tau)


def _cmd_pcf(ns):
    R = _expr(ns.R)
    rep = critical_portrait(R, max_iter=ns.max_iter)
    report = {"inputs": {"R": str(R), "max_iter": ns.max_iter}, **rep.to_json()}
    plain = rep.status
    if rep.status == "FiniteP":
        pts = [format_rational(x) for x in rep.postcritical_set] + (["inf"] if rep.includes_infinity else [])
        plain += " {" + ", ".join(pts) + "}"
    elif rep.reason:
        plain += f": {rep.reason}"
    return (EXIT_UNKNOWN if rep.status == "Unknown" else EXIT_OK), report, plain


def _cmd_conjugacy(ns):
    R = _expr(ns.R)
    res = find_conjugating_homography(R, max_iter=ns.max_iter)
    report = {"inputs": {"R": str(R), "max_iter": ns.max_iter}, **res.to_json()}
    plain = res.kind + (f" m = {res.m}" if res.m is not None else "") + (f": {res.reason}" if res.reason else "")
    return (EXIT_UNKNOWN if res.kind == "Unknown" else EXIT_OK), report, plain


def _cmd_trees(ns):
    report = apps.trees_report(_int_set(ns.set), ns.order)
    return EXIT_OK, report, ", ".join(str(c) for c in report["coefficients"])


def _cmd_sierpinski(ns):
    report = apps.sierpinski_report(ns.order, ns.oracle_level)
    return EXIT_OK, report, ", ".join(str(c) for c in report["coeffs_G4"])


def _cmd_patterns(ns):
    report = apps.patterns_report(ns.m, ns.order, ns.verify_bruteforce, ns.workers)
    return EXIT_OK, report, ", ".join(str(c) for c in report["avoiders"])


def _cmd_oracle(ns):
    if ns.case == "trees":
        counts = apps.tree_counts(apps.TreeFamily(_int_set(ns.set)), ns.n)[1:]
        report = {"inputs": {"set": _int_set(ns.set), "n": ns.n}, "counts": counts}
    elif ns.case == "walks":
        level = ns.level if ns.level is not None else apps.default_level(ns.n)
        counts = apps.closed_walk_counts(ns.n, level)
        report = {"inputs": {"n": ns.n, "level": level}, "counts": counts}
    else:
        pattern = apps.pattern_for(ns.m)
        counts = [apps.count_avoiders(pattern, n, ns.workers) for n in range(ns.n + 1)]
        report = {"inputs": {"m": ns.m, "n": ns.n, "pattern": pattern}, "counts": counts}
    report["case"] = ns.case
    return EXIT_OK, report, ", ".join(str(c) for c in report["counts"])


def build_parser() -> argparse.ArgumentParser:
    shared = _Parser(add_help=False)
    shared.add_argument("--order", type=int, default=10)
    shared.add_argument("--format", choices=("json", "plain"), default="json")
    shared.add_argument("--seed", type=int, default=None, help="also run the randomized self-test with this seed")
    shared.add_argument("--workers", type=int, default=1)

    p = _Parser(prog="iterfe", description="Exact tools for f(R(t)) = a(t) f(t) + b(t).",
                epilog=GRAMMAR, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, parents=[shared], help=help_text, epilog=GRAMMAR,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("solve", _cmd_solve, "power-series solution")
    sp.add_argument("--R", required=True)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", default="0")
    sp.add_argument("--normalize", action="append", metavar="IDX=VAL")

    sp = add("classify", _cmd_classify, "classify a triple (R, a, b)")
    sp.add_argument("--R", required=True)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", default="0")
    sp.add_argument("--external-nonalgebraic", action="store_true")

    sp = add("julia", _cmd_julia, "normalized Julia function")
    sp.add_argument("--R", required=True)
    sp.add_argument("--nonresonant", action="store_true")

    sp = add("boettcher", _cmd_boettcher, "Boettcher function")
    sp.add_argument("--R", required=True)

    for name, fn, text in (("pcf", _cmd_pcf, "critical orbits"), ("conjugacy", _cmd_conjugacy, "conjugacy search")):
        sp = add(name, fn, text)
        sp.add_argument("--R", required=True)
        sp.add_argument("--max-iter", type=int, default=64)

    sp = add("trees", _cmd_trees, "complete trees pipeline")
    sp.add_argument("--set", default="2,3")

    sp = add("sierpinski", _cmd_sierpinski, "Sierpinski walks pipeline")
    sp.add_argument("--oracle-level", type=int, default=None)

    sp = add("patterns", _cmd_patterns, "consecutive patterns pipeline")
    sp.add_argument("--m", type=int, default=4)
    sp.add_argument("--verify-bruteforce", type=int, default=8)

    sp = add("oracle", _cmd_oracle, "brute-force oracles")
    sp.add_argument("case", choices=("trees", "walks", "perms"))
    sp.add_argument("--n", type=int, default=10)
    sp.add_argument("--set", default="2,3")
    sp.add_argument("--level", type=int, default=None)
    sp.add_argument("--m", type=int, default=4)
    return p


def dumps(report: dict, compact: bool = False) -> str:
    if compact:
        return json.dumps(report, sort_keys=True, separators=(",", ":"))
    return json.dumps(report, sort_keys=True, indent=2)


_VALUE_FLAGS = ("--R", "--a", "--b", "--normalize")


def _attach_values(argv) -> list:
    """Glue expression values to their flag so that "--b -t" is not read as a new option."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run_command(argv, compact: bool = False):
    """(exit code, output text, error text) for one command line."""
    try:
        ns = build_parser().parse_args(_attach_values(list(argv)))
    except _HelpExit:
        return EXIT_OK, build_parser().format_help().rstrip(), ""
    except UsageError as exc:
        return EXIT_USAGE, "", f"{exc}\n\n{build_parser().format_help()}"
    try:
        code, report, plain = ns.fn(ns)
    except UsageError as exc:
        return EXIT_USAGE, "", f"{exc}\n\n{GRAMMAR}"
    except Obstructed as exc:
        code, report, plain = EXIT_UNKNOWN, {"error": type(exc).__name__, "message": str(exc)}, f"error: {exc}"
    except (IterFEError, ValueError) as exc:
        kind = type(exc).__name__
        if isinstance(exc, ValueError) and not isinstance(exc, IterFEError):
            return EXIT_USAGE, "", f"{ns.command}: {exc}"
        code, report, plain = EXIT_UNKNOWN, {"error": kind, "message": str(exc)}, f"{kind}: {exc}"
    report = {"schema": SCHEMA, "command": ns.command, **report}
    if ns.seed is not None:
        report["selftest"] = selftest(ns.seed)
        if not report["selftest"]["passed"]:
            code = EXIT_UNKNOWN
        plain += f"\nselftest seed {ns.seed}: {'passed' if report['selftest']['passed'] else 'FAILED'}"
    text = plain if ns.format == "plain" else dumps(report, compact)
    return code, text, ""


def run_batch(lines):
    """Run each non-blank line as a command; returns (worst exit code, list of outputs)."""
    worst, outputs = EXIT_OK, []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            argv = shlex.split(line)
        except ValueError as exc:
            code, out, err = EXIT_USAGE, "", str(exc)
        else:
            code, out, err = run_command(argv, compact=True)
        if code == EXIT_USAGE:
            out = dumps({"schema": SCHEMA, "command": line, "error": "usage", "message": err.splitlines()[0]}, True)
        outputs.append(out)
        worst = max(worst, code)
    return worst, outputs


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if argv == ["-"]:
        code, outputs = run_batch(sys.stdin)
        for out in outputs:
            print(out)
        return code
    code, out, err = run_command(argv)
    if out:
        print(out)
    if err:
        print(err, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
