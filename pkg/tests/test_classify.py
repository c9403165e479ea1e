import json

import pytest

from iterfe.apps import green_map
from iterfe.classify import ClassifyOptions, Verdict, classify, replay_matches
from iterfe.exact import RationalFunction

t = RationalFunction.t()


def hypotheses(v: Verdict):
    return [h for h, _ in v.certificate]


def test_trees_triple():
    v = classify(t ** 2 + t ** 3, 1, -t)
    assert v.outcome == "DiffTranscendental"
    assert "degree criterion hypotheses" in hypotheses(v)
    evidence = dict(v.certificate)["degree criterion hypotheses"]
    assert "deg b = 1 < 3 = deg R" in evidence


def test_green_triple_with_and_without_external_flag():
    R, a = green_map()
    assert classify(R, a, 0, ClassifyOptions(external_nonalgebraic=True)).outcome == "DiffTranscendental"
    v = classify(R, a, 0)
    assert v.outcome == "Conditional"
    assert "desk scale" in v.detail


def test_algebraic_power():
    v = classify(t ** 2 / (1 - 2 * t ** 2), 1 - 2 * t ** 2, 0)
    assert v.outcome == "AlgebraicPower" and v.N == 2
    assert v.witness == 1 / (1 - 4 * t ** 2)


def test_rational_branch_found():
    v = classify(t ** 2, 1, t ** 4 - t ** 2)
    assert v.outcome == "Rational" and v.witness == t ** 2


def test_constant_solutions_for_b_zero():
    v = classify(t ** 2 + t ** 3, 1, 0)
    assert v.outcome == "Rational" and v.witness == 1


def test_only_zero_solution():
    # a(0) = 2 is never a power of R'(0) = 0 except through n = 0 ... 0^0 = 1 != 2
    v = classify(t ** 2, 2, 0)
    assert v.outcome == "Rational" and v.witness == 0


@pytest.mark.parametrize("R", [-t, t, 3 * t + t ** 2])
def test_unknown_when_assumption_fails(R):
    assert classify(R, 1, -t).outcome == "Unknown"


def test_general_case_conditional_for_patterns():
    R = t / (1 + t ** 2)
    v = classify(R, (1 + t) / t, -(1 + t) / t, ClassifyOptions(include_dynamics=False))
    assert v.outcome == "Conditional"
    assert "not tested" in v.detail


def test_general_case_external():
    R = t / (1 + t ** 2)
    v = classify(R, (1 + t) / t, -(1 + t) / t, ClassifyOptions(include_dynamics=False, external_nonalgebraic=True))
    assert v.outcome == "DiffTranscendental"


def test_riccati_residual():
    # h = 1/sqrt(1 - 4t^2) solves the homogeneous equation and no low-degree rational f exists
    R, a = t ** 2 / (1 - 2 * t ** 2), 1 - 2 * t ** 2
    v = classify(R, a, t ** 3, ClassifyOptions(deg_bound=4))
    assert v.outcome == "RiccatiResidual"


@pytest.mark.parametrize(
    "args",
    [
        (t ** 2 + t ** 3, 1, -t),
        (t ** 2 / (1 - 2 * t ** 2), 1 - 2 * t ** 2, 0),
        (t ** 2 / (4 - 3 * t), (2 + t) * (4 - 3 * t) / ((4 + t) * (2 - t)), 0),
    ],
)
def test_replay_and_json_stability(args):
    v = classify(*args).to_json()
    assert replay_matches(v)
    assert json.dumps(v, sort_keys=True) == json.dumps(classify(*args).to_json(), sort_keys=True)
    assert v["schema"] == 1
