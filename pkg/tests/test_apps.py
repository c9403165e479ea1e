from itertools import permutations
from math import factorial

import pytest

from iterfe.apps import (
    TreeFamily,
    build_approximant,
    closed_walk_counts,
    complete_tree_series,
    count_avoiders,
    enumerate_complete_trees,
    pattern_for,
    pattern_series,
    patterns_report,
    sierpinski_green,
    sierpinski_report,
    sierpinski_walk_count,
    tree_counts,
    trees_report,
)
from iterfe.errors import BoundaryReachable, BudgetExceeded


def naive_avoiders(pattern, n):
    k = len(pattern)
    shape = sorted(range(k), key=lambda i: pattern[i])
    total = 0
    for p in permutations(range(n)):
        if not any(sorted(range(k), key=lambda i: p[s + i]) == shape for s in range(n - k + 1)):
            total += 1
    return total


def naive_trees(arities, n):
    """Complete trees with n leaves by recursion on the root arity and common height."""
    from functools import lru_cache

    @lru_cache(None)
    def count(leaves, height):
        if height == 0:
            return 1 if leaves == 1 else 0
        total = 0
        for k in arities:
            total += forest(leaves, height - 1, k)
        return total

    @lru_cache(None)
    def forest(leaves, height, k):
        if k == 0:
            return 1 if leaves == 0 else 0
        return sum(count(j, height) * forest(leaves - j, height, k - 1) for j in range(1, leaves + 1))

    return sum(count(n, h) for h in range(n))


@pytest.mark.parametrize("arities", [(2,), (2, 3), (3,), (2, 3, 4), (3, 4, 5)])
def test_trees_oracles(arities):
    fam = TreeFamily(arities)
    series = [int(c) for c in complete_tree_series(fam, 12).coeffs]
    assert series == tree_counts(fam, 12)
    assert [naive_trees(arities, n) for n in range(1, 13)] == series[1:]


def test_trees_golden():
    assert [int(c) for c in complete_tree_series(TreeFamily([2, 3]), 12).coeffs[1:]] == [
        1, 1, 1, 1, 2, 2, 3, 4, 5, 8, 14, 23,
    ]
    assert enumerate_complete_trees(TreeFamily([2]), 8) == 1


def test_tree_family_validation():
    with pytest.raises(ValueError):
        TreeFamily([1, 2])


def test_trees_report():
    r = trees_report([2, 3], 20)
    assert r["oracle_agrees"] and r["verify_fe_order"] == 20 and r["verdict"] == "DiffTranscendental"


def test_gasket_structure():
    g = build_approximant(3)
    assert g.degree(g.origin) == 4
    assert {g.degree(v) for v in range(len(g.coords))} == {2, 4}
    # two copies of a 3-level gasket (42 vertices each) sharing the origin
    assert len(g.coords) == 83


def test_walks_level_stability():
    assert closed_walk_counts(14, 3)[:13] == closed_walk_counts(14, 4)[:13] == closed_walk_counts(14, 5)[:13]
    assert closed_walk_counts(14, 4) == closed_walk_counts(14, 5)
    assert sierpinski_walk_count(4) == 32
    with pytest.raises(BoundaryReachable):
        closed_walk_counts(8, 2)


def test_green_golden():
    _, G4 = sierpinski_green(7)
    assert [int(c) for c in G4.coeffs] == [1, 0, 4, 4, 32, 76, 348, 1112]


def test_sierpinski_report():
    r = sierpinski_report(10)
    assert r["oracle_agrees"] and r["verify_fe_order"] == 10


@pytest.mark.parametrize("m", [4, 5])
def test_avoiders_kernel_matches_naive(m):
    pattern = pattern_for(m)
    for n in range(8):
        assert count_avoiders(pattern, n) == naive_avoiders(pattern, n)


def test_pattern_series_matches_bruteforce():
    _, _, P = pattern_series(4, 8)
    counts = [P.coeffs[n] * factorial(n) for n in range(9)]
    assert counts == [1, 1, 2, 6, 23, 110, 631, 4218, 32221]
    assert counts == [count_avoiders([1, 4, 2, 3], n) for n in range(9)]


def test_pattern_m5_matches_bruteforce():
    _, _, P = pattern_series(5, 8)
    assert [P.coeffs[n] * factorial(n) for n in range(9)] == [count_avoiders(pattern_for(5), n) for n in range(9)]


def test_avoider_budget_and_parallel():
    with pytest.raises(BudgetExceeded):
        count_avoiders([1, 4, 2, 3], 11)
    assert count_avoiders([1, 4, 2, 3], 7, workers=2) == 4218


def test_patterns_report():
    r = patterns_report(4, 8, verify_bruteforce=7)
    assert r["oracle_agrees"] and r["verify_fe_order"] == 8
    assert r["avoiders"][:5] == [1, 1, 2, 6, 23]
