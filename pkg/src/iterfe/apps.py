"""Three combinatorial pipelines, each checked against a brute-force oracle.

* complete S-trees: T(t) = t + T(S(t)) with S(t) = sum_{k in S} t^k;
* closed walks at the origin of the doubled Sierpinski graph, whose
  generating function G(4t) solves a Mahler-type equation;
* permutations avoiding the consecutive pattern 1 m 2 3 ... (m-1).

The oracles use integers only and never touch the series solver.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import kernels
from .errors import BoundaryReachable, BudgetExceeded
from .exact import Polynomial, RationalFunction, format_rational
from .funceq import solve_fe_contractive, solve_fe_standard, verify_fe, verify_fe_contractive
from .series import Series, borel_transform

SCHEMA = 1
AVOIDER_BUDGET = 10


# complete trees --------------------------------------------------------------------


@dataclass(frozen=True)
class TreeFamily:
    arity_set: tuple

    def __init__(self, arities):
        arities = tuple(sorted(set(int(k) for k in arities)))
        if not arities:
            raise ValueError("arity set must be nonempty")
        if arities[0] < 2:
            raise ValueError("arities must be >= 2; arity 1 gives infinitely many trees of each size")
        object.__setattr__(self, "arity_set", arities)

    def generator(self) -> RationalFunction:
        return RationalFunction(Polynomial([1 if k in self.arity_set else 0 for k in range(self.arity_set[-1] + 1)]))


def complete_tree_series(family: TreeFamily, order: int) -> Series:
    """T with T(t) = t + T(S(t)), by the contractive recursion."""
    if order < 1:
        raise ValueError("order must be >= 1")
    return solve_fe_contractive(family.generator(), 1, RationalFunction.t(), order)


def _int_mul(a: list, b: list, n: int) -> list:
    out = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                out[i + j] += x * y
    return out


def _apply_generator(arities, c: list, n: int) -> list:
    """Coefficients of S(c(t)) truncated at t^n."""
    out = [0] * (n + 1)
    power = [1] + [0] * n
    for k in range(1, arities[-1] + 1):
        power = _int_mul(power, c, n)
        if k in arities:
            out = [x + y for x, y in zip(out, power)]
    return out


def tree_counts(family: TreeFamily, n: int) -> list:
    """Number of complete trees with k leaves for k = 0..n, summed over heights."""
    total = [0] * (n + 1)
    level = [0] * (n + 1)
    if n >= 1:
        level[1] = 1  # height 0: the single leaf
    while any(level):
        total = [x + y for x, y in zip(total, level)]
        level = _apply_generator(family.arity_set, level, n)
    return total


def enumerate_complete_trees(family: TreeFamily, n: int) -> int:
    """Complete trees with exactly n leaves: sum over h of [t^n] S^(h)(t)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return tree_counts(family, n)[n]


def trees_report(arities, order: int) -> dict:
    from .classify import ClassifyOptions, classify

    family = TreeFamily(arities)
    T = complete_tree_series(family, order)
    coeffs = [int(c) for c in T.coeffs]
    oracle = tree_counts(family, order)
    table = [{"n": n, "series": coeffs[n], "oracle": oracle[n]} for n in range(1, order + 1)]
    R = family.generator()
    verdict = classify(R, 1, -RationalFunction.t(), ClassifyOptions(series_order=min(order, 20)))
    return {
        "schema": SCHEMA,
        "pipeline": "trees",
        "inputs": {"arity_set": list(family.arity_set), "order": order},
        "equation": {"R": str(R), "a": "1", "b": "-t"},
        "coefficients": coeffs[1:],
        "oracle": table,
        "oracle_agrees": all(row["series"] == row["oracle"] for row in table),
        "verify_fe_order": verify_fe(R, 1, -RationalFunction.t(), T),
        "verdict": verdict.outcome,
    }


# Sierpinski graph ------------------------------------------------------------------


def green_map() -> tuple:
    """(R, a) for G(R(t)) = a(t) G(t)."""
    t = RationalFunction.t()
    R = t ** 2 / (4 - 3 * t)
    a = (2 + t) * (4 - 3 * t) / ((4 + t) * (2 - t))
    return R, a


def sierpinski_green(order: int):
    """(G, G4) where G(0) = 1 and G4 has coefficient n scaled by 4^n."""
    if order < 0:
        raise ValueError("order must be >= 0")
    R, a = green_map()
    sol = solve_fe_standard(R, a, 0, order, {0: 1}, strict=True)
    G = sol.series
    G4 = Series([c * 4 ** n for n, c in enumerate(G.coeffs)], G.order)
    return G, G4


@dataclass(frozen=True)
class ApproximantGraph:
    level: int
    indptr: tuple
    indices: tuple
    origin: int
    coords: tuple

    def degree(self, v: int) -> int:
        return self.indptr[v + 1] - self.indptr[v]


def _gasket_edges(level: int) -> set:
    """Edges of the level-k gasket on the triangular lattice, corners (0,0), (2^k,0), (0,2^k)."""
    edges = {((0, 0), (1, 0)), ((0, 0), (0, 1)), ((0, 1), (1, 0))}
    for k in range(1, level + 1):
        h = 2 ** (k - 1)
        edges = {
            tuple(sorted(((x + dx, y + dy), (u + dx, v + dy))))
            for (x, y), (u, v) in edges
            for dx, dy in ((0, 0), (h, 0), (0, h))
        }
    return edges


def build_approximant(level: int) -> ApproximantGraph:
    """Two level-k gaskets glued at the corner (0,0); the second is point-reflected."""
    half = _gasket_edges(level)
    edges = set(half)
    edges.update(tuple(sorted(((-x, -y), (-u, -v)))) for (x, y), (u, v) in half)
    vertices = sorted({p for e in edges for p in e})
    index = {p: i for i, p in enumerate(vertices)}
    nbrs = [[] for _ in vertices]
    for p, q in edges:
        nbrs[index[p]].append(index[q])
        nbrs[index[q]].append(index[p])
    indptr = [0]
    indices = []
    for row in nbrs:
        indices.extend(sorted(row))
        indptr.append(len(indices))
    return ApproximantGraph(level, tuple(indptr), tuple(indices), index[(0, 0)], tuple(vertices))


def closed_walk_counts(nmax: int, level: int) -> list:
    """Closed walks of length 0..nmax at the origin of the level-k approximant."""
    if not 2 ** level > nmax / 2:
        raise BoundaryReachable(f"walks of length {nmax} can reach the boundary of the level-{level} approximant")
    g = build_approximant(level)
    return kernels.closed_walks(list(g.indptr), list(g.indices), g.origin, nmax)


def sierpinski_walk_count(n: int, level: int = None) -> int:
    if n < 0:
        raise ValueError("n must be >= 0")
    if level is None:
        level = default_level(n)
    return closed_walk_counts(n, level)[n]


def default_level(n: int) -> int:
    """Smallest level with 2^level > n/2 (at least 1)."""
    level = 1
    while not 2 ** level > n / 2:
        level += 1
    return level


def sierpinski_report(order: int, oracle_level: int = None) -> dict:
    from .classify import ClassifyOptions, classify

    G, G4 = sierpinski_green(order)
    level = default_level(order) if oracle_level is None else oracle_level
    walks = closed_walk_counts(order, level)
    coeffs = [int(c) for c in G4.coeffs]
    R, a = green_map()
    verdict = classify(R, a, 0, ClassifyOptions(series_order=min(order, 20)))
    return {
        "schema": SCHEMA,
        "pipeline": "sierpinski",
        "inputs": {"order": order, "oracle_level": level},
        "equation": {"R": str(R), "a": str(a), "b": "0"},
        "coeffs_G": [format_rational(c) for c in G.coeffs],
        "coeffs_G4": coeffs,
        "oracle": [{"n": n, "series": coeffs[n], "walks": walks[n]} for n in range(order + 1)],
        "oracle_agrees": coeffs == walks,
        "verify_fe_order": verify_fe(R, a, 0, G),
        "verdict": verdict.outcome,
    }


# consecutive patterns ---------------------------------------------------------------


def pattern_for(m: int) -> list:
    """1 m 2 3 ... (m-1)."""
    return [1, m] + list(range(2, m))


def pattern_map(m: int) -> tuple:
    """(R, c, d) for S = c S(R) + d."""
    t = RationalFunction.t()
    return t / (1 + t ** (m - 2)), t / (1 + t), RationalFunction.constant(1)


def pattern_series(m: int, order: int):
    """(S, S_hat, P_hat) with P_hat = 1/(2 - S_hat) the exponential generating function of avoiders."""
    if m < 4:
        raise ValueError("m must be >= 4")
    R, c, d = pattern_map(m)
    S = solve_fe_contractive(R, c, d, order)
    S_hat = borel_transform(S)
    P_hat = (2 - S_hat).inverse()
    return S, S_hat, P_hat


def _ranks(pattern) -> list:
    order = sorted(range(len(pattern)), key=lambda i: pattern[i])
    ranks = [0] * len(pattern)
    for r, i in enumerate(order):
        ranks[i] = r
    return ranks


def count_avoiders(pattern, n: int, workers: int = 1) -> int:
    """Permutations of size n with no window order-isomorphic to the pattern."""
    if n > AVOIDER_BUDGET:
        raise BudgetExceeded(f"n = {n} exceeds the enumeration budget {AVOIDER_BUDGET}")
    if n < 0:
        raise ValueError("n must be >= 0")
    ranks = _ranks(pattern)
    if workers <= 1 or n < 2:
        return kernels.count_avoiders(ranks, n)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(kernels.count_avoiders, [ranks] * n, [n] * n, range(n))
        return sum(parts)


def patterns_report(m: int, order: int, verify_bruteforce: int = 8, workers: int = 1) -> dict:
    from .classify import ClassifyOptions, classify

    S, S_hat, P_hat = pattern_series(m, order)
    counts = [P_hat.coeffs[n] * factorial(n) for n in range(order + 1)]
    limit = min(verify_bruteforce, order, AVOIDER_BUDGET)
    pattern = pattern_for(m)
    brute = [count_avoiders(pattern, n, workers) for n in range(limit + 1)]
    R, c, _ = pattern_map(m)
    t = RationalFunction.t()
    a, b = (1 + t) / t, -(1 + t) / t
    verdict = classify(R, a, b, ClassifyOptions(series_order=min(order, 20), include_dynamics=False))
    return {
        "schema": SCHEMA,
        "pipeline": "patterns",
        "inputs": {"m": m, "order": order, "verify_bruteforce": limit},
        "pattern": pattern,
        "equation": {"R": str(R), "c": str(c), "d": "1"},
        "coeffs_S": [format_rational(x) for x in S.coeffs],
        "avoiders": [_as_int(x) for x in counts],
        "oracle": [{"n": n, "series": _as_int(counts[n]), "bruteforce": brute[n]} for n in range(limit + 1)],
        "oracle_agrees": all(counts[n] == brute[n] for n in range(limit + 1)),
        "verify_fe_order": verify_fe_contractive(R, c, 1, S),
        "verify_fe_order_standard_form": verify_fe(R, a, b, S),
        "verdict": verdict.outcome,
    }


def _as_int(x: Fraction):
    return int(x) if x.denominator == 1 else format_rational(x)
