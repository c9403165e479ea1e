"""Pure-Python implementations of the hot inner loops.

Every function here has a compiled twin in ``_ckernels.pyx`` with the same
signature and bit-identical results; ``iterfe.kernels`` picks one at import.
"""
from fractions import Fraction
from math import lcm

BACKEND = "python"


def _common_denominator(xs):
    den = 1
    for x in xs:
        den = lcm(den, x.denominator)
    return den, [x.numerator * (den // x.denominator) for x in xs]


def int_conv_trunc(a, b, n):
    """Integer convolution of ``a`` and ``b`` keeping indices ``0..n``."""
    la, lb = len(a), len(b)
    if la == 0 or lb == 0 or n < 0:
        return []
    m = min(n + 1, la + lb - 1)
    out = [0] * m
    for i in range(min(la, m)):
        ai = a[i]
        if not ai:
            continue
        for j in range(min(lb, m - i)):
            out[i + j] += ai * b[j]
    return out


def mul_trunc(a, b, n):
    """Truncated product of two Fraction coefficient lists.

    Works on integer numerators over a common denominator so that each output
    coefficient is normalized once instead of after every partial product.
    """
    if not a or not b or n < 0:
        return []
    da, ia = _common_denominator(a)
    db, ib = _common_denominator(b)
    den = da * db
    return [Fraction(c, den) for c in int_conv_trunc(ia, ib, n)]


def closed_walks(indptr, indices, origin, nmax):
    """Closed-walk counts at ``origin`` for lengths ``0..nmax``.

    The graph is given in CSR form; counts are exact Python integers.
    """
    size = len(indptr) - 1
    vec = [0] * size
    vec[origin] = 1
    counts = [1]
    for _ in range(nmax):
        nxt = [0] * size
        for v in range(size):
            c = vec[v]
            if c:
                for k in range(indptr[v], indptr[v + 1]):
                    nxt[indices[k]] += c
        vec = nxt
        counts.append(vec[origin])
    return counts


def count_avoiders(pattern, n, first=-1):
    """Number of permutations of ``0..n-1`` with no consecutive occurrence of ``pattern``.

    ``pattern`` holds 0-based values. With ``first >= 0`` only permutations
    starting with that value are counted (used to split work across processes).
    """
    k = len(pattern)
    # positions of the pattern listed by increasing value
    order = sorted(range(k), key=lambda i: pattern[i])
    perm = [0] * n
    used = [False] * n

    def window_matches(end):
        base = end - k + 1
        prev = perm[base + order[0]]
        for idx in order[1:]:
            cur = perm[base + idx]
            if cur < prev:
                return False
            prev = cur
        return True

    def dfs(pos):
        if pos == n:
            return 1
        total = 0
        for v in range(n):
            if used[v]:
                continue
            perm[pos] = v
            if pos + 1 >= k and window_matches(pos):
                continue
            used[v] = True
            total += dfs(pos + 1)
            used[v] = False
        return total

    if n == 0:
        return 1 if first < 0 else 0
    if first >= 0:
        if first >= n:
            return 0
        perm[0] = first
        used[first] = True
        if k == 1:
            return 0
        return dfs(1)
    return dfs(0)
