# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the loops in ``_pykernels``; same signatures, same results."""
from fractions import Fraction
from math import lcm

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t

BACKEND = "cython"


cdef tuple _common_denominator(list xs):
    cdef object den = 1
    for x in xs:
        den = lcm(den, x.denominator)
    return den, [x.numerator * (den // x.denominator) for x in xs]


def int_conv_trunc(a, b, Py_ssize_t n):
    cdef Py_ssize_t la = len(a), lb = len(b), m, i, j, jmax
    cdef list out
    cdef object ai
    if la == 0 or lb == 0 or n < 0:
        return []
    m = min(n + 1, la + lb - 1)
    out = [0] * m
    for i in range(min(la, m)):
        ai = a[i]
        if not ai:
            continue
        jmax = min(lb, m - i)
        for j in range(jmax):
            out[i + j] = out[i + j] + ai * b[j]
    return out


def mul_trunc(a, b, Py_ssize_t n):
    if not a or not b or n < 0:
        return []
    da, ia = _common_denominator(list(a))
    db, ib = _common_denominator(list(b))
    den = da * db
    return [Fraction(c, den) for c in int_conv_trunc(ia, ib, n)]


def closed_walks(indptr, indices, Py_ssize_t origin, Py_ssize_t nmax):
    cdef Py_ssize_t size = len(indptr) - 1
    cdef Py_ssize_t v, k, step
    # 4-regular graph: counts are bounded by 4**n, exact in int64 for n <= 31
    if nmax > 31:
        from ._pykernels import closed_walks as slow
        return slow(indptr, indices, origin, nmax)
    cdef int64_t *vec = <int64_t *> malloc(size * sizeof(int64_t))
    cdef int64_t *nxt = <int64_t *> malloc(size * sizeof(int64_t))
    cdef int64_t *tmp
    cdef Py_ssize_t nnz = len(indices)
    cdef Py_ssize_t *ip = <Py_ssize_t *> malloc((size + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *ix = <Py_ssize_t *> malloc((nnz + 1) * sizeof(Py_ssize_t))
    cdef int64_t c
    counts = [1]
    try:
        for v in range(size + 1):
            ip[v] = indptr[v]
        for k in range(nnz):
            ix[k] = indices[k]
        for v in range(size):
            vec[v] = 0
        vec[origin] = 1
        for step in range(nmax):
            for v in range(size):
                nxt[v] = 0
            for v in range(size):
                c = vec[v]
                if c:
                    for k in range(ip[v], ip[v + 1]):
                        nxt[ix[k]] += c
            tmp = vec
            vec = nxt
            nxt = tmp
            counts.append(int(vec[origin]))
    finally:
        free(vec)
        free(nxt)
        free(ip)
        free(ix)
    return counts


cdef long long _dfs(int pos, int n, int k, int *perm, char *used, int *order):
    cdef long long total = 0
    cdef int v, base, i, prev, cur, hit
    if pos == n:
        return 1
    for v in range(n):
        if used[v]:
            continue
        perm[pos] = v
        if pos + 1 >= k:
            base = pos - k + 1
            hit = 1
            prev = perm[base + order[0]]
            for i in range(1, k):
                cur = perm[base + order[i]]
                if cur < prev:
                    hit = 0
                    break
                prev = cur
            if hit:
                continue
        used[v] = 1
        total += _dfs(pos + 1, n, k, perm, used, order)
        used[v] = 0
    return total


def count_avoiders(pattern, int n, int first=-1):
    cdef int k = len(pattern)
    cdef int i
    cdef long long result
    order_py = sorted(range(k), key=lambda j: pattern[j])
    if n == 0:
        return 1 if first < 0 else 0
    if first >= n:
        return 0
    cdef int *perm = <int *> malloc(n * sizeof(int))
    cdef char *used = <char *> malloc(n * sizeof(char))
    cdef int *order = <int *> malloc((k + 1) * sizeof(int))
    try:
        for i in range(n):
            used[i] = 0
            perm[i] = 0
        for i in range(k):
            order[i] = order_py[i]
        if first >= 0:
            if k == 1:
                return 0
            perm[0] = first
            used[first] = 1
            result = _dfs(1, n, k, perm, used, order)
        else:
            result = _dfs(0, n, k, perm, used, order)
    finally:
        free(perm)
        free(used)
        free(order)
    return int(result)
