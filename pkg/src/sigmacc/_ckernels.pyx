# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels (same contracts as ``_kernels_py``)."""

from libc.stdint cimport uint64_t

from sigmacc import _kernels_py

cdef enum:
    MAXV = 64


def lin_cmp(tuple s, tuple t):
    cdef Py_ssize_t ls = len(s), lt = len(t), n, i
    cdef object a, b
    n = ls if ls < lt else lt
    for i in range(n):
        a = s[i]
        b = t[i]
        if a != b:
            return -1 if a > b else 1
    if ls == lt:
        return 0
    return -1 if ls < lt else 1


def interval_contains(tuple s, k, tuple t):
    cdef Py_ssize_t ls = len(s), i
    if len(t) <= ls:
        return False
    for i in range(ls):
        if s[i] != t[i]:
            return False
    return t[ls] > k


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int _low_index(uint64_t x) noexcept nogil:
    return __builtin_ctzll(x)


cdef struct Search:
    uint64_t adj[MAXV]
    uint64_t best
    int best_size
    long long nodes
    long long budget
    int aborted


cdef void _expand(Search* st, uint64_t cur, int cur_size, uint64_t cand) noexcept nogil:
    cdef int verts[MAXV]
    cdef int colors[MAXV]
    cdef int count = 0, color = 0, idx, v
    cdef uint64_t uncolored = cand, q, low, bit, new_cand
    st.nodes += 1
    if st.budget > 0 and st.nodes > st.budget:
        st.aborted = 1
        return
    while uncolored:
        color += 1
        q = uncolored
        while q:
            low = q & (~q + 1)
            v = _low_index(low)
            q &= ~low
            q &= ~st.adj[v]
            uncolored &= ~low
            verts[count] = v
            colors[count] = color
            count += 1
    idx = count - 1
    while idx >= 0:
        if cur_size + colors[idx] <= st.best_size:
            return
        v = verts[idx]
        bit = (<uint64_t>1) << v
        new_cand = cand & st.adj[v]
        if new_cand:
            _expand(st, cur | bit, cur_size + 1, new_cand)
            if st.aborted:
                return
        elif cur_size + 1 > st.best_size:
            st.best = cur | bit
            st.best_size = cur_size + 1
        cand &= ~bit
        idx -= 1


def max_clique(adj, long long budget=0):
    cdef Py_ssize_t n = len(adj), i
    cdef Search st
    cdef uint64_t cand, low, seed = 0
    cdef int size = 0, v
    if n > MAXV:
        return _kernels_py.max_clique(adj, budget)
    if n == 0:
        return 0, True
    for i in range(n):
        st.adj[i] = <uint64_t>adj[i]
    cand = (<uint64_t>1 << n) - 1 if n < 64 else ~(<uint64_t>0)
    while cand:
        low = cand & (~cand + 1)
        v = _low_index(low)
        seed |= low
        size += 1
        cand &= st.adj[v]
    st.best = seed
    st.best_size = size
    st.nodes = 0
    st.budget = budget
    st.aborted = 0
    cand = (<uint64_t>1 << n) - 1 if n < 64 else ~(<uint64_t>0)
    with nogil:
        _expand(&st, 0, 0, cand)
    return int(st.best), not st.aborted
