# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled fixpoint kernels; mirrors kernels.pure for systems with <= 64 states."""

NAME = "compiled"


cdef class Table:
    cdef unsigned long long succ[64]
    cdef int n
    cdef unsigned long long full


def make(succ_masks):
    cdef Table t = Table()
    cdef int n = len(succ_masks)
    if n > 64:
        raise ValueError("compiled kernel supports at most 64 states")
    t.n = n
    cdef int s
    for s in range(n):
        t.succ[s] = succ_masks[s]
    if n == 64:
        t.full = <unsigned long long>0xFFFFFFFFFFFFFFFF
    else:
        t.full = ((<unsigned long long>1) << n) - 1
    return t


cdef unsigned long long _pre(Table t, unsigned long long a):
    cdef unsigned long long out = 0
    cdef int s
    for s in range(t.n):
        if t.succ[s] & a:
            out |= (<unsigned long long>1) << s
    return out


cdef unsigned long long _box(Table t, unsigned long long a):
    cdef unsigned long long comp = t.full ^ a
    cdef unsigned long long out = 0
    cdef int s
    for s in range(t.n):
        if not (t.succ[s] & comp):
            out |= (<unsigned long long>1) << s
    return out


cdef unsigned long long _eu(Table t, unsigned long long a, unsigned long long b,
                            unsigned long long r):
    cdef unsigned long long x = 0
    cdef unsigned long long nxt
    while True:
        nxt = a | (b & _pre(t, r & x))
        if nxt == x:
            return x
        x = nxt


cdef unsigned long long _ar(Table t, unsigned long long a, unsigned long long b):
    cdef unsigned long long y = t.full
    cdef unsigned long long nxt
    while True:
        nxt = a & (b | _box(t, y))
        if nxt == y:
            return y
        y = nxt


cdef unsigned long long _eg(Table t, unsigned long long a, unsigned long long b):
    cdef unsigned long long y = t.full
    cdef unsigned long long nxt
    while True:
        nxt = a & _pre(t, _eu(t, b & y, a, t.full))
        if nxt == y:
            return y
        y = nxt


cdef unsigned long long _af(Table t, unsigned long long a, unsigned long long b,
                            unsigned long long r):
    cdef unsigned long long x = 0
    cdef unsigned long long nxt
    while True:
        nxt = a | _box(t, _ar(t, b | (r & x), a))
        if nxt == x:
            return x
        x = nxt


def preimage(Table t, a):
    return _pre(t, a)


def box(Table t, a):
    return _box(t, a)


def eu(Table t, a, b, r):
    return _eu(t, a, b, r)


def ar(Table t, a, b):
    return _ar(t, a, b)


def eg(Table t, a, b):
    return _eg(t, a, b)


def af(Table t, a, b, r):
    return _af(t, a, b, r)
