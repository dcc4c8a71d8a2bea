"""Pure-Python fixpoint kernels over integer bitmasks.

State sets are Python ints (bit s = state s).  All fixpoint loops are Kleene
iterations of monotone operators on the finite powerset lattice, so each
terminates in at most n+1 rounds.
"""

from __future__ import annotations

from typing import List, Tuple

NAME = "pure"


def make(succ_masks: List[int]) -> Tuple[int, Tuple[int, ...], int]:
    n = len(succ_masks)
    return (n, tuple(succ_masks), (1 << n) - 1)


def preimage(h, a: int) -> int:
    """dia a: states with an R-successor in a."""
    n, succ, _ = h
    out = 0
    for s in range(n):
        if succ[s] & a:
            out |= 1 << s
    return out


def box(h, a: int) -> int:
    """box a: states all of whose R-successors are in a."""
    n, succ, full = h
    comp = full ^ a
    out = 0
    for s in range(n):
        if not succ[s] & comp:
            out |= 1 << s
    return out


def eu(h, a: int, b: int, r: int) -> int:
    """Least fixpoint of x -> a | (b & dia(r & x)); EU(a,b) is r = full."""
    x = 0
    while True:
        nxt = a | (b & preimage(h, r & x))
        if nxt == x:
            return x
        x = nxt


def ar(h, a: int, b: int) -> int:
    """Greatest fixpoint of y -> a & (b | box y)."""
    y = h[2]
    while True:
        nxt = a & (b | box(h, y))
        if nxt == y:
            return y
        y = nxt


def eg(h, a: int, b: int) -> int:
    """Greatest fixpoint of y -> a & dia EU(b & y, a), recomputing the inner EU."""
    full = h[2]
    y = full
    while True:
        nxt = a & preimage(h, eu(h, b & y, a, full))
        if nxt == y:
            return y
        y = nxt


def af(h, a: int, b: int, r: int) -> int:
    """Least fixpoint of x -> a | box AR(b | (r & x), a); AF(a,b) is r = full."""
    x = 0
    while True:
        nxt = a | box(h, ar(h, b | (r & x), a))
        if nxt == x:
            return x
        x = nxt
