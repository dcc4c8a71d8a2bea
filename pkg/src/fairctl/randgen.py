"""Seeded random instances: systems, formulas, first-order formulas, automata.

All randomness goes through an explicit random.Random (Mersenne Twister), so
identical seeds reproduce identical instances byte for byte.
"""

from __future__ import annotations

import random
from typing import List, Optional, Sequence

from . import fol
from . import formulas as F
from .automata import ParityTreeAutomaton
from .formulas import Formula
from .systems import TransitionSystem


def random_system(rng: random.Random, max_states: int = 6,
                  props: Sequence[str] = ("p", "q"),
                  min_states: int = 1) -> TransitionSystem:
    """A random serial system with random colouring."""
    n = rng.randint(min_states, max_states)
    edges = []
    for s in range(n):
        for t in rng.sample(range(n), rng.randint(1, n)):
            edges.append((s, t))
    colour = {s: {p for p in props if rng.random() < 0.5} for s in range(n)}
    return TransitionSystem(n, edges, colour)


def random_rooted_system(rng: random.Random, max_states: int = 6,
                         props: Sequence[str] = ("p", "q")) -> TransitionSystem:
    """A random serial system with a strict root (state 0, no incoming edges).

    Strictness keeps the rooted axioms (dia EU(I, top) = bot and the
    reachability rule) true of the complex algebra.
    """
    n = rng.randint(2, max(2, max_states))
    edges = set()
    # span 1..n-1 so everything is reachable from the root
    for s in range(1, n):
        parent = 0 if s == 1 else rng.randint(0, s - 1)
        edges.add((parent, s))
    # extra edges anywhere except into the root
    for s in range(n):
        for t in rng.sample(range(1, n), rng.randint(0, n - 1)):
            edges.add((s, t))
    # seriality: non-root states may only point at non-root states
    for s in range(n):
        if not any(e[0] == s for e in edges):
            edges.add((s, rng.randint(1, n - 1)))
    colour = {s: {p for p in props if rng.random() < 0.5} for s in range(n)}
    return TransitionSystem(n, sorted(edges), colour, root=0)


def random_binary_system(rng: random.Random, max_states: int = 3,
                         props: Sequence[str] = ("p", "q"),
                         rooted: bool = True,
                         strict_root: bool = False) -> TransitionSystem:
    """A random rooted binary generator (f0/f1 total, all states reachable).

    With strict_root the maps avoid state 0, so the root keeps no incoming
    edge (needed for the rooted axioms and the binary tableau wrapper)."""
    lo = 2 if strict_root else 1
    n = rng.randint(lo, max(lo, max_states))
    targets = range(1, n) if strict_root else range(n)
    while True:
        f0 = [rng.choice(list(targets)) for _ in range(n)]
        f1 = [rng.choice(list(targets)) for _ in range(n)]
        seen = {0}
        todo = [0]
        while todo:
            s = todo.pop()
            for t in (f0[s], f1[s]):
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        if len(seen) == n:
            break
    colour = {s: {p for p in props if rng.random() < 0.5} for s in range(n)}
    return TransitionSystem(n, [], colour, root=0 if rooted else None, f0=f0, f1=f1)


def random_masks(rng: random.Random, n_states: int, k: int) -> List[int]:
    full = (1 << n_states) - 1
    return [rng.randint(0, full) for _ in range(k)]


_LEAF_WEIGHTS = [("var", 6), ("nvar", 3), ("top", 1), ("bot", 1)]
_NODE_WEIGHTS = [
    ("or", 3), ("and", 3), ("neg", 2), ("dia", 3), ("box", 2),
    ("eu2", 2), ("eu3", 1), ("eg", 2), ("ar", 1), ("af2", 2), ("af3", 1),
]


def _pick(rng: random.Random, weighted) -> str:
    total = sum(w for _, w in weighted)
    x = rng.randrange(total)
    for name, w in weighted:
        x -= w
        if x < 0:
            return name
    raise AssertionError


def random_formula(rng: random.Random, depth: int,
                   props: Sequence[str] = ("p", "q"),
                   dialect: str = "plain") -> Formula:
    """A random formula of the requested dialect with nesting <= depth."""
    leaves = list(_LEAF_WEIGHTS)
    if dialect in ("rooted", "binary"):
        leaves += [("i", 1), ("ni", 1)]
    if depth == 0:
        kind = _pick(rng, leaves)
        if kind == "var":
            return F.var(rng.choice(list(props)))
        if kind == "nvar":
            return F.neg(F.var(rng.choice(list(props))))
        if kind == "top":
            return F.top()
        if kind == "bot":
            return F.bot()
        if kind == "i":
            return F.root()
        return F.neg(F.root())
    nodes = list(_NODE_WEIGHTS)
    if dialect == "binary":
        nodes += [("x0", 2), ("x1", 2)]
    kind = _pick(rng, nodes)
    sub = lambda: random_formula(rng, rng.randrange(depth), props, dialect)
    if kind == "or":
        return F.or_(sub(), sub())
    if kind == "and":
        return F.and_(sub(), sub())
    if kind == "neg":
        return F.neg(sub())
    if kind == "dia":
        return F.dia(sub())
    if kind == "box":
        return F.box(sub())
    if kind == "eu2":
        return F.eu(sub(), sub())
    if kind == "eu3":
        return F.eu(sub(), sub(), sub())
    if kind == "eg":
        return F.eg(sub(), sub())
    if kind == "ar":
        return F.ar(sub(), sub())
    if kind == "af2":
        return F.af(sub(), sub())
    if kind == "af3":
        return F.af(sub(), sub(), sub())
    if kind == "x0":
        return F.x0(sub())
    return F.x1(sub())


def random_qf_formula(rng: random.Random, props: Sequence[str] = ("p", "q"),
                      max_atoms: int = 3, term_depth: int = 2) -> fol.FO:
    """A quantifier-free first-order formula over <= max_atoms term equalities."""
    atoms = [
        fol.TermEq(random_formula(rng, rng.randint(0, term_depth), props, "rooted"),
                   random_formula(rng, rng.randint(0, term_depth), props, "rooted"))
        for _ in range(rng.randint(1, max_atoms))
    ]
    phi: fol.FO = atoms[0]
    for atom in atoms[1:]:
        kind = rng.choice(["and", "or", "imp", "nand"])
        if kind == "and":
            phi = fol.FAnd(phi, atom)
        elif kind == "or":
            phi = fol.FOr(phi, atom)
        elif kind == "imp":
            phi = fol.FImp(phi, atom)
        else:
            phi = fol.FNeg(fol.FAnd(phi, atom))
    if rng.random() < 0.3:
        phi = fol.FNeg(phi)
    return phi


def random_parity_automaton(rng: random.Random, max_states: int = 3,
                            max_priority: int = 3,
                            props: Sequence[str] = ("p",)) -> ParityTreeAutomaton:
    """A random binary parity tree automaton over P(props)."""
    n = rng.randint(1, max_states)
    states = [f"q{i}" for i in range(n)]
    # lean towards even priorities so accepting instances actually occur
    choices = tuple(p for p in (0, 0, 1, 2, 2, 3) if p <= max_priority)
    omega = {q: rng.choice(choices) for q in states}
    letters = []
    for bits in range(1 << len(props)):
        letters.append(frozenset(p for i, p in enumerate(props) if bits >> i & 1))
    delta = []
    for q in states:
        for letter in letters:
            k = rng.choices((0, 1, 2), weights=(2, 6, 2))[0]
            for _ in range(k):
                delta.append((q, letter, rng.choice(states), rng.choice(states)))
    return ParityTreeAutomaton(list(props), states, states[0], delta, omega)
