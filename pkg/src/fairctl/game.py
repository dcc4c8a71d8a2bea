"""Recursive (Zielonka-style) solver for min-parity games.

Player 0 wins a play iff the minimum priority occurring infinitely often is
even.  Games must be total (every vertex has a successor); vertices are dense
ints.  Returns winning regions and positional strategies for both players.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Set, Tuple


@dataclass
class ParityGame:
    owner: List[int]                     # 0 or 1 per vertex
    priority: List[int]
    succ: List[List[int]]
    pred: List[List[int]] = field(default_factory=list)

    def __post_init__(self):
        n = len(self.owner)
        if not self.pred:
            self.pred = [[] for _ in range(n)]
            for u in range(n):
                if not self.succ[u]:
                    raise ValueError(f"vertex {u} has no successor (game not total)")
                for w in self.succ[u]:
                    self.pred[w].append(u)

    def __len__(self) -> int:
        return len(self.owner)


def _attractor(g: ParityGame, region: Set[int], target: Set[int],
               player: int) -> Tuple[Set[int], Dict[int, int]]:
    """player-attractor of target within region, with attractor strategy."""
    attr = set(target)
    strat: Dict[int, int] = {}
    cnt = {}
    for v in region:
        if g.owner[v] != player:
            cnt[v] = sum(1 for w in g.succ[v] if w in region)
    queue = list(target)
    while queue:
        u = queue.pop()
        for v in g.pred[u]:
            if v not in region or v in attr:
                continue
            if g.owner[v] == player:
                attr.add(v)
                strat[v] = u
                queue.append(v)
            else:
                cnt[v] -= 1
                if cnt[v] == 0:
                    attr.add(v)
                    queue.append(v)
    return attr, strat


def solve(g: ParityGame) -> Tuple[Set[int], Set[int], Dict[int, int], Dict[int, int]]:
    """(W0, W1, strategy0, strategy1); strategies are positional, defined on the
    winner's own vertices inside their winning region."""

    def rec(region: Set[int]):
        if not region:
            return set(), set(), {}, {}
        p = min(g.priority[v] for v in region)
        player = p & 1
        opponent = 1 - player
        target = {v for v in region if g.priority[v] == p}
        attr, astrat = _attractor(g, region, target, player)
        w0, w1, s0, s1 = rec(region - attr)
        win_opp = w1 if opponent == 1 else w0
        if not win_opp:
            # player wins the whole region: recursive strategy there,
            # attractor strategy towards the priority-p vertices, any edge
            # staying in the region from the rest
            strat = dict(s0 if player == 0 else s1)
            strat.update(astrat)
            for v in region:
                if g.owner[v] == player and v not in strat:
                    strat[v] = next(w for w in g.succ[v] if w in region)
            if player == 0:
                return set(region), set(), strat, {}
            return set(), set(region), {}, strat
        attr_b, bstrat = _attractor(g, region, win_opp, opponent)
        w0b, w1b, s0b, s1b = rec(region - attr_b)
        if opponent == 1:
            return w0b, w1b | attr_b, s0b, {**s1, **bstrat, **s1b}
        return w0b | attr_b, w1b, {**s0, **bstrat, **s0b}, s1b

    return rec(set(range(len(g))))
