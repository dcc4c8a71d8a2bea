"""Finite transition systems, the model file format, and tree expansions.

States are dense integer ids.  Systems are immutable after construction and
double as regular-tree generators: a rooted system generates its unravelling,
a rooted binary system (total f0/f1) generates a colouring of the full binary
tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple


class ModelError(ValueError):
    """Invalid transition system (non-serial, bad root, bad f0/f1, parse error)."""


class TransitionSystem:
    """A finite serial directed graph with per-state proposition sets.

    Optional extras: a root index, and deterministic successor maps f0/f1
    whose graphs must union to the edge relation.
    """

    def __init__(
        self,
        n: int,
        edges: Sequence[Tuple[int, int]],
        colour: Optional[Dict[int, Set[str]]] = None,
        root: Optional[int] = None,
        f0: Optional[Sequence[int]] = None,
        f1: Optional[Sequence[int]] = None,
    ):
        if n <= 0:
            raise ModelError("a system needs at least one state")
        self.n = n
        succ: List[Set[int]] = [set() for _ in range(n)]
        for i, j in edges:
            self._check_state(i)
            self._check_state(j)
            succ[i].add(j)
        self.f0 = list(f0) if f0 is not None else None
        self.f1 = list(f1) if f1 is not None else None
        if (self.f0 is None) != (self.f1 is None):
            raise ModelError("f0 and f1 must be given together")
        if self.f0 is not None:
            if len(self.f0) != n or len(self.f1) != n:
                raise ModelError("f0/f1 must be total (one entry per state)")
            for f in (self.f0, self.f1):
                for j in f:
                    self._check_state(j)
            derived = [set() for _ in range(n)]
            for s in range(n):
                derived[s].add(self.f0[s])
                derived[s].add(self.f1[s])
            if edges and [set(x) for x in succ] != derived:
                raise ModelError("edge relation differs from graph(f0) | graph(f1)")
            succ = derived
        self.succ: List[Tuple[int, ...]] = [tuple(sorted(s)) for s in succ]
        for s in range(n):
            if not self.succ[s]:
                raise ModelError(f"state {s} not serial")
        self.colour: List[frozenset] = [
            frozenset((colour or {}).get(s, ())) for s in range(n)
        ]
        self.root = root
        if root is not None:
            self._check_state(root)
            reach = self.reachable_from(root)
            if len(reach) != n:
                missing = sorted(set(range(n)) - reach)
                raise ModelError(f"states {missing} not reachable from root {root}")
        self.pred: List[Tuple[int, ...]] = [
            tuple(sorted(i for i in range(n) if s in self.succ[i])) for s in range(n)
        ]

    def _check_state(self, s: int) -> None:
        if not 0 <= s < self.n:
            raise ModelError(f"state {s} out of range (n={self.n})")

    @property
    def is_binary(self) -> bool:
        return self.f0 is not None

    @property
    def has_strict_root(self) -> bool:
        """Rooted and the root has no incoming edge (I-semantics is tree-faithful)."""
        return self.root is not None and not self.pred[self.root]

    def reachable_from(self, s: int) -> Set[int]:
        seen = {s}
        todo = [s]
        while todo:
            u = todo.pop()
            for v in self.succ[u]:
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        return seen

    def props(self) -> List[str]:
        names: Set[str] = set()
        for c in self.colour:
            names.update(c)
        return sorted(names)

    def succ_masks(self) -> List[int]:
        """Bitmask successor table (bit j of entry s set iff s -> j)."""
        return [sum(1 << j for j in self.succ[s]) for s in range(self.n)]

    def f_masks(self, i: int) -> List[int]:
        f = self.f0 if i == 0 else self.f1
        return [1 << f[s] for s in range(self.n)]


# -- the line-based model format ---------------------------------------------

def load_system(text: str) -> TransitionSystem:
    """Parse the model format: states/edge/color/root/f0/f1 lines, # comments."""
    n = None
    edges: List[Tuple[int, int]] = []
    colour: Dict[int, Set[str]] = {}
    root = None
    f0: Dict[int, int] = {}
    f1: Dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "states" and len(parts) == 2:
                n = int(parts[1])
            elif parts[0] == "edge" and len(parts) == 3:
                edges.append((int(parts[1]), int(parts[2])))
            elif parts[0] == "color" and len(parts) == 3:
                colour.setdefault(int(parts[1]), set()).add(parts[2])
            elif parts[0] == "root" and len(parts) == 2:
                root = int(parts[1])
            elif parts[0] == "f0" and len(parts) == 3:
                f0[int(parts[1])] = int(parts[2])
            elif parts[0] == "f1" and len(parts) == 3:
                f1[int(parts[1])] = int(parts[2])
            else:
                raise ModelError(f"line {lineno}: cannot parse {raw!r}")
        except ValueError as exc:
            if isinstance(exc, ModelError):
                raise
            raise ModelError(f"line {lineno}: cannot parse {raw!r}") from exc
    if n is None:
        raise ModelError("missing 'states N' line")
    fa = fb = None
    if f0 or f1:
        if sorted(f0) != list(range(n)) or sorted(f1) != list(range(n)):
            raise ModelError("binary systems need f0 and f1 lines for every state")
        fa = [f0[s] for s in range(n)]
        fb = [f1[s] for s in range(n)]
    return TransitionSystem(n, edges, colour, root, fa, fb)


def save_system(ts: TransitionSystem) -> str:
    lines = [f"states {ts.n}"]
    if ts.is_binary:
        for s in range(ts.n):
            lines.append(f"f0 {s} {ts.f0[s]}")
        for s in range(ts.n):
            lines.append(f"f1 {s} {ts.f1[s]}")
    else:
        for s in range(ts.n):
            for t in ts.succ[s]:
                lines.append(f"edge {s} {t}")
    for s in range(ts.n):
        for p in sorted(ts.colour[s]):
            lines.append(f"color {s} {p}")
    if ts.root is not None:
        lines.append(f"root {ts.root}")
    return "\n".join(lines) + "\n"


# -- finite trees ------------------------------------------------------------

@dataclass
class FiniteTree:
    """A finite coloured tree prefix with a node -> generator-state map.

    children[v] lists child node ids in a fixed order; branch[v] is the edge
    label from the parent (the copy index for omega expansions, the direction
    for binary unravellings, 0 otherwise).
    """

    parent: List[Optional[int]] = field(default_factory=list)
    children: List[List[int]] = field(default_factory=list)
    state: List[int] = field(default_factory=list)
    colour: List[frozenset] = field(default_factory=list)
    branch: List[int] = field(default_factory=list)

    def add_node(self, parent: Optional[int], state: int, colour: frozenset,
                 branch: int = 0) -> int:
        v = len(self.parent)
        self.parent.append(parent)
        self.children.append([])
        self.state.append(state)
        self.colour.append(colour)
        self.branch.append(branch)
        if parent is not None:
            self.children[parent].append(v)
        return v

    def __len__(self) -> int:
        return len(self.parent)

    def leaves(self) -> List[int]:
        return [v for v in range(len(self)) if not self.children[v]]

    def depth(self, v: int) -> int:
        d = 0
        while self.parent[v] is not None:
            v = self.parent[v]
            d += 1
        return d


def unravel_to_depth(ts: TransitionSystem, depth: int) -> FiniteTree:
    """Tree of height `depth` whose branches are the R-paths from the root."""
    if ts.root is None:
        raise ModelError("unravelling needs a rooted system")
    tree = FiniteTree()
    tree.add_node(None, ts.root, ts.colour[ts.root])
    frontier = [0]
    for _ in range(depth):
        nxt = []
        for v in frontier:
            s = tree.state[v]
            for t in ts.succ[s]:
                nxt.append(tree.add_node(v, t, ts.colour[t]))
        frontier = nxt
    return tree


def omega_expand_to_depth(ts: TransitionSystem, depth: int, width: int = 2) -> FiniteTree:
    """Truncated omega-expansion: `width` copies of every R-child per node.

    The node's generator state is its image under the projection z; colours
    are copied from that image, so colour(v) == colour(z(v)) by construction.
    """
    if ts.root is None:
        raise ModelError("omega expansion needs a rooted system")
    if width < 1:
        raise ModelError("width must be >= 1")
    tree = FiniteTree()
    tree.add_node(None, ts.root, ts.colour[ts.root])
    frontier = [0]
    for _ in range(depth):
        nxt = []
        for v in frontier:
            s = tree.state[v]
            for t in ts.succ[s]:
                for k in range(width):
                    nxt.append(tree.add_node(v, t, ts.colour[t], branch=k))
        frontier = nxt
    return tree


def binary_unravel_to_depth(ts: TransitionSystem, depth: int) -> FiniteTree:
    """Complete binary tree of height `depth` generated by f0/f1 from the root."""
    if ts.root is None or not ts.is_binary:
        raise ModelError("binary unravelling needs a rooted binary system")
    tree = FiniteTree()
    tree.add_node(None, ts.root, ts.colour[ts.root])
    frontier = [0]
    for _ in range(depth):
        nxt = []
        for v in frontier:
            s = tree.state[v]
            for i, f in ((0, ts.f0), (1, ts.f1)):
                t = f[s]
                nxt.append(tree.add_node(v, t, ts.colour[t], branch=i))
        frontier = nxt
    return tree
