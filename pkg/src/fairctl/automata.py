"""Non-deterministic modal automata and binary parity tree automata.

Covers the .aut file format, run-prefix validation, acceptance of regular
colourings via a product parity game, and compilation of acceptance
conditions into fair-CTL terms (acc1 & acc2 & acc3).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from . import formulas as F
from .formulas import Formula
from .evaluator import EvalContext
from .game import ParityGame, solve
from .systems import FiniteTree, TransitionSystem


class AutomatonError(ValueError):
    pass


Letter = FrozenSet[str]


def _subsets(props: Sequence[str]) -> List[Letter]:
    """All subsets of props in binary-counting order (deterministic)."""
    out = []
    for bits in range(1 << len(props)):
        out.append(frozenset(p for i, p in enumerate(props) if bits >> i & 1))
    return out


@dataclass
class ModalAutomaton:
    props: List[str]
    states: List[str]
    init: str
    delta: Dict[Tuple[str, Letter], Tuple[FrozenSet[str], ...]]
    omega: Dict[str, int]

    def __post_init__(self):
        if self.init not in self.states:
            raise AutomatonError(f"initial state {self.init!r} not declared")
        for q in self.states:
            if q not in self.omega:
                raise AutomatonError(f"state {q!r} has no priority")
        for (q, letter), moves in self.delta.items():
            if q not in self.states:
                raise AutomatonError(f"delta from undeclared state {q!r}")
            if not letter <= set(self.props):
                raise AutomatonError(f"letter {sorted(letter)} uses undeclared props")
            for d in moves:
                if not d <= set(self.states):
                    raise AutomatonError(f"move {sorted(d)} uses undeclared states")

    def moves(self, q: str, letter: Letter) -> Tuple[FrozenSet[str], ...]:
        return self.delta.get((q, letter), ())


@dataclass
class ParityTreeAutomaton:
    props: List[str]
    states: List[str]
    init: str
    delta: List[Tuple[str, Letter, str, str]]
    omega: Dict[str, int]

    def __post_init__(self):
        if self.init not in self.states:
            raise AutomatonError(f"initial state {self.init!r} not declared")
        for q in self.states:
            if q not in self.omega:
                raise AutomatonError(f"state {q!r} has no priority")
        for (q, letter, q0, q1) in self.delta:
            if q not in self.states or q0 not in self.states or q1 not in self.states:
                raise AutomatonError("delta uses undeclared states")
            if not letter <= set(self.props):
                raise AutomatonError(f"letter {sorted(letter)} uses undeclared props")
        key = {q: i for i, q in enumerate(self.states)}

        def rank(tr):
            q, letter, q0, q1 = tr
            bits = sum(1 << i for i, p in enumerate(self.props) if p in letter)
            return (key[q], bits, key[q0], key[q1])

        self.delta = sorted(self.delta, key=rank)

    def options(self, q: str, letter: Letter) -> List[Tuple[str, str]]:
        return [(q0, q1) for (qq, a, q0, q1) in self.delta
                if qq == q and a == letter]


# -- the .aut format -----------------------------------------------------------

def _parse_brace_set(tok: str) -> FrozenSet[str]:
    tok = tok.strip()
    if not (tok.startswith("{") and tok.endswith("}")):
        raise AutomatonError(f"expected a brace set, got {tok!r}")
    inner = tok[1:-1].strip()
    return frozenset(inner.split()) if inner else frozenset()


def parse_automaton(text: str):
    """Parse the .aut format; returns a ModalAutomaton or ParityTreeAutomaton."""
    kind = None
    props: List[str] = []
    states: List[str] = []
    init = None
    omega: Dict[str, int] = {}
    modal_delta: Dict[Tuple[str, Letter], list] = {}
    parity_delta: List[Tuple[str, Letter, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        try:
            if head in ("modal", "parity") and len(parts) == 1:
                kind = head
            elif head == "props":
                props = parts[1:]
            elif head == "states":
                states = parts[1:]
            elif head == "init" and len(parts) == 2:
                init = parts[1]
            elif head == "prio" and len(parts) == 3:
                omega[parts[1]] = int(parts[2])
            elif head == "delta":
                if "->" not in line:
                    raise AutomatonError("delta line needs '->'")
                lhs, rhs = line[len("delta"):].split("->", 1)
                lhs_parts = lhs.split(None, 1)
                q = lhs_parts[0].strip()
                letter = _parse_brace_set(lhs_parts[1])
                if kind == "modal":
                    moves = [ _parse_brace_set(tok) for tok in rhs.split("|") ]
                    modal_delta.setdefault((q, letter), []).extend(moves)
                elif kind == "parity":
                    succ = rhs.split()
                    if len(succ) != 2:
                        raise AutomatonError("parity delta needs two successor states")
                    parity_delta.append((q, letter, succ[0], succ[1]))
                else:
                    raise AutomatonError("delta before the modal/parity header")
            else:
                raise AutomatonError(f"cannot parse {raw!r}")
        except AutomatonError as exc:
            raise AutomatonError(f"line {lineno}: {exc}") from None
    if kind is None or init is None:
        raise AutomatonError("missing modal/parity header or init line")
    if kind == "modal":
        key = {q: i for i, q in enumerate(states)}
        canon = {
            k: tuple(sorted(set(v), key=lambda d: (len(d), sorted(key[q] for q in d))))
            for k, v in modal_delta.items()
        }
        return ModalAutomaton(props, states, init, canon, omega)
    return ParityTreeAutomaton(props, states, init, parity_delta, omega)


def save_automaton(aut) -> str:
    lines = ["modal" if isinstance(aut, ModalAutomaton) else "parity"]
    lines.append("props " + " ".join(aut.props))
    lines.append("states " + " ".join(aut.states))
    lines.append(f"init {aut.init}")
    for q in aut.states:
        lines.append(f"prio {q} {aut.omega[q]}")
    if isinstance(aut, ModalAutomaton):
        for (q, letter), moves in sorted(
                aut.delta.items(),
                key=lambda kv: (aut.states.index(kv[0][0]), sorted(kv[0][1]))):
            rhs = " | ".join("{" + " ".join(sorted(d)) + "}" for d in moves)
            lines.append(f"delta {q} {{{' '.join(sorted(letter))}}} -> {rhs}")
    else:
        for (q, letter, q0, q1) in aut.delta:
            lines.append(f"delta {q} {{{' '.join(sorted(letter))}}} -> {q0} {q1}")
    return "\n".join(lines) + "\n"


# -- run-prefix validation -------------------------------------------------------

@dataclass
class RunViolation:
    kind: str            # "initial" | "transition" | "success" | "labelling"
    node: int
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} at node {self.node}: {self.detail}"


def check_run_prefix(aut, tree: FiniteTree, labelling: Dict[int, str],
                     lassos: Sequence[Tuple[List[int], int]] = ()) -> List[RunViolation]:
    """Check Initial and Transition exactly on the prefix; check the parity
    condition on branches that come with a lasso certificate (path, cycle
    start), where Inf is the set of states on the certified cycle."""
    out: List[RunViolation] = []
    for v in range(len(tree)):
        if labelling.get(v) is None:
            out.append(RunViolation("labelling", v, "node has no state"))
            return out
    if labelling[0] != aut.init:
        out.append(RunViolation("initial", 0,
                                f"r(root) = {labelling[0]!r}, expected {aut.init!r}"))
    delta_set = None if isinstance(aut, ModalAutomaton) else set(aut.delta)
    for v in range(len(tree)):
        kids = tree.children[v]
        if not kids:
            continue
        letter = frozenset(tree.colour[v]) & frozenset(aut.props)
        if isinstance(aut, ModalAutomaton):
            seen = frozenset(labelling[w] for w in kids)
            if seen not in aut.moves(labelling[v], letter):
                out.append(RunViolation(
                    "transition", v,
                    f"children states {sorted(seen)} not in delta({labelling[v]}, "
                    f"{sorted(letter)})"))
        else:
            by_branch = {tree.branch[w]: w for w in kids}
            if set(by_branch) != {0, 1}:
                continue
            trans = (labelling[v], letter,
                     labelling[by_branch[0]], labelling[by_branch[1]])
            if trans not in delta_set:
                out.append(RunViolation(
                    "transition", v,
                    f"({trans[0]}, {sorted(letter)}, {trans[2]}, {trans[3]}) not in Delta"))
    for path, cycle_start in lassos:
        for a, b in zip(path, path[1:]):
            if b not in tree.children[a]:
                out.append(RunViolation("success", a,
                                        f"lasso step {a}->{b} is not a tree edge"))
                break
        else:
            inf_states = {labelling[v] for v in path[cycle_start:]}
            if not inf_states:
                out.append(RunViolation("success", path[0], "empty lasso cycle"))
                continue
            lo = min(aut.omega[q] for q in inf_states)
            if lo % 2 == 1:
                out.append(RunViolation(
                    "success", path[cycle_start],
                    f"min priority {lo} on cycle states {sorted(inf_states)} is odd"))
    return out


# -- acceptance of regular colourings ---------------------------------------------

@dataclass
class RegularRun:
    """A positional successful run on the product of generator and automaton."""

    aut: ParityTreeAutomaton
    gen: TransitionSystem
    pairs: List[Tuple[int, str]]                  # reachable (state, q), BFS order
    choice: Dict[Tuple[int, str], Tuple[str, str]]

    def to_system(self) -> Tuple[TransitionSystem, Dict[str, int]]:
        """The strategy product as a rooted binary system plus a valuation for
        the automaton-state variables and the generator propositions.

        A fresh copy of the initial pair serves as state 0, so the root has no
        incoming edges (faithful I semantics); the original initial pair gets
        its own state only if the strategy re-reaches it."""
        gen, aut = self.gen, self.aut
        start = (gen.root, aut.init)

        def kids(pair: Tuple[int, str]) -> Tuple[Tuple[int, str], Tuple[int, str]]:
            s, q = pair
            q0, q1 = self.choice[pair]
            return (gen.f0[s], q0), (gen.f1[s], q1)

        order: List[Tuple[int, str]] = []
        seen = set()
        queue = [k for k in kids(start)]
        while queue:
            pair = queue.pop(0)
            if pair in seen:
                continue
            seen.add(pair)
            order.append(pair)
            queue.extend(kids(pair))
        index = {pair: i + 1 for i, pair in enumerate(order)}
        n = len(order) + 1
        f0 = [0] * n
        f1 = [0] * n
        k0, k1 = kids(start)
        f0[0], f1[0] = index[k0], index[k1]
        for pair, i in index.items():
            a, b = kids(pair)
            f0[i], f1[i] = index[a], index[b]
        colour = {0: set(gen.colour[gen.root]) | {aut.init}}
        for (s, q), i in index.items():
            colour[i] = set(gen.colour[s]) | {q}
        ts = TransitionSystem(n, [], colour, root=0, f0=f0, f1=f1)
        val: Dict[str, int] = {p: 0 for p in list(aut.props) + list(aut.states)}
        for s in range(n):
            for name in colour[s]:
                val[name] |= 1 << s
        return ts, val


@dataclass
class AcceptanceResult:
    accepts: bool
    run: Optional[RegularRun]
    game_size: int


def _check_alphabet(aut, gen: TransitionSystem) -> None:
    extra = set(gen.props()) - set(aut.props)
    if extra:
        raise AutomatonError(
            f"generator uses propositions {sorted(extra)} outside the automaton "
            f"alphabet {aut.props}")


def accepts_regular(aut: ParityTreeAutomaton, gen: TransitionSystem) -> AcceptanceResult:
    """Decide acceptance of the regular tree generated by a rooted binary
    system, by solving the product parity game (automaton resolves
    non-determinism, adversary picks the branch)."""
    if gen.root is None or not gen.is_binary:
        raise AutomatonError("acceptance needs a rooted binary generator")
    _check_alphabet(aut, gen)

    neutral = max(aut.omega.values()) + 2
    owner: List[int] = []
    priority: List[int] = []
    succ: List[List[int]] = []

    def new_vertex(o: int, p: int) -> int:
        owner.append(o)
        priority.append(p)
        succ.append([])
        return len(owner) - 1

    sink = new_vertex(1, 1)
    succ[sink].append(sink)

    eve: Dict[Tuple[int, str], int] = {}
    todo: List[Tuple[int, str]] = []

    def eve_vertex(pair: Tuple[int, str]) -> int:
        v = eve.get(pair)
        if v is None:
            v = eve[pair] = new_vertex(0, aut.omega[pair[1]])
            todo.append(pair)
        return v

    start = (gen.root, aut.init)
    eve_vertex(start)
    adam_info: Dict[int, Tuple[Tuple[int, str], Tuple[str, str]]] = {}
    while todo:
        pair = todo.pop()
        s, q = pair
        v = eve[pair]
        letter = frozenset(gen.colour[s]) & frozenset(aut.props)
        opts = aut.options(q, letter)
        if not opts:
            succ[v].append(sink)
            continue
        for q0, q1 in opts:
            a = new_vertex(1, neutral)
            adam_info[a] = (pair, (q0, q1))
            succ[v].append(a)
            succ[a].append(eve_vertex((gen.f0[s], q0)))
            succ[a].append(eve_vertex((gen.f1[s], q1)))

    g = ParityGame(owner, priority, succ)
    w0, _, s0, _ = solve(g)
    if eve[start] not in w0:
        return AcceptanceResult(False, None, len(g))

    # positional strategy -> reachable product and its transition choices
    choice: Dict[Tuple[int, str], Tuple[str, str]] = {}
    pairs: List[Tuple[int, str]] = []
    seen = {start}
    queue = [start]
    while queue:
        pair = queue.pop(0)
        pairs.append(pair)
        s, q = pair
        a = s0[eve[pair]]
        _, (q0, q1) = adam_info[a]
        choice[pair] = (q0, q1)
        for nxt in ((gen.f0[s], q0), (gen.f1[s], q1)):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return AcceptanceResult(True, RegularRun(aut, gen, pairs, choice), len(g))


def exhaustive_labelling_search(aut: ParityTreeAutomaton, gen: TransitionSystem,
                                cap: int = 500000) -> Optional[RegularRun]:
    """Independent refutation oracle: enumerate every positional transition
    choice on the reachable product and return a run whose induced labelling
    makes eval(acc) cover all states, or None.

    Positional determinacy of parity games justifies searching positional
    labellings only (documented oracle assumption)."""
    if gen.root is None or not gen.is_binary:
        raise AutomatonError("acceptance needs a rooted binary generator")
    _check_alphabet(aut, gen)
    acc = compile_acc_binary(aut)
    start = (gen.root, aut.init)
    budget = [cap]

    def reachable(assign):
        seen = [start]
        frontier = [start]
        unassigned = []
        while frontier:
            pair = frontier.pop(0)
            if pair not in assign:
                unassigned.append(pair)
                continue
            s, q = pair
            q0, q1 = assign[pair]
            for nxt in ((gen.f0[s], q0), (gen.f1[s], q1)):
                if nxt not in seen:
                    seen.append(nxt)
                    frontier.append(nxt)
        return seen, unassigned

    def search(assign) -> Optional[RegularRun]:
        budget[0] -= 1
        if budget[0] < 0:
            raise AutomatonError("labelling search budget exceeded")
        seen, unassigned = reachable(assign)
        if not unassigned:
            pairs = [p for p in seen]
            run = RegularRun(aut, gen, pairs, {p: assign[p] for p in pairs})
            ts, val = run.to_system()
            if EvalContext(ts, val).eval(acc) == (1 << ts.n) - 1:
                return run
            return None
        pair = unassigned[0]
        s, q = pair
        letter = frozenset(gen.colour[s]) & frozenset(aut.props)
        for opt in aut.options(q, letter):
            assign[pair] = opt
            found = search(assign)
            if found is not None:
                return found
            del assign[pair]
        return None

    return search({})


# -- acceptance-condition compilation ---------------------------------------------

def _state_vars(aut) -> Dict[str, Formula]:
    clash = set(aut.props) & set(aut.states)
    if clash:
        raise AutomatonError(f"state names collide with propositions: {sorted(clash)}")
    return {q: F.var(q) for q in aut.states}


def _odot(props: Sequence[str], letter: Letter) -> Formula:
    """conj of props in the letter and negated props outside it."""
    return F.conj([F.var(p) if p in letter else F.neg(F.var(p)) for p in props])


def _acc3(aut, qv: Dict[str, Formula]) -> Formula:
    """AF(disj of lower-priority states, conj of negated priority-n states),
    one conjunct per odd n in the range of Omega."""
    odd = sorted({n for n in aut.omega.values() if n % 2 == 1})
    conjuncts = []
    for n in odd:
        below = F.disj([qv[q] for q in aut.states if aut.omega[q] < n])
        at_n = F.conj([F.neg(qv[q]) for q in aut.states if aut.omega[q] == n])
        conjuncts.append(F.af(below, at_n))
    return F.conj(conjuncts)


def _mutex(aut, qv: Dict[str, Formula], q: str) -> Formula:
    return F.conj([F.neg(qv[qq]) for qq in aut.states if qq != q])


def compile_acc_modal(aut: ModalAutomaton) -> Formula:
    """acc1 & acc2 & acc3 for a non-deterministic modal automaton.

    acc1 = ~I | q0; acc2 quantifies the transition table with
    nabla(D) = conj dia q & box(disj q) and the letter formula; acc3 encodes
    the min-parity condition with binary AF.  Empty disjunction is false,
    empty conjunction true.
    """
    qv = _state_vars(aut)
    acc1 = F.or_(F.neg(F.root()), qv[aut.init])
    branches = []
    for q in aut.states:
        moves = []
        for letter in _subsets(aut.props):
            for d in aut.moves(q, letter):
                ordered = [qq for qq in aut.states if qq in d]
                nabla = F.and_(F.conj([F.dia(qv[qq]) for qq in ordered]),
                               F.box(F.disj([qv[qq] for qq in ordered])))
                moves.append(F.and_(nabla, _odot(aut.props, letter)))
        branches.append(F.and_(F.and_(qv[q], _mutex(aut, qv, q)), F.disj(moves)))
    acc2 = F.disj(branches)
    return F.and_(F.and_(acc1, acc2), _acc3(aut, qv))


def compile_acc_binary(aut: ParityTreeAutomaton) -> Formula:
    """Binary variant: bullet(theta) = X0 q0 & X1 q1 & letter formula."""
    qv = _state_vars(aut)
    acc1 = F.or_(F.neg(F.root()), qv[aut.init])
    branches = []
    for q in aut.states:
        moves = []
        for (qq, letter, q0, q1) in aut.delta:
            if qq != q:
                continue
            bullet = F.and_(F.and_(F.x0(qv[q0]), F.x1(qv[q1])),
                            _odot(aut.props, letter))
            moves.append(bullet)
        branches.append(F.and_(F.and_(qv[q], _mutex(aut, qv, q)), F.disj(moves)))
    acc2 = F.disj(branches)
    return F.and_(F.and_(acc1, acc2), _acc3(aut, qv))
