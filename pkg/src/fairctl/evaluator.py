"""Fixpoint model checker on finite complex algebras, with brute-force oracles
and the executable axiom suite.

eval() computes, for each formula, the bitmask of states where it holds:
EU/AF by Kleene iteration upward, EG/AR downward, dia as R-preimage, X_i as
f_i-preimage, I as the root singleton.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from . import fol
from . import formulas as F
from .formulas import Formula
from .kernels import Kernel
from .systems import FiniteTree, TransitionSystem


class EvalError(ValueError):
    pass


class UnboundVariableError(EvalError):
    pass


class DialectMismatchError(EvalError):
    pass


class EvalContext:
    """Binds a system and a valuation; memoizes eval results per formula id."""

    def __init__(self, ts: TransitionSystem, valuation: Optional[Dict[str, int]] = None,
                 kernel_force: Optional[str] = None):
        self.ts = ts
        self.valuation = dict(valuation or {})
        self.kernel = Kernel(ts.succ_masks(), force=kernel_force)
        self.full = (1 << ts.n) - 1
        self._x_masks = None
        if ts.is_binary:
            self._x_masks = (Kernel(ts.f_masks(0), force=kernel_force),
                             Kernel(ts.f_masks(1), force=kernel_force))
        self._memo: Dict[int, int] = {}

    def eval(self, f: Formula) -> int:
        out = self._memo.get(f.fid)
        if out is not None:
            return out
        k = f.kind
        if k == F.BOT:
            out = 0
        elif k == F.TOP:
            out = self.full
        elif k == F.VAR:
            try:
                out = self.valuation[f.name]
            except KeyError:
                raise UnboundVariableError(f"unbound variable {f.name!r}") from None
        elif k == F.NEG:
            out = self.full ^ self.eval(f.args[0])
        elif k == F.OR:
            out = self.eval(f.args[0]) | self.eval(f.args[1])
        elif k == F.AND:
            out = self.eval(f.args[0]) & self.eval(f.args[1])
        elif k == F.DIA:
            out = self.kernel.preimage(self.eval(f.args[0]))
        elif k == F.BOX:
            out = self.kernel.box(self.eval(f.args[0]))
        elif k == F.EU:
            a, b, r = (self.eval(g) for g in f.args)
            out = self.kernel.eu(a, b, r)
        elif k == F.AF:
            a, b, r = (self.eval(g) for g in f.args)
            out = self.kernel.af(a, b, r)
        elif k == F.EG:
            out = self.kernel.eg(self.eval(f.args[0]), self.eval(f.args[1]))
        elif k == F.AR:
            out = self.kernel.ar(self.eval(f.args[0]), self.eval(f.args[1]))
        elif k == F.ROOT:
            if self.ts.root is None:
                raise DialectMismatchError("formula uses I but the system has no root")
            out = 1 << self.ts.root
        elif k in (F.X0, F.X1):
            if self._x_masks is None:
                raise DialectMismatchError("formula uses X0/X1 but the system is not binary")
            kern = self._x_masks[0 if k == F.X0 else 1]
            out = kern.preimage(self.eval(f.args[0]))
        else:
            raise AssertionError(k)
        self._memo[f.fid] = out
        return out

    def holds_at(self, f: Formula, s: int) -> bool:
        return bool(self.eval(f) >> s & 1)


def valuation_from_colour(ts: TransitionSystem) -> Dict[str, int]:
    """The valuation V_sigma induced by the system's colouring."""
    val: Dict[str, int] = {p: 0 for p in ts.props()}
    for s in range(ts.n):
        for p in ts.colour[s]:
            val[p] |= 1 << s
    return val


def eval_formula(f: Formula, ts: TransitionSystem,
                 valuation: Optional[Dict[str, int]] = None) -> int:
    """One-shot eval; valuation defaults to the one induced by the colouring."""
    if valuation is None:
        valuation = valuation_from_colour(ts)
    return EvalContext(ts, valuation).eval(f)


def states_of(mask: int, n: int) -> List[int]:
    return [s for s in range(n) if mask >> s & 1]


# -- brute-force oracles ------------------------------------------------------

_ORACLE_LIMIT = 10


def _oracle_guard(ts: TransitionSystem) -> None:
    if ts.n > _ORACLE_LIMIT:
        raise EvalError(f"brute-force oracle limited to {_ORACLE_LIMIT} states")


def brute_force_eu(ts: TransitionSystem, a: int, b: int) -> int:
    """EU(a,b) by explicit path search: a b-path from s ending in an a-state."""
    _oracle_guard(ts)
    out = 0
    for s in range(ts.n):
        if a >> s & 1:
            out |= 1 << s
            continue
        if not b >> s & 1:
            continue
        seen = {s}
        stack = [s]
        found = False
        while stack and not found:
            u = stack.pop()
            for v in ts.succ[u]:
                if a >> v & 1:
                    found = True
                    break
                if b >> v & 1 and v not in seen:
                    seen.add(v)
                    stack.append(v)
        if found:
            out |= 1 << s
    return out


def _simple_cycle_states(ts: TransitionSystem, a: int, b: int) -> set:
    """States on a simple cycle inside the a-subgraph that contains a b-state."""
    good: set = set()
    a_states = [s for s in range(ts.n) if a >> s & 1]
    for start in a_states:
        # DFS over simple paths start..u in the a-subgraph, only via states > start
        # would miss cycles, so allow all states but close only back to start.
        stack = [(start, [start], frozenset([start]))]
        while stack:
            u, path, on_path = stack.pop()
            for v in ts.succ[u]:
                if v == start:
                    if any(b >> w & 1 for w in path):
                        good.update(path)
                elif a >> v & 1 and v not in on_path and v > start:
                    stack.append((v, path + [v], on_path | {v}))
    return good


def brute_force_eg(ts: TransitionSystem, a: int, b: int) -> int:
    """EG(a,b) by lasso search.

    On a finite system, an infinite a-path with b infinitely often exists from
    s iff s lies in a and reaches, inside the a-subgraph, a simple cycle all of
    whose states satisfy a and at least one of which satisfies b.  (The
    infinitely-visited states of such a path are strongly connected and
    include a b-state, hence contain such a cycle; conversely loop forever.)
    """
    _oracle_guard(ts)
    good = _simple_cycle_states(ts, a, b)
    out = 0
    for s in range(ts.n):
        if not a >> s & 1:
            continue
        seen = {s}
        stack = [s]
        hit = s in good
        while stack and not hit:
            u = stack.pop()
            for v in ts.succ[u]:
                if a >> v & 1 and v not in seen:
                    if v in good:
                        hit = True
                        break
                    seen.add(v)
                    stack.append(v)
        if hit:
            out |= 1 << s
    return out


def brute_force_ar(ts: TransitionSystem, a: int, b: int) -> int:
    """De Morgan dual of the EU oracle (documented reduction)."""
    full = (1 << ts.n) - 1
    return full ^ brute_force_eu(ts, full ^ a, full ^ b)


def brute_force_af(ts: TransitionSystem, a: int, b: int) -> int:
    """De Morgan dual of the EG oracle (documented reduction)."""
    full = (1 << ts.n) - 1
    return full ^ brute_force_eg(ts, full ^ a, full ^ b)


# -- prefix forcing on finite tree truncations ---------------------------------

def prefix_force(tree: FiniteTree, node: int, f: Formula) -> Optional[bool]:
    """Three-valued forcing of the prefix-decidable fragment on a finite tree.

    Returns True/False when the truncation determines the answer (literals,
    and/or, dia/box/X_i one step at a time, EU by witness search), None when
    deeper levels would be needed.  EG/AR/AF are properties of infinite
    branches and always map to None; I is the tree root.
    """
    memo: Dict[tuple, Optional[bool]] = {}

    def k3_and(a, b):
        if a is False or b is False:
            return False
        if a is True and b is True:
            return True
        return None

    def k3_or(a, b):
        if a is True or b is True:
            return True
        if a is False and b is False:
            return False
        return None

    def go(v: int, g: Formula) -> Optional[bool]:
        key = (v, g.fid)
        if key in memo:
            return memo[key]
        memo[key] = None  # cycles impossible in a tree; placeholder for safety
        k = g.kind
        if k == F.BOT:
            out = False
        elif k == F.TOP:
            out = True
        elif k == F.VAR:
            out = g.name in tree.colour[v]
        elif k == F.ROOT:
            out = tree.parent[v] is None
        elif k == F.NEG:
            inner = go(v, g.args[0])
            out = None if inner is None else not inner
        elif k == F.AND:
            out = k3_and(go(v, g.args[0]), go(v, g.args[1]))
        elif k == F.OR:
            out = k3_or(go(v, g.args[0]), go(v, g.args[1]))
        elif k in (F.DIA, F.BOX):
            if not tree.children[v]:
                out = None
            else:
                parts = [go(w, g.args[0]) for w in tree.children[v]]
                out = parts[0]
                for x in parts[1:]:
                    out = k3_or(out, x) if k == F.DIA else k3_and(out, x)
        elif k in (F.X0, F.X1):
            side = 0 if k == F.X0 else 1
            kid = next((w for w in tree.children[v] if tree.branch[w] == side), None)
            out = None if kid is None else go(kid, g.args[0])
        elif k == F.EU:
            phi, psi, chi = g.args
            # phi | (psi & exists child (chi & EU))
            out = go(v, phi)
            if out is not True:
                rest = go(v, psi)
                if rest is not False:
                    if not tree.children[v]:
                        step = None
                    else:
                        step = False
                        for w in tree.children[v]:
                            step = k3_or(step, k3_and(go(w, chi), go(w, g)))
                    rest = k3_and(rest, step)
                out = k3_or(out, rest)
        else:  # EG, AR, AF need infinite branches
            out = None
        memo[key] = out
        return out

    return go(node, f)


# -- quantifier-free first-order evaluation -----------------------------------

def eval_qf(phi: fol.FO, ts: TransitionSystem, valuation: Dict[str, int]) -> bool:
    """Boolean combination of L-term equalities, each term evaluated by eval."""
    ctx = EvalContext(ts, valuation)

    def go(p: fol.FO) -> bool:
        if isinstance(p, fol.TermEq):
            return ctx.eval(p.left) == ctx.eval(p.right)
        if isinstance(p, fol.FNeg):
            return not go(p.body)
        if isinstance(p, fol.FAnd):
            return go(p.left) and go(p.right)
        if isinstance(p, fol.FOr):
            return go(p.left) or go(p.right)
        if isinstance(p, fol.FImp):
            return (not go(p.left)) or go(p.right)
        raise EvalError(f"eval_qf: quantifier in {p}")

    return go(phi)


_FO_LIMIT = 8


def eval_fo(phi: fol.FO, ts: TransitionSystem, valuation: Dict[str, int]) -> bool:
    """Full first-order evaluation; quantifiers enumerate all 2^n subsets."""
    if ts.n > _FO_LIMIT:
        raise EvalError(f"first-order evaluation limited to {_FO_LIMIT} states")
    full = (1 << ts.n) - 1

    def go(p: fol.FO, val: Dict[str, int]) -> bool:
        if isinstance(p, fol.TermEq):
            ctx = EvalContext(ts, val)
            return ctx.eval(p.left) == ctx.eval(p.right)
        if isinstance(p, fol.FNeg):
            return not go(p.body, val)
        if isinstance(p, fol.FAnd):
            return go(p.left, val) and go(p.right, val)
        if isinstance(p, fol.FOr):
            return go(p.left, val) or go(p.right, val)
        if isinstance(p, fol.FImp):
            return (not go(p.left, val)) or go(p.right, val)
        if isinstance(p, fol.FForall):
            return all(go(p.body, {**val, p.var: m}) for m in range(full + 1))
        if isinstance(p, fol.FExists):
            return any(go(p.body, {**val, p.var: m}) for m in range(full + 1))
        raise TypeError(f"not an FO formula: {p!r}")

    return go(phi, dict(valuation))


# -- axiom suite ---------------------------------------------------------------

@dataclass
class AxiomViolation:
    axiom: str
    witness: Dict[str, int]

    def __str__(self) -> str:
        w = ", ".join(f"{k}={v:#x}" for k, v in sorted(self.witness.items()))
        return f"{self.axiom}: {w}"


@dataclass
class AxiomReport:
    system_size: int
    checked: int = 0
    violations: List[AxiomViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class _Ops:
    """Operator applications routed through eval on shared templates, cached."""

    _TPL = {
        "eu": F.eu(F.var("va"), F.var("vb")),
        "eg": F.eg(F.var("va"), F.var("vb")),
        "ar": F.ar(F.var("va"), F.var("vb")),
        "af": F.af(F.var("va"), F.var("vb")),
        "eu3": F.eu(F.var("va"), F.var("vb"), F.var("vc")),
        "af3": F.af(F.var("va"), F.var("vb"), F.var("vc")),
        "dia": F.dia(F.var("va")),
        "box": F.box(F.var("va")),
        "x0": F.x0(F.var("va")),
        "x1": F.x1(F.var("va")),
    }

    def __init__(self, ts: TransitionSystem, eval_fn: Optional[Callable] = None):
        self.ts = ts
        self.eval_fn = eval_fn or (lambda tpl, val: EvalContext(ts, val).eval(tpl))
        self.cache: Dict[tuple, int] = {}

    def _app(self, name: str, *masks: int) -> int:
        key = (name, masks)
        out = self.cache.get(key)
        if out is None:
            val = dict(zip(("va", "vb", "vc"), masks))
            out = self.eval_fn(self._TPL[name], val)
            self.cache[key] = out
        return out

    def eu(self, a, b):
        return self._app("eu", a, b)

    def eg(self, a, b):
        return self._app("eg", a, b)

    def ar(self, a, b):
        return self._app("ar", a, b)

    def af(self, a, b):
        return self._app("af", a, b)

    def eu3(self, a, b, r):
        return self._app("eu3", a, b, r)

    def af3(self, a, b, r):
        return self._app("af3", a, b, r)

    def dia(self, a):
        return self._app("dia", a)

    def box(self, a):
        return self._app("box", a)

    def x0(self, a):
        return self._app("x0", a)

    def x1(self, a):
        return self._app("x1", a)


def _leq(x: int, y: int) -> bool:
    return x | y == y


def check_axioms(
    ts: TransitionSystem,
    rng: random.Random,
    n_samples: int = 100,
    exhaustive_limit: int = 4,
    eval_fn: Optional[Callable] = None,
) -> AxiomReport:
    """Check the quasi-equational theory on one complex algebra.

    Inequality axioms and the fixpoint (in)equations are checked per subset
    triple (a,b,c): exhaustively when n <= exhaustive_limit, otherwise on
    n_samples random triples.  Implication axioms test the consequent whenever
    the antecedent holds.  Context rules and the contextual-fixpoint
    characterisations are checked on sampled (gamma,p,q,r) quadruples.
    eval_fn may replace the evaluator (mutation testing).
    """
    ops = _Ops(ts, eval_fn)
    n = ts.n
    full = (1 << n) - 1
    report = AxiomReport(system_size=n)

    def bad(axiom: str, **witness: int) -> None:
        report.violations.append(AxiomViolation(axiom, witness))

    # once-per-system facts
    if ops.dia(0) != 0:
        bad("K-bot")
    if ops.dia(full) != full:
        bad("D")

    # The rooted axioms hold in the complex algebra only when the root has no
    # incoming edges, so non-strict roots are skipped.
    rooted = ts.has_strict_root
    if rooted:
        i_mask = 1 << ts.root
        if i_mask == 0:
            bad("I-nonbot")
        if ops.dia(ops.eu(i_mask, full)) != 0:
            bad("I-prefix")

    if n <= exhaustive_limit:
        triples = [(a, b, c) for a in range(full + 1) for b in range(full + 1)
                   for c in range(full + 1)]
    else:
        triples = [(rng.randrange(full + 1), rng.randrange(full + 1),
                    rng.randrange(full + 1)) for _ in range(n_samples)]

    for a, b, c in triples:
        report.checked += 1
        if ops.dia(a | b) != ops.dia(a) | ops.dia(b):
            bad("K-join", a=a, b=b)
        eu_ab = ops.eu(a, b)
        if not _leq(a | (b & ops.dia(eu_ab)), eu_ab):
            bad("EUfix", a=a, b=b)
        if _leq(a | (b & ops.dia(c)), c) and not _leq(eu_ab, c):
            bad("EUmin", a=a, b=b, c=c)
        eg_ab = ops.eg(a, b)
        if not _leq(eg_ab, a & ops.dia(ops.eu(b & eg_ab, a))):
            bad("EGfix", a=a, b=b)
        if _leq(c, a & ops.dia(ops.eu(b & c, a))) and not _leq(c, eg_ab):
            bad("EGmax", a=a, b=b, c=c)
        ar_ab = ops.ar(a, b)
        if not _leq(ar_ab, a & (b | ops.box(ar_ab))):
            bad("ARfix", a=a, b=b)
        if _leq(c, a & (b | ops.box(c))) and not _leq(c, ar_ab):
            bad("ARmax", a=a, b=b, c=c)
        af_ab = ops.af(a, b)
        if not _leq(a | ops.box(ops.ar(b | af_ab, a)), af_ab):
            bad("AFfix", a=a, b=b)
        if _leq(a | ops.box(ops.ar(b | c, a)), c) and not _leq(af_ab, c):
            bad("AFmin", a=a, b=b, c=c)
        if rooted and a != 0 and not _leq(i_mask, ops.eu(a, full)):
            bad("I-reach", a=a)
        if ts.is_binary:
            x0a = ops.x0(a)
            if ops.dia(a) != x0a | ops.x1(a):
                bad("X-union", a=a)
            if ops.x0(a | b) != x0a | ops.x0(b):
                bad("X-join", a=a, b=b)
            if ops.x0(full ^ a) != full ^ x0a:
                bad("X-neg", a=a)
            if ops.x0(0) != 0 or ops.x1(0) != 0:
                bad("X-bot")

    # context rules and contextual fixpoints, on sampled quadruples
    quads = [(rng.randrange(full + 1), rng.randrange(full + 1),
              rng.randrange(full + 1), rng.randrange(full + 1))
             for _ in range(max(1, n_samples // 2))]
    for g, p, q, r in quads:
        report.checked += 1
        if g & ops.eu3(p, q, r) and not g & ops.eu3(p, q, r & (full ^ g)):
            bad("EU-context", gamma=g, p=p, q=q, r=r)
        if g & ops.af3(p, q, r) and not g & ops.af3(p, q, r & (full ^ g)):
            bad("AF-context", gamma=g, p=p, q=q, r=r)
        # least fixpoint of x -> p | (q & dia(r & x))
        x = 0
        while True:
            nxt = p | (q & ops.dia(r & x))
            if nxt == x:
                break
            x = nxt
        if ops.eu3(p, q, r) != x:
            bad("EUc-lfp", p=p, q=q, r=r)
        # least fixpoint of x -> p | box AR(q | (r & x), p)
        x = 0
        while True:
            nxt = p | ops.box(ops.ar(q | (r & x), p))
            if nxt == x:
                break
            x = nxt
        if ops.af3(p, q, r) != x:
            bad("AFc-lfp", p=p, q=q, r=r)
        af3 = ops.af3(p, q, r)
        if af3 != p | ops.box((q | r) & af3):
            bad("AFc-unfold", p=p, q=q, r=r)

    return report
