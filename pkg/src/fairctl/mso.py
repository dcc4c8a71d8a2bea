"""Monadic second-order formulas, the standard translation, and the
quantifier-free-to-equation reductions.

MSO syntax is the reduced one: atoms sub(p,q) / edge(p,q) (plus f0/f1 in the
S2S dialect), connectives ~ & |, and set quantifiers.  First-order variables
are singleton-forced set variables; they get their own quantifier forms
ex1/all1 so the evaluator can honour the convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple, Union

from . import fol
from . import formulas as F
from .formulas import Formula
from .systems import TransitionSystem


class MSOError(ValueError):
    pass


@dataclass(frozen=True)
class MSub:
    left: str
    right: str


@dataclass(frozen=True)
class MEdge:
    left: str
    right: str


@dataclass(frozen=True)
class MF0:
    left: str
    right: str


@dataclass(frozen=True)
class MF1:
    left: str
    right: str


@dataclass(frozen=True)
class MNeg:
    body: "MSO"


@dataclass(frozen=True)
class MAnd:
    left: "MSO"
    right: "MSO"


@dataclass(frozen=True)
class MOr:
    left: "MSO"
    right: "MSO"


@dataclass(frozen=True)
class MEx:
    var: str
    body: "MSO"
    first_order: bool = False


@dataclass(frozen=True)
class MAll:
    var: str
    body: "MSO"
    first_order: bool = False


MSO = Union[MSub, MEdge, MF0, MF1, MNeg, MAnd, MOr, MEx, MAll]


def mimp(a: MSO, b: MSO) -> MSO:
    return MOr(MNeg(a), b)


def miff(a: MSO, b: MSO) -> MSO:
    return MAnd(mimp(a, b), mimp(b, a))


def meq(p: str, q: str) -> MSO:
    """p = q as the abbreviation (p sub q) & (q sub p)."""
    return MAnd(MSub(p, q), MSub(q, p))


def dialect_of(phi: MSO) -> str:
    if any(isinstance(g, (MF0, MF1)) for g in walk(phi)):
        return "s2s"
    return "mso"


def walk(phi: MSO) -> Iterable[MSO]:
    yield phi
    if isinstance(phi, MNeg):
        yield from walk(phi.body)
    elif isinstance(phi, (MAnd, MOr)):
        yield from walk(phi.left)
        yield from walk(phi.right)
    elif isinstance(phi, (MEx, MAll)):
        yield from walk(phi.body)


def free_vars(phi: MSO) -> frozenset:
    if isinstance(phi, (MSub, MEdge, MF0, MF1)):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, MNeg):
        return free_vars(phi.body)
    if isinstance(phi, (MAnd, MOr)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (MEx, MAll)):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(f"not an MSO formula: {phi!r}")


# -- printing / parsing ----------------------------------------------------------

def print_mso(phi: MSO) -> str:
    def p(g: MSO, level: int) -> str:
        if isinstance(g, MSub):
            return f"sub({g.left},{g.right})"
        if isinstance(g, MEdge):
            return f"edge({g.left},{g.right})"
        if isinstance(g, MF0):
            return f"f0({g.left},{g.right})"
        if isinstance(g, MF1):
            return f"f1({g.left},{g.right})"
        if isinstance(g, MNeg):
            return f"~{p(g.body, 2)}"
        if isinstance(g, MAnd):
            s = f"{p(g.left, 1)} & {p(g.right, 2)}"
            return f"({s})" if level > 1 else s
        if isinstance(g, MOr):
            s = f"{p(g.left, 0)} | {p(g.right, 1)}"
            return f"({s})" if level > 0 else s
        if isinstance(g, (MEx, MAll)):
            kw = "ex" if isinstance(g, MEx) else "all"
            if g.first_order:
                kw += "1"
            s = f"{kw} {g.var}. {p(g.body, 0)}"
            return f"({s})" if level > 0 else s
        raise TypeError(repr(g))

    return p(phi, 0)


class _MSOParser:
    def __init__(self, text: str, dialect: str):
        self.text = text
        self.pos = 0
        self.dialect = dialect

    def error(self, msg: str) -> MSOError:
        return MSOError(f"{msg} (at position {self.pos})")

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, tok: str):
        self.skip()
        if not self.text.startswith(tok, self.pos):
            raise self.error(f"expected {tok!r}")
        self.pos += len(tok)

    def ident(self) -> Optional[str]:
        self.skip()
        i = self.pos
        if i < len(self.text) and (self.text[i].isalpha() or self.text[i] == "_"):
            j = i + 1
            while j < len(self.text) and (self.text[j].isalnum() or self.text[j] == "_"):
                j += 1
            self.pos = j
            return self.text[i:j]
        return None

    def parse(self) -> MSO:
        f = self.parse_or()
        self.skip()
        if self.pos != len(self.text):
            raise self.error("trailing input")
        return f

    def parse_or(self) -> MSO:
        f = self.parse_and()
        while self.peek() == "|":
            self.eat("|")
            f = MOr(f, self.parse_and())
        return f

    def parse_and(self) -> MSO:
        f = self.parse_unary()
        while self.peek() == "&":
            self.eat("&")
            f = MAnd(f, self.parse_unary())
        return f

    def parse_unary(self) -> MSO:
        if self.peek() == "~":
            self.eat("~")
            return MNeg(self.parse_unary())
        save = self.pos
        word = self.ident()
        if word in ("ex", "all", "ex1", "all1"):
            var = self.ident()
            if var is None:
                raise self.error("expected a variable after quantifier")
            self.eat(".")
            body = self.parse_or()
            cls = MEx if word.startswith("ex") else MAll
            return cls(var, body, first_order=word.endswith("1"))
        self.pos = save
        return self.parse_atom()

    def parse_atom(self) -> MSO:
        if self.peek() == "(":
            self.eat("(")
            f = self.parse_or()
            self.eat(")")
            return f
        word = self.ident()
        if word in ("sub", "edge", "f0", "f1"):
            if word in ("f0", "f1") and self.dialect != "s2s":
                raise self.error(f"{word} atoms need the s2s dialect")
            self.eat("(")
            a = self.ident()
            self.eat(",")
            b = self.ident()
            self.eat(")")
            if a is None or b is None:
                raise self.error("atom needs two variables")
            cls = {"sub": MSub, "edge": MEdge, "f0": MF0, "f1": MF1}[word]
            return cls(a, b)
        raise self.error("expected an MSO formula")


def parse_mso(text: str, dialect: str = "mso") -> MSO:
    return _MSOParser(text, dialect).parse()


# -- standard translation ---------------------------------------------------------

class _Fresh:
    def __init__(self, taken: Iterable[str]):
        self.taken = set(taken)
        self.counters: Dict[str, int] = {}

    def __call__(self, stem: str) -> str:
        i = self.counters.get(stem, 0)
        while True:
            i += 1
            name = f"{stem}{i}"
            if name not in self.taken:
                self.counters[stem] = i
                self.taken.add(name)
                return name


def _pre(t1: Formula, t2: Formula, p_hook, q: str, fresh: _Fresh, tr) -> MSO:
    """Pre_{t1,t2}(p,q) = all1 v'. (([t1.(v') & p(v')] | [t2.(v') & edge(v',q)]) -> v' in q).

    p_hook(v') builds the p-part; the EU clause passes the trivial (v'=v')."""
    vp = fresh("v")
    body = mimp(
        MOr(MAnd(tr(t1, vp), p_hook(vp)),
            MAnd(tr(t2, vp), MEdge(vp, q))),
        MSub(vp, q),
    )
    return MAll(vp, body, first_order=True)


def standard_translation(t: Formula, var: str = "v",
                         dialect: str = "rooted") -> MSO:
    """The MSO formula t.(p-bar, var) for an L-term, by the paper's clauses.

    Derived operators are expanded first, so only the basic signature is
    translated.  X0/X1 use the f0/f1 atoms (S2S dialect).
    """
    t = F.expand_derived(t)
    fresh = _Fresh(t.variables() | {var})

    def tr(g: Formula, v: str) -> MSO:
        k = g.kind
        if k == F.VAR:
            return MSub(v, g.name)
        if k == F.BOT:
            return MNeg(meq(v, v))
        if k == F.OR:
            return MOr(tr(g.args[0], v), tr(g.args[1], v))
        if k == F.NEG:
            return MNeg(tr(g.args[0], v))
        if k == F.DIA:
            vp = fresh("v")
            return MEx(vp, MAnd(MEdge(v, vp), tr(g.args[0], vp)), first_order=True)
        if k == F.ROOT:
            vp = fresh("v")
            return MAll(vp, MNeg(MEdge(vp, v)), first_order=True)
        if k in (F.X0, F.X1):
            if dialect != "s2s":
                raise MSOError("X0/X1 need the s2s dialect")
            vp = fresh("v")
            atom = MF0(v, vp) if k == F.X0 else MF1(v, vp)
            return MEx(vp, MAnd(atom, tr(g.args[0], vp)), first_order=True)
        if k == F.EU:
            t1, t2, chi = g.args
            assert chi.kind == F.TOP, "expand_derived leaves only binary EU"
            q = fresh("q")
            pre = _pre(t1, t2, lambda vp: meq(vp, vp), q, fresh, tr)
            return MAll(q, mimp(pre, MSub(v, q)))
        if k == F.EG:
            t1, t2 = g.args
            p = fresh("p")
            vp = fresh("v")
            vpp = fresh("v")
            q = fresh("q")
            pre = _pre(t2, t1, lambda u: MSub(u, p), q, fresh, tr)
            inner = MAnd(
                tr(t1, vp),
                MEx(vpp, MAnd(MEdge(vp, vpp),
                              MAll(q, mimp(pre, MSub(vpp, q)))),
                    first_order=True))
            return MEx(p, MAnd(MSub(v, p),
                               MAll(vp, mimp(MSub(vp, p), inner), first_order=True)))
        raise AssertionError(f"non-basic node {k} after expansion")

    return tr(t, var)


def fo_to_mso(phi: fol.FO, dialect: str = "rooted") -> MSO:
    """Replace every atom t1 = t2 by all1 v. (t1.(v) <-> t2.(v)); keep the
    quantifier structure (term variables become set variables)."""
    if isinstance(phi, fol.TermEq):
        v = "v"
        taken = phi.left.variables() | phi.right.variables()
        while v in taken:
            v += "_"
        return MAll(v, miff(standard_translation(phi.left, v, dialect),
                            standard_translation(phi.right, v, dialect)),
                    first_order=True)
    if isinstance(phi, fol.FNeg):
        return MNeg(fo_to_mso(phi.body, dialect))
    if isinstance(phi, fol.FAnd):
        return MAnd(fo_to_mso(phi.left, dialect), fo_to_mso(phi.right, dialect))
    if isinstance(phi, fol.FOr):
        return MOr(fo_to_mso(phi.left, dialect), fo_to_mso(phi.right, dialect))
    if isinstance(phi, fol.FImp):
        return mimp(fo_to_mso(phi.left, dialect), fo_to_mso(phi.right, dialect))
    if isinstance(phi, fol.FForall):
        return MAll(phi.var, fo_to_mso(phi.body, dialect))
    if isinstance(phi, fol.FExists):
        return MEx(phi.var, fo_to_mso(phi.body, dialect))
    raise TypeError(f"not an FO formula: {phi!r}")


# -- quantifier-free reduction to (in)equations -----------------------------------

def _to_and_neg(phi: fol.FO) -> fol.FO:
    """Rewrite or / -> through the and/neg basis the reduction is stated for."""
    if isinstance(phi, fol.TermEq):
        return phi
    if isinstance(phi, fol.FNeg):
        return fol.FNeg(_to_and_neg(phi.body))
    if isinstance(phi, fol.FAnd):
        return fol.FAnd(_to_and_neg(phi.left), _to_and_neg(phi.right))
    if isinstance(phi, fol.FOr):
        return fol.FNeg(fol.FAnd(fol.FNeg(_to_and_neg(phi.left)),
                                 fol.FNeg(_to_and_neg(phi.right))))
    if isinstance(phi, fol.FImp):
        return fol.FNeg(fol.FAnd(_to_and_neg(phi.left),
                                 fol.FNeg(_to_and_neg(phi.right))))
    raise MSOError(f"qf reduction needs a quantifier-free formula, got {phi}")


def qf_to_equation(phi: fol.FO) -> Formula:
    """The L-term t with phi <-> (t = top) over rooted algebras.

    Atoms t1 = t2 become (t1 & t2) | (~t1 & ~t2); conjunction is conjunction;
    negation goes through I: ~psi becomes ~I | EU(~t_psi, true).
    """
    phi = _to_and_neg(phi)

    def go(p: fol.FO) -> Formula:
        if isinstance(p, fol.TermEq):
            return F.or_(F.and_(p.left, p.right),
                         F.and_(F.neg(p.left), F.neg(p.right)))
        if isinstance(p, fol.FAnd):
            return F.and_(go(p.left), go(p.right))
        if isinstance(p, fol.FNeg):
            return F.or_(F.neg(F.root()), F.eu(F.neg(go(p.body)), F.top()))
        raise AssertionError(repr(p))

    return go(phi)


def qf_to_nonbot(phi: fol.FO) -> Formula:
    """The L-term t' with phi <-> (t' != bot): t' = I & ~EU(~t_phi, true)."""
    return F.and_(F.root(), F.neg(F.eu(F.neg(qf_to_equation(phi)), F.top())))


# -- evaluation on finite structures ----------------------------------------------

_MSO_LIMIT = 8


def mso_eval(phi: MSO, ts: TransitionSystem, assign: Dict[str, int]) -> bool:
    """Standard MSO semantics on a finite system; set quantifiers enumerate
    all subsets, first-order quantifiers enumerate singletons.  Memoized per
    (subformula, bindings of its free variables)."""
    if ts.n > _MSO_LIMIT:
        raise MSOError(f"mso_eval limited to {_MSO_LIMIT} states")
    full = (1 << ts.n) - 1
    succ_masks = ts.succ_masks()
    fv_cache: Dict[int, frozenset] = {}
    memo: Dict[tuple, bool] = {}

    def fv(g: MSO) -> frozenset:
        out = fv_cache.get(id(g))
        if out is None:
            out = fv_cache[id(g)] = free_vars(g)
        return out

    def ev(g: MSO, env: Dict[str, int]) -> bool:
        key = (id(g), tuple(sorted((v, env[v]) for v in fv(g))))
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(g, MSub):
            out = env[g.left] & ~env[g.right] == 0
        elif isinstance(g, MEdge):
            p, q = env[g.left], env[g.right]
            out = any(succ_masks[s] & q for s in range(ts.n) if p >> s & 1)
        elif isinstance(g, (MF0, MF1)):
            if not ts.is_binary:
                raise MSOError("f0/f1 atoms need a binary system")
            fmap = ts.f0 if isinstance(g, MF0) else ts.f1
            p, q = env[g.left], env[g.right]
            out = any(q >> fmap[s] & 1 for s in range(ts.n) if p >> s & 1)
        elif isinstance(g, MNeg):
            out = not ev(g.body, env)
        elif isinstance(g, MAnd):
            out = ev(g.left, env) and ev(g.right, env)
        elif isinstance(g, MOr):
            out = ev(g.left, env) or ev(g.right, env)
        elif isinstance(g, (MEx, MAll)):
            if g.first_order:
                domain = [1 << s for s in range(ts.n)]
            else:
                domain = range(full + 1)
            nested = (ev(g.body, {**env, g.var: m}) for m in domain)
            out = any(nested) if isinstance(g, MEx) else all(nested)
        else:
            raise TypeError(repr(g))
        memo[key] = out
        return out

    missing = free_vars(phi) - set(assign)
    if missing:
        raise MSOError(f"unassigned MSO variables: {sorted(missing)}")
    return ev(phi, dict(assign))


# -- the existential formula psi --------------------------------------------------

def build_psi(aut) -> fol.FO:
    """psi = exists q-bar (acc(p-bar, q-bar) = top), with acc from the
    automaton kind (modal or binary parity)."""
    from .automata import ModalAutomaton, compile_acc_binary, compile_acc_modal

    acc = (compile_acc_modal(aut) if isinstance(aut, ModalAutomaton)
           else compile_acc_binary(aut))
    psi: fol.FO = fol.TermEq(acc, F.top())
    for q in reversed(aut.states):
        psi = fol.FExists(q, psi)
    return psi
