"""Hash-consed formula ASTs for fair CTL and its rooted/binary dialects.

Formulas are immutable interned nodes: structurally equal terms share one
object and one integer id, so equality is identity and sets/dicts keyed by
formulas are cheap.  Binary EU/AF are stored as ternary nodes whose third
argument is TOP; the printer re-abbreviates them.
"""

from __future__ import annotations

import threading
from typing import Iterable, Iterator, Optional

# Node kinds.
BOT = "bot"
TOP = "top"
VAR = "var"
NEG = "neg"
OR = "or"
AND = "and"
DIA = "dia"
BOX = "box"
EU = "eu"          # ternary: EU(phi, psi, chi)
AF = "af"          # ternary: AF(phi, psi, chi)
EG = "eg"          # binary
AR = "ar"          # binary
ROOT = "root"      # the constant I
X0 = "x0"
X1 = "x1"

DIALECTS = ("plain", "rooted", "binary")

_KEYWORDS = {"true", "false", "dia", "box", "I", "X0", "X1", "EU", "EG", "AR", "AF"}


class DialectError(ValueError):
    """A formula uses symbols outside the requested dialect."""


class FormulaSyntaxError(ValueError):
    """Parse failure; carries the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class Formula:
    """One interned AST node.  Do not instantiate directly; use the constructors."""

    __slots__ = ("kind", "args", "name", "fid")

    def __init__(self, kind: str, args: tuple, name: Optional[str], fid: int):
        self.kind = kind
        self.args = args
        self.name = name
        self.fid = fid

    def __repr__(self) -> str:
        return f"<Formula {self.fid}: {print_formula(self)}>"

    def __str__(self) -> str:
        return print_formula(self)

    # Identity semantics; fid gives a stable total order.
    def __hash__(self) -> int:
        return self.fid

    def __lt__(self, other: "Formula") -> bool:
        return self.fid < other.fid

    def subformulas(self) -> Iterator["Formula"]:
        """All subformulas including self, each once, in DFS order."""
        seen = set()
        stack = [self]
        while stack:
            f = stack.pop()
            if f.fid in seen:
                continue
            seen.add(f.fid)
            yield f
            stack.extend(reversed(f.args))

    def variables(self) -> set:
        """Names of propositional variables occurring in the formula."""
        return {f.name for f in self.subformulas() if f.kind == VAR}

    def dialect(self) -> str:
        """Smallest dialect containing every symbol of the formula."""
        d = "plain"
        for f in self.subformulas():
            if f.kind in (X0, X1):
                return "binary"
            if f.kind == ROOT:
                d = "rooted"
        return d


_intern_lock = threading.Lock()
_table: dict = {}
_next_fid = 0


def _mk(kind: str, args: tuple = (), name: Optional[str] = None) -> Formula:
    key = (kind, name, tuple(a.fid for a in args))
    f = _table.get(key)
    if f is not None:
        return f
    with _intern_lock:
        f = _table.get(key)
        if f is None:
            global _next_fid
            f = Formula(kind, args, name, _next_fid)
            _next_fid += 1
            _table[key] = f
    return f


# -- constructors -----------------------------------------------------------

def bot() -> Formula:
    return _mk(BOT)


def top() -> Formula:
    return _mk(TOP)


def var(name: str) -> Formula:
    if not name or name in _KEYWORDS:
        raise ValueError(f"invalid variable name {name!r}")
    return _mk(VAR, name=name)


def neg(f: Formula) -> Formula:
    return _mk(NEG, (f,))


def or_(a: Formula, b: Formula) -> Formula:
    return _mk(OR, (a, b))


def and_(a: Formula, b: Formula) -> Formula:
    return _mk(AND, (a, b))


def dia(f: Formula) -> Formula:
    return _mk(DIA, (f,))


def box(f: Formula) -> Formula:
    return _mk(BOX, (f,))


def eu(phi: Formula, psi: Formula, chi: Optional[Formula] = None) -> Formula:
    """EU(phi, psi) or contextual EU(phi, psi, chi); binary form stores chi = TOP."""
    return _mk(EU, (phi, psi, chi if chi is not None else top()))


def af(phi: Formula, psi: Formula, chi: Optional[Formula] = None) -> Formula:
    """AF(phi, psi) or contextual AF(phi, psi, chi); binary form stores chi = TOP."""
    return _mk(AF, (phi, psi, chi if chi is not None else top()))


def eg(phi: Formula, psi: Formula) -> Formula:
    return _mk(EG, (phi, psi))


def ar(phi: Formula, psi: Formula) -> Formula:
    return _mk(AR, (phi, psi))


def root() -> Formula:
    return _mk(ROOT)


def x0(f: Formula) -> Formula:
    return _mk(X0, (f,))


def x1(f: Formula) -> Formula:
    return _mk(X1, (f,))


# Contextual operators are the ternary nodes themselves.
eu_c = eu
af_c = af


def conj(fs: Iterable[Formula]) -> Formula:
    """Left fold of AND over fs; the empty conjunction is TOP."""
    out = None
    for f in fs:
        out = f if out is None else and_(out, f)
    return out if out is not None else top()


def disj(fs: Iterable[Formula]) -> Formula:
    """Left fold of OR over fs; the empty disjunction is BOT."""
    out = None
    for f in fs:
        out = f if out is None else or_(out, f)
    return out if out is not None else bot()


def check_dialect(f: Formula, dialect: str) -> None:
    if dialect not in DIALECTS:
        raise ValueError(f"unknown dialect {dialect!r}")
    need = f.dialect()
    if DIALECTS.index(need) > DIALECTS.index(dialect):
        raise DialectError(f"formula requires dialect {need!r}, got {dialect!r}")


# -- printing ---------------------------------------------------------------

# Precedence levels: 0 = |, 1 = &, 2 = unary (~ dia box X0 X1), 3 = atom.

def _print(f: Formula, level: int) -> str:
    k = f.kind
    if k == BOT:
        return "false"
    if k == TOP:
        return "true"
    if k == VAR:
        return f.name
    if k == ROOT:
        return "I"
    if k == OR:
        s = f"{_print(f.args[0], 0)} | {_print(f.args[1], 1)}"
        return f"({s})" if level > 0 else s
    if k == AND:
        s = f"{_print(f.args[0], 1)} & {_print(f.args[1], 2)}"
        return f"({s})" if level > 1 else s
    if k in (NEG, DIA, BOX, X0, X1):
        op = {NEG: "~", DIA: "dia ", BOX: "box ", X0: "X0 ", X1: "X1 "}[k]
        s = f"{op}{_print(f.args[0], 2)}"
        return f"({s})" if level > 2 else s
    if k in (EU, AF):
        name = "EU" if k == EU else "AF"
        phi, psi, chi = f.args
        if chi.kind == TOP:
            return f"{name}({_print(phi, 0)}, {_print(psi, 0)})"
        return f"{name}({_print(phi, 0)}, {_print(psi, 0)}, {_print(chi, 0)})"
    if k in (EG, AR):
        name = "EG" if k == EG else "AR"
        return f"{name}({_print(f.args[0], 0)}, {_print(f.args[1], 0)})"
    raise AssertionError(f"unknown kind {k}")


def print_formula(f: Formula) -> str:
    return _print(f, 0)


# -- parsing ----------------------------------------------------------------

class _Parser:
    def __init__(self, text: str, dialect: str):
        self.text = text
        self.pos = 0
        self.dialect = dialect

    def error(self, msg: str) -> FormulaSyntaxError:
        return FormulaSyntaxError(msg, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str) -> None:
        self.skip_ws()
        if not self.text.startswith(ch, self.pos):
            raise self.error(f"expected {ch!r}")
        self.pos += len(ch)

    def ident(self) -> Optional[str]:
        self.skip_ws()
        i = self.pos
        if i < len(self.text) and (self.text[i].isalpha() or self.text[i] == "_"):
            j = i + 1
            while j < len(self.text) and (self.text[j].isalnum() or self.text[j] == "_"):
                j += 1
            self.pos = j
            return self.text[i:j]
        return None

    def gate(self, needed: str, symbol: str) -> None:
        if DIALECTS.index(needed) > DIALECTS.index(self.dialect):
            raise DialectError(
                f"{symbol} is not available in dialect {self.dialect!r} "
                f"(at position {self.pos})"
            )

    def parse_or(self) -> Formula:
        f = self.parse_and()
        while self.peek() == "|":
            self.eat("|")
            f = or_(f, self.parse_and())
        return f

    def parse_and(self) -> Formula:
        f = self.parse_unary()
        while self.peek() == "&":
            self.eat("&")
            f = and_(f, self.parse_unary())
        return f

    def parse_unary(self) -> Formula:
        self.skip_ws()
        if self.peek() == "~":
            self.eat("~")
            return neg(self.parse_unary())
        save = self.pos
        word = self.ident()
        if word == "dia":
            return dia(self.parse_unary())
        if word == "box":
            return box(self.parse_unary())
        if word == "X0":
            self.gate("binary", "X0")
            return x0(self.parse_unary())
        if word == "X1":
            self.gate("binary", "X1")
            return x1(self.parse_unary())
        self.pos = save
        return self.parse_atom()

    def parse_args(self, lo: int, hi: int) -> list:
        self.eat("(")
        args = [self.parse_or()]
        while self.peek() == ",":
            self.eat(",")
            args.append(self.parse_or())
        self.eat(")")
        if not lo <= len(args) <= hi:
            raise self.error(f"expected {lo}..{hi} arguments, got {len(args)}")
        return args

    def parse_atom(self) -> Formula:
        self.skip_ws()
        if self.peek() == "(":
            self.eat("(")
            f = self.parse_or()
            self.eat(")")
            return f
        start = self.pos
        word = self.ident()
        if word is None:
            raise self.error("expected a formula")
        if word == "true":
            return top()
        if word == "false":
            return bot()
        if word == "I":
            self.gate("rooted", "I")
            return root()
        if word in ("EU", "AF"):
            args = self.parse_args(2, 3)
            return eu(*args) if word == "EU" else af(*args)
        if word in ("EG", "AR"):
            args = self.parse_args(2, 2)
            return eg(*args) if word == "EG" else ar(*args)
        if word in _KEYWORDS:
            self.pos = start
            raise self.error(f"keyword {word!r} cannot start an atom here")
        return var(word)


def parse_formula(text: str, dialect: str = "binary") -> Formula:
    """Parse the ASCII grammar; raises FormulaSyntaxError / DialectError."""
    if dialect not in DIALECTS:
        raise ValueError(f"unknown dialect {dialect!r}")
    p = _Parser(text, dialect)
    f = p.parse_or()
    p.skip_ws()
    if p.pos != len(text):
        raise p.error("trailing input")
    return f


# -- derived-operator expansion ---------------------------------------------

def expand_derived(f: Formula) -> Formula:
    """Rewrite to the basic signature {false, ~, |, dia, EU(.,.,true), EG} (+ I, X0, X1).

    Derived nodes are replaced by their defining terms and the result is
    expanded recursively, so TOP, AND, BOX, AR, AF and contextual EU/AF all
    disappear.
    """
    memo: dict = {}

    def go(g: Formula) -> Formula:
        out = memo.get(g.fid)
        if out is not None:
            return out
        k = g.kind
        if k in (BOT, VAR, ROOT):
            out = g
        elif k == TOP:
            out = neg(bot())
        elif k == AND:
            a, b = g.args
            out = neg(or_(go(neg(a)), go(neg(b))))
        elif k == BOX:
            out = neg(dia(go(neg(g.args[0]))))
        elif k == AR:
            a, b = g.args
            out = neg(eu(go(neg(a)), go(neg(b))))
        elif k == AF:
            a, b, c = g.args
            if c.kind == TOP:
                out = neg(eg(go(neg(a)), go(neg(b))))
            else:
                # AF_c(p,q,r) := AF(p,q) & (p | box AR(q|r, p))
                out = go(and_(af(a, b), or_(a, box(ar(or_(b, c), a)))))
        elif k == EU:
            a, b, c = g.args
            if c.kind == TOP:
                out = eu(go(a), go(b))
            else:
                # EU_c(p,q,r) := p | (q & dia EU(p&r, q&r))
                out = go(or_(a, and_(b, dia(eu(and_(a, c), and_(b, c))))))
        elif k in (NEG, DIA, X0, X1):
            out = _mk(k, (go(g.args[0]),))
        elif k == OR:
            out = or_(go(g.args[0]), go(g.args[1]))
        elif k == EG:
            out = eg(go(g.args[0]), go(g.args[1]))
        else:
            raise AssertionError(k)
        memo[g.fid] = out
        return out

    return go(f)


def is_basic(f: Formula) -> bool:
    """True if f uses only basic symbols.

    Basic means {false, ~, |, dia, EU, EG} plus I/X0/X1; TOP may appear only
    as the third slot of an EU node (the stored form of binary EU).
    """
    memo: set = set()
    stack = [(f, False)]
    while stack:
        g, top_ok = stack.pop()
        if (g.fid, top_ok) in memo:
            continue
        memo.add((g.fid, top_ok))
        if g.kind in (AND, BOX, AR, AF):
            return False
        if g.kind == TOP and not top_ok:
            return False
        if g.kind == EU:
            a, b, c = g.args
            stack.extend([(a, False), (b, False), (c, True)])
        else:
            stack.extend((a, False) for a in g.args)
    return True


# -- negation normal form ---------------------------------------------------

def nnf(f: Formula) -> Formula:
    """Negation normal form: negation only on variables (and on I)."""
    memo_p: dict = {}
    memo_n: dict = {}

    def pos(g: Formula) -> Formula:
        out = memo_p.get(g.fid)
        if out is not None:
            return out
        k = g.kind
        if k in (BOT, TOP, VAR, ROOT):
            out = g
        elif k == NEG:
            out = fneg(g.args[0])
        elif k in (DIA, BOX, X0, X1):
            out = _mk(k, (pos(g.args[0]),))
        elif k in (OR, AND, EG, AR):
            out = _mk(k, (pos(g.args[0]), pos(g.args[1])))
        elif k in (EU, AF):
            out = _mk(k, tuple(pos(a) for a in g.args))
        else:
            raise AssertionError(k)
        memo_p[g.fid] = out
        return out

    def fneg(g: Formula) -> Formula:
        out = memo_n.get(g.fid)
        if out is not None:
            return out
        k = g.kind
        if k == BOT:
            out = top()
        elif k == TOP:
            out = bot()
        elif k in (VAR, ROOT):
            out = neg(g)
        elif k == NEG:
            out = pos(g.args[0])
        elif k == OR:
            out = and_(fneg(g.args[0]), fneg(g.args[1]))
        elif k == AND:
            out = or_(fneg(g.args[0]), fneg(g.args[1]))
        elif k == DIA:
            out = box(fneg(g.args[0]))
        elif k == BOX:
            out = dia(fneg(g.args[0]))
        elif k in (X0, X1):
            out = _mk(k, (fneg(g.args[0]),))
        elif k == EG:
            out = af(fneg(g.args[0]), fneg(g.args[1]))
        elif k == AR:
            out = eu(fneg(g.args[0]), fneg(g.args[1]))
        elif k == EU:
            a, b, c = g.args
            if c.kind == TOP:
                out = ar(fneg(a), fneg(b))
            else:
                # ~EU_c(p,q,r) = ~p & (~q | box AR(~p|~r, ~q|~r))
                na, nb, nc = fneg(a), fneg(b), fneg(c)
                out = and_(na, or_(nb, box(ar(or_(na, nc), or_(nb, nc)))))
        elif k == AF:
            a, b, c = g.args
            if c.kind == TOP:
                out = eg(fneg(a), fneg(b))
            else:
                # ~AF_c(p,q,r) = EG(~p,~q) | (~p & dia EU(~q&~r, ~p))
                na, nb, nc = fneg(a), fneg(b), fneg(c)
                out = or_(eg(na, nb), and_(na, dia(eu(and_(nb, nc), na))))
        else:
            raise AssertionError(k)
        memo_n[g.fid] = out
        return out

    return pos(f)


def is_nnf(f: Formula) -> bool:
    """Negation applied only to variables or I."""
    return all(g.args[0].kind in (VAR, ROOT) for g in f.subformulas() if g.kind == NEG)


# -- Fischer-Ladner closure --------------------------------------------------

class ClosureSet:
    """A Fischer-Ladner closed set with rule provenance.

    `provenance` maps each member to the name of the rule that first added it:
    one of "seed", "initial", "sub", "eg-unfold", "ar-box", "eu-unfold",
    "af-box", "binary-next".  `bound` is the size bound computed from the
    one-pass construction in the finiteness lemma.
    """

    def __init__(self, members: set, dialect: str, provenance: dict, bound: int):
        self.members = frozenset(members)
        self.dialect = dialect
        self.provenance = provenance
        self.bound = bound

    def __contains__(self, f: Formula) -> bool:
        return f in self.members

    def __iter__(self) -> Iterator[Formula]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def diamonds(self) -> list:
        """The DIA members, sorted by id."""
        return [f for f in self if f.kind == DIA]


def _closure_step(f: Formula, binary: bool) -> list:
    """New formulas an unfolding rule demands for f (subformulas handled separately)."""
    out = []
    if f.kind == EG:
        a, b = f.args
        out.append(("eg-unfold", dia(eu(and_(b, f), a))))
    elif f.kind == AR:
        out.append(("ar-box", box(f)))
    elif f.kind == EU:
        a, b, c = f.args
        out.append(("eu-unfold", dia(and_(c, f))))
    elif f.kind == AF:
        a, b, c = f.args
        out.append(("af-box", box(ar(or_(b, c), a))))
    elif binary and f.kind == DIA:
        out.append(("binary-next", x0(f.args[0])))
        out.append(("binary-next", x1(f.args[0])))
    return out


def fischer_ladner_closure(seed: Iterable[Formula], dialect: str = "plain") -> ClosureSet:
    """Smallest closed superset of seed (formulas must be in NNF)."""
    binary = dialect == "binary"
    seed = list(seed)
    for f in seed:
        if not is_nnf(f):
            raise ValueError(f"closure seed must be in NNF: {f}")
        check_dialect(f, dialect)

    members: set = set()
    provenance: dict = {}
    work: list = []

    def add(f: Formula, rule: str) -> None:
        if f not in members:
            members.add(f)
            provenance[f] = rule
            work.append(f)

    add(eu(top(), top(), top()), "initial")
    for f in seed:
        add(f, "seed")
    while work:
        f = work.pop()
        for a in f.args:
            add(a, "sub")
        for rule, g in _closure_step(f, binary):
            add(g, rule)

    # Size bound from the finiteness proof: apply every rule once to the
    # closure-in-progress of the seed, then count all subformulas.
    base = set(seed) | {eu(top(), top(), top())}
    once = set(base)
    for f in members:
        once.update(g for _, g in _closure_step(f, binary))
    bound_set: set = set()
    for f in once:
        bound_set.update(f.subformulas())
    bound = len(bound_set)

    return ClosureSet(members, dialect, provenance, bound)


def eventualities(gamma) -> list:
    """EU/AF members of a closure (binary forms already read as ternary), by id."""
    return sorted(f for f in gamma if f.kind in (EU, AF))


def characteristic_formula(state: Iterable[Formula], rho: Iterable[Formula]) -> Formula:
    """kappa(x, rho): conjunction of rho-members of x and negations of the rest.

    `state` is x cap rho (or any superset of it inside rho); conjuncts are
    ordered by formula id, positives first.  Empty conjunction is TOP.
    """
    rho = set(rho)
    inside = sorted(set(state) & rho)
    outside = sorted(rho - set(state))
    return conj(inside + [neg(g) for g in outside])
