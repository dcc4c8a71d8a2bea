"""Partial tableaux and one-step unravelling over finite complex algebras.

The ambient algebra is always the powerset algebra of a finite system, so
ultrafilters are exactly states and "theta in alpha(v)" is an eval membership
test.  All choices (jump targets, successor states, child order, initial
entry order) are lowest-index / lowest-formula-id, so runs are deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from . import formulas as F
from .formulas import ClosureSet, Formula
from .evaluator import EvalContext
from .systems import TransitionSystem

ACTIVE = "a"
FROZEN = "f"
EXTINGUISHED = "e"


class TableauError(ValueError):
    pass


class UnsatisfiableError(TableauError):
    """phi0 does not hold anywhere in the supplied algebra."""


class InternalTableauError(AssertionError):
    """A construction step violated an invariant the paper guarantees."""


@dataclass(frozen=True)
class TableauEntry:
    """One letter (theta, status, rho, chi') of a beta word."""

    theta: Formula
    status: str
    rho: frozenset
    chi_prime: Formula

    @property
    def heart(self) -> str:
        return self.theta.kind  # F.EU or F.AF

    @property
    def phi(self) -> Formula:
        return self.theta.args[0]

    @property
    def psi(self) -> Formula:
        return self.theta.args[1]

    @property
    def chi(self) -> Formula:
        return self.theta.args[2]

    def with_context(self) -> Formula:
        """heart(phi, psi, chi') -- the strengthened eventuality."""
        key = (self.theta.fid, self.chi_prime.fid)
        out = _CONTEXT_CACHE.get(key)
        if out is None:
            ctor = F.eu if self.heart == F.EU else F.af
            out = _CONTEXT_CACHE[key] = ctor(self.phi, self.psi, self.chi_prime)
        return out


_CONTEXT_CACHE: Dict[Tuple[int, int], Formula] = {}


@dataclass
class TabNode:
    nid: int
    parent: Optional[int]
    alpha: int
    beta: List[TableauEntry]
    depth: int
    edge: Optional[str] = None            # printed lambda, or "0"/"1" for binary
    children: List[int] = field(default_factory=list)
    # jump record, filled when this node is expanded
    m: Optional[int] = None               # 0-based active index
    x_v: Optional[int] = None
    gamma_v: Optional[Formula] = None
    expanded: bool = False


def designated_lambda(theta: Formula) -> Formula:
    """chi & EU(phi,psi,chi): the child formula an active EU entry follows."""
    return F.and_(theta.args[2], theta)


class PartialTableau:
    """A finite labelled tree for Gamma0 in the complex algebra of (ts, val)."""

    def __init__(self, ts: TransitionSystem, valuation: Dict[str, int],
                 gamma0: ClosureSet, dialect: str):
        self.ts = ts
        self.valuation = dict(valuation)
        self.gamma0 = gamma0
        self.dialect = dialect
        self.ctx = EvalContext(ts, valuation)
        self.props = sorted(valuation)
        self.ev = F.eventualities(gamma0)
        self.diamonds = gamma0.diamonds()
        self.nodes: List[TabNode] = []

    # -- membership in the ambient algebra --

    def mem(self, f: Formula, state: int) -> bool:
        return bool(self.ctx.eval(f) >> state & 1)

    def entails(self, f: Formula, g: Formula) -> bool:
        ef, eg_ = self.ctx.eval(f), self.ctx.eval(g)
        return ef | eg_ == eg_

    def colour(self, state: int) -> frozenset:
        return frozenset(p for p in self.props if self.valuation[p] >> state & 1)

    def kappa(self, state: int, rho) -> Formula:
        members = [g for g in sorted(rho) if self.mem(g, state)]
        return F.characteristic_formula(members, rho)

    def add_node(self, parent: Optional[int], alpha: int,
                 beta: List[TableauEntry], edge: Optional[str]) -> TabNode:
        depth = 0 if parent is None else self.nodes[parent].depth + 1
        node = TabNode(len(self.nodes), parent, alpha, beta, depth, edge)
        self.nodes.append(node)
        if parent is not None:
            self.nodes[parent].children.append(node.nid)
        return node

    def leaves(self) -> List[TabNode]:
        return [v for v in self.nodes if not v.children]

    def branch(self, leaf: TabNode) -> List[TabNode]:
        path = []
        v: Optional[TabNode] = leaf
        while v is not None:
            path.append(v)
            v = self.nodes[v.parent] if v.parent is not None else None
        return list(reversed(path))


def sat_in(phi0: Formula, ts: TransitionSystem,
           valuation: Dict[str, int]) -> Optional[int]:
    """Lowest state where phi0 holds, or None."""
    mask = EvalContext(ts, valuation).eval(phi0)
    if mask == 0:
        return None
    return (mask & -mask).bit_length() - 1


def init_tableau(phi0: Formula, ts: TransitionSystem, valuation: Dict[str, int],
                 dialect: str = "plain") -> PartialTableau:
    """Single-node well-formed tableau for the closure of nnf(phi0)."""
    phi0n = F.nnf(phi0)
    F.check_dialect(phi0n, dialect)
    gamma0 = F.fischer_ladner_closure([phi0n], dialect)
    t = PartialTableau(ts, valuation, gamma0, dialect)
    x0 = sat_in(phi0n, ts, valuation)
    if x0 is None:
        raise UnsatisfiableError(f"{phi0} is bot in this algebra")
    beta0 = [
        TableauEntry(theta, ACTIVE, gamma0.members, theta.args[2])
        for theta in t.ev
        if t.mem(theta, x0) and not t.mem(theta.args[0], x0)
    ]
    t.add_node(None, x0, beta0, None)
    return t


def jump(t: PartialTableau, x: int, entry: TableauEntry) -> Tuple[int, Formula]:
    """Lowest state x' with x ~rho x' and heart(phi,psi,chi' & ~kappa) in x'.

    Existence is the context rule; failure here means an implementation bug.
    """
    gamma = t.kappa(x, entry.rho)
    ctor = F.eu if entry.heart == F.EU else F.af
    target = ctor(entry.phi, entry.psi, F.and_(entry.chi_prime, F.neg(gamma)))
    hits = t.ctx.eval(gamma) & t.ctx.eval(target)
    if hits == 0:
        raise InternalTableauError(
            f"jump from state {x} found no target for {entry.theta}"
        )
    return (hits & -hits).bit_length() - 1, gamma


def _rho_union(t: PartialTableau, entries: List[TableauEntry]) -> frozenset:
    # Gamma0 is added so that fresh letters satisfy condition (c) even when
    # the parent word is empty.
    out = set(t.gamma0.members)
    for e in entries:
        out |= e.rho
    return frozenset(out)


def _fresh_letters(t: PartialTableau, parent: List[TableauEntry], alpha_w: int,
                   rho_new: frozenset) -> List[TableauEntry]:
    out = []
    for theta in t.ev:
        if not t.mem(theta, alpha_w):
            continue
        if any(e.theta is theta and e.status != EXTINGUISHED for e in parent):
            continue
        out.append(TableauEntry(theta, ACTIVE, rho_new, theta.args[2]))
    return out


def _choose_jump(t: PartialTableau, v: TabNode):
    """Active index, jump state and characteristic formula for a leaf."""
    actives = [k for k, e in enumerate(v.beta) if e.status == ACTIVE]
    if not actives:
        return None, v.alpha, None
    m = actives[0]
    x_v, gamma_v = jump(t, v.alpha, v.beta[m])
    return m, x_v, gamma_v


def _update_common(t: PartialTableau, v: TabNode, alpha_w: int,
                   m: Optional[int], gamma_v: Optional[Formula]
                   ) -> Tuple[List[TableauEntry], Optional[Formula]]:
    """Rules (1)-(4): append fresh letters, update contexts and relevance
    sets, extinguish fulfilled entries.  Returns the new word and the rule-(3)
    formula heart_m(phi_m, psi_m, chi'_m & ~gamma_v) (None when m is None)."""
    parent = v.beta
    L = len(parent)
    word = list(parent)
    rho_new = _rho_union(t, parent)
    word.extend(_fresh_letters(t, parent, alpha_w, rho_new))

    strengthened = None
    if m is not None:
        em = parent[m]
        new_chi_prime = F.and_(em.chi_prime, F.neg(gamma_v))
        ctor = F.eu if em.heart == F.EU else F.af
        strengthened = ctor(em.phi, em.psi, new_chi_prime)
        # rule (2): k < m keeps chi', k = m strengthens, k > m resets to chi
        word[m] = replace(word[m], chi_prime=new_chi_prime)
        for k in range(m + 1, L):
            word[k] = replace(word[k], chi_prime=word[k].chi)
        # rule (3): positions after m (including fresh ones) learn the formula
        for k in range(m + 1, len(word)):
            word[k] = replace(word[k], rho=word[k].rho | {strengthened})

    # rule (4)
    for k, e in enumerate(word):
        if e.status != EXTINGUISHED and t.mem(e.phi, alpha_w):
            word[k] = replace(e, status=EXTINGUISHED)
    return word, strengthened


def _update_tail(t: PartialTableau, word: List[TableauEntry], alpha_w: int,
                 m: Optional[int]) -> None:
    """Rules (6)-(7): freeze satisfied AF entries, reactivate stalled ones."""
    for k, e in enumerate(word):
        if e.heart == F.AF and e.status == ACTIVE and t.mem(e.psi, alpha_w):
            word[k] = replace(e, status=FROZEN)
    upto = len(word) if m is None else m
    for k in range(upto):
        e = word[k]
        if (e.heart == F.AF and e.status == FROZEN
                and not t.mem(e.phi, alpha_w) and not t.mem(e.psi, alpha_w)):
            word[k] = replace(e, status=ACTIVE)


def one_step_unravel(t: PartialTableau) -> List[TabNode]:
    """Plain/rooted one-step unravelling of every current leaf.

    Returns the new nodes.  Children are w_lambda for each dia(lambda) in
    Gamma0 that holds at alpha(v), ordered by formula id.
    """
    new_nodes = []
    for v in t.leaves():
        if v.expanded:
            continue
        m, x_v, gamma_v = _choose_jump(t, v)
        v.m, v.x_v, v.gamma_v, v.expanded = m, x_v, gamma_v, True
        em = v.beta[m] if m is not None else None

        lams = [d.args[0] for d in t.diamonds if t.mem(d, v.alpha)]
        if not lams:
            raise InternalTableauError(f"node {v.nid} has no diamond successors")
        succ = t.ts.succ[x_v]
        for lam in lams:
            if (em is not None and em.heart == F.EU
                    and lam is designated_lambda(em.theta)):
                # EU case: land on chi'_m & ~gamma_v & EU(phi_m, psi_m, chi'_m & ~gamma_v)
                new_chi = F.and_(em.chi_prime, F.neg(gamma_v))
                target = F.and_(new_chi, F.eu(em.phi, em.psi, new_chi))
            else:
                target = lam
            alpha_w = next((y for y in succ if t.mem(target, y)), None)
            if alpha_w is None:
                raise InternalTableauError(
                    f"no successor of jump state {x_v} satisfies {target}"
                )
            word, _ = _update_common(t, v, alpha_w, m, gamma_v)
            # rule (5): an inherited EU entry survives only at its designated child
            for k in range(len(v.beta)):
                e = word[k]
                if (e.heart == F.EU and e.status != EXTINGUISHED
                        and lam is not designated_lambda(e.theta)):
                    word[k] = replace(e, status=EXTINGUISHED)
            _update_tail(t, word, alpha_w, m)
            new_nodes.append(t.add_node(v.nid, alpha_w, word, str(lam)))
    return new_nodes


def one_step_unravel_binary(t: PartialTableau) -> List[TabNode]:
    """Binary one-step unravelling: every leaf gets children v0 = f0(x_v) and
    v1 = f1(x_v), with lambda-designated successors and the re-append variant
    of rule (5)."""
    ts = t.ts
    new_nodes = []
    for v in t.leaves():
        if v.expanded:
            continue
        m, x_v, gamma_v = _choose_jump(t, v)
        v.m, v.x_v, v.gamma_v, v.expanded = m, x_v, gamma_v, True
        em = v.beta[m] if m is not None else None
        kids = (ts.f0[x_v], ts.f1[x_v])

        eu_target = None
        if em is not None and em.heart == F.EU:
            new_chi = F.and_(em.chi_prime, F.neg(gamma_v))
            eu_target = F.and_(new_chi, F.eu(em.phi, em.psi, new_chi))

        # lambda-designated successor: lowest direction whose alpha satisfies
        # lambda (the strong EU target for the active entry's own lambda)
        desig: Dict[int, int] = {}
        for d in t.diamonds:
            if not t.mem(d, v.alpha):
                continue
            lam = d.args[0]
            want = eu_target if (em is not None and em.heart == F.EU
                                 and lam is designated_lambda(em.theta)) else lam
            side = next((i for i in (0, 1) if t.mem(want, kids[i])), None)
            if side is None:
                raise InternalTableauError(
                    f"neither f0 nor f1 of jump state {x_v} satisfies {want}"
                )
            desig[lam.fid] = side

        for i in (0, 1):
            alpha_w = kids[i]
            word, strengthened = _update_common(t, v, alpha_w, m, gamma_v)
            rho_re = None
            for k in range(len(v.beta)):
                e = word[k]
                if e.heart != F.EU:
                    continue
                lam_k = designated_lambda(e.theta)
                if desig.get(lam_k.fid) == i:
                    continue
                if e.status == EXTINGUISHED:
                    continue
                word[k] = replace(e, status=EXTINGUISHED)
                # re-append: the obligation still pends at this child
                if t.mem(e.theta, alpha_w) and not t.mem(e.phi, alpha_w):
                    if rho_re is None:
                        rho_re = _rho_union(t, v.beta)
                        if strengthened is not None:
                            rho_re |= {strengthened}
                    word.append(TableauEntry(e.theta, ACTIVE, rho_re, e.chi))
            _update_tail(t, word, alpha_w, m)
            new_nodes.append(t.add_node(v.nid, alpha_w, word, str(i)))
    return new_nodes


# -- well-formedness ----------------------------------------------------------

def well_formed(t: PartialTableau,
                nodes: Optional[List[TabNode]] = None) -> List[Tuple[int, int, str]]:
    """Violations of conditions (a)-(g) as (node id, 1-based index, letter)."""
    bad: List[Tuple[int, int, str]] = []
    for v in (nodes if nodes is not None else t.nodes):
        if v.parent is not None:
            pw = t.nodes[v.parent].beta
            if len(pw) > len(v.beta):
                bad.append((v.nid, 0, "a"))
            else:
                for k in range(len(pw)):
                    if pw[k].theta is not v.beta[k].theta:
                        bad.append((v.nid, k + 1, "a"))
        contexts = [e.with_context() for e in v.beta]
        for k, e in enumerate(v.beta, start=1):
            if t.mem(e.phi, v.alpha) and e.status != EXTINGUISHED:
                bad.append((v.nid, k, "b"))
            if not t.gamma0.members <= e.rho:
                bad.append((v.nid, k, "c"))
            if e.heart == F.EU and e.status == FROZEN:
                bad.append((v.nid, k, "d"))
            if not t.entails(e.chi_prime, e.chi):
                bad.append((v.nid, k, "e"))
            for kp in range(k - 1):
                if contexts[kp] not in e.rho:
                    bad.append((v.nid, k, "f"))
                    break
            if e.status != EXTINGUISHED and not t.mem(contexts[k - 1], v.alpha):
                bad.append((v.nid, k, "g"))
    return bad


# -- full unravelling ---------------------------------------------------------

def rooted_wrapper(phi0: Formula) -> Formula:
    """The rooted-completeness seed: I & EU(phi0, true) & box AR(~I, false)."""
    return F.and_(F.and_(F.root(), F.eu(phi0, F.top())),
                  F.box(F.ar(F.neg(F.root()), F.bot())))


@dataclass
class UnravelResult:
    tableau: PartialTableau
    phi0: Formula
    phi0_effective: Formula
    rounds: int
    stopped: str                 # "depth" or "budget"


def unravel(phi0: Formula, ts: TransitionSystem, valuation: Dict[str, int],
            depth: int, dialect: str = "plain",
            node_budget: int = 20000) -> UnravelResult:
    """depth rounds of one-step unravelling; asserts well-formedness per round."""
    if dialect not in F.DIALECTS:
        raise ValueError(f"unknown dialect {dialect!r}")
    effective = rooted_wrapper(phi0) if dialect == "rooted" else phi0
    if dialect != "plain" and ts.root is None:
        raise TableauError(f"dialect {dialect!r} needs a rooted system")
    if dialect == "binary" and not ts.is_binary:
        raise TableauError("binary dialect needs f0/f1")
    t = init_tableau(effective, ts, valuation, dialect)
    step = one_step_unravel_binary if dialect == "binary" else one_step_unravel
    violations = well_formed(t)
    if violations:
        raise InternalTableauError(f"initial tableau ill-formed: {violations}")
    rounds = 0
    stopped = "depth"
    for _ in range(depth):
        if len(t.nodes) >= node_budget:
            stopped = "budget"
            break
        new_nodes = step(t)
        rounds += 1
        violations = well_formed(t, new_nodes)
        if violations:
            raise InternalTableauError(
                f"one-step unravelling broke well-formedness: {violations}"
            )
    return UnravelResult(t, phi0, effective, rounds, stopped)


# -- truth-prefix verification --------------------------------------------------

@dataclass
class Obligation:
    node: int
    theta: Formula
    verdict: str                 # "ok" | "fail" | "frontier" | "deferred"
    detail: str = ""


@dataclass
class TruthReport:
    obligations: List[Obligation] = field(default_factory=list)
    root_colour_ok: Optional[bool] = None

    @property
    def failures(self) -> List[Obligation]:
        return [o for o in self.obligations if o.verdict == "fail"]

    def counts(self) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for o in self.obligations:
            out[o.verdict] = out.get(o.verdict, 0) + 1
        return out


def _eu_table(t: PartialTableau, theta: Formula) -> List[str]:
    """Per-node FOUND / FRONTIER / DEAD for EU(phi,psi,chi) witness paths.

    A witness from v is a prefix path v = v0,..,vn with psi before the end,
    phi at the end, and chi at v1..vn.  Computed bottom-up (children always
    have larger ids than their parent)."""
    phi, psi, chi = theta.args
    tbl = [""] * len(t.nodes)
    for v in reversed(t.nodes):
        if t.mem(phi, v.alpha):
            tbl[v.nid] = "FOUND"
        elif not t.mem(psi, v.alpha):
            tbl[v.nid] = "DEAD"
        elif not v.children:
            tbl[v.nid] = "FRONTIER"
        else:
            rs = [tbl[c] for c in v.children if t.mem(chi, t.nodes[c].alpha)]
            if "FOUND" in rs:
                tbl[v.nid] = "FOUND"
            elif "FRONTIER" in rs:
                tbl[v.nid] = "FRONTIER"
            else:
                tbl[v.nid] = "DEAD"
    return tbl


def verify_truth_prefix(result: UnravelResult) -> TruthReport:
    """Check the prefix-decidable part of the truth lemma on every node.

    Literals against the emitted colour; dia/box/X_i against existing
    children; EU by witness-path search in the prefix; AF/EG/AR deferred.
    """
    t = result.tableau
    report = TruthReport()
    add = report.obligations.append
    eu_tables: Dict[int, List[str]] = {}
    for v in t.nodes:
        col = t.colour(v.alpha)
        for theta in t.gamma0:
            if not t.mem(theta, v.alpha):
                continue
            k = theta.kind
            if k == F.VAR:
                ok = theta.name in col
                add(Obligation(v.nid, theta, "ok" if ok else "fail", "literal"))
            elif k == F.NEG:
                inner = theta.args[0]
                if inner.kind == F.VAR:
                    ok = inner.name not in col
                    add(Obligation(v.nid, theta, "ok" if ok else "fail", "literal"))
                elif inner.kind == F.ROOT:
                    ok = v.alpha != t.ts.root
                    add(Obligation(v.nid, theta, "ok" if ok else "fail", "~I"))
            elif k == F.ROOT:
                ok = v.alpha == t.ts.root
                add(Obligation(v.nid, theta, "ok" if ok else "fail", "I"))
            elif k in (F.TOP, F.AND, F.OR):
                # membership of the pieces is a semantic tautology here
                add(Obligation(v.nid, theta, "ok", "boolean"))
            elif k == F.DIA:
                lam = theta.args[0]
                if not v.children:
                    add(Obligation(v.nid, theta, "frontier"))
                else:
                    ok = any(t.mem(lam, t.nodes[c].alpha) for c in v.children)
                    add(Obligation(v.nid, theta, "ok" if ok else "fail",
                                   "child with lambda"))
            elif k == F.BOX:
                lam = theta.args[0]
                if not v.children:
                    add(Obligation(v.nid, theta, "frontier"))
                else:
                    ok = all(t.mem(lam, t.nodes[c].alpha) for c in v.children)
                    add(Obligation(v.nid, theta, "ok" if ok else "fail",
                                   "all children"))
            elif k in (F.X0, F.X1):
                side = "0" if k == F.X0 else "1"
                kid = next((t.nodes[c] for c in v.children
                            if t.nodes[c].edge == side), None)
                if kid is None:
                    add(Obligation(v.nid, theta, "frontier"))
                else:
                    ok = t.mem(theta.args[0], kid.alpha)
                    add(Obligation(v.nid, theta, "ok" if ok else "fail",
                                   f"f{side} child"))
            elif k == F.EU:
                tbl = eu_tables.get(theta.fid)
                if tbl is None:
                    tbl = eu_tables[theta.fid] = _eu_table(t, theta)
                verdict = {"FOUND": "ok", "FRONTIER": "frontier",
                           "DEAD": "fail"}[tbl[v.nid]]
                add(Obligation(v.nid, theta, verdict, "witness path"))
            else:  # AF, EG, AR: properties of infinite branches
                add(Obligation(v.nid, theta, "deferred"))
    if result.tableau.dialect == "rooted":
        i_nodes = [v.nid for v in t.nodes if v.alpha == t.ts.root]
        report.root_colour_ok = i_nodes == [0]
    return report


# -- eventuality monitoring -----------------------------------------------------

@dataclass
class BranchEntryStatus:
    leaf: int
    index: int                   # 1-based position
    theta: Formula
    statuses: str
    rho0_size: int               # relevance set size at first activation
    rho_final_size: int
    flags: List[str] = field(default_factory=list)


@dataclass
class MonitorReport:
    entries: List[BranchEntryStatus] = field(default_factory=list)

    @property
    def flagged(self) -> List[BranchEntryStatus]:
        return [e for e in self.entries if e.flags]


def monitor_eventualities(result: UnravelResult) -> MonitorReport:
    """Per-branch status traces with the no-loops bound check.

    An EU entry is flagged if an active run exceeds 2^{|rho0|} (rho0 taken at
    the run's first node) or survives unextinguished past that bound at the
    leaf; an AF entry is flagged unless it is extinguished or frozen at the
    leaf of the branch.
    """
    t = result.tableau
    report = MonitorReport()
    for leaf in t.leaves():
        path = t.branch(leaf)
        for k in range(len(leaf.beta)):
            birth = next(i for i, v in enumerate(path) if len(v.beta) > k)
            seq = [path[i].beta[k] for i in range(birth, len(path))]
            statuses = "".join(e.status for e in seq)
            theta = seq[0].theta
            rho0 = len(seq[0].rho)
            flags: List[str] = []
            # maximal active runs
            i = 0
            while i < len(seq):
                if seq[i].status != ACTIVE:
                    i += 1
                    continue
                j = i
                while j < len(seq) and seq[j].status == ACTIVE:
                    j += 1
                run_rho0 = len(seq[i].rho)
                if (j - i) > 2 ** run_rho0:
                    flags.append("active-run-exceeds-bound")
                i = j
            if theta.kind == F.AF and seq[-1].status == ACTIVE:
                flags.append("af-active-at-leaf")
            report.entries.append(BranchEntryStatus(
                leaf.nid, k + 1, theta, statuses, rho0, len(seq[-1].rho), flags))
    return report


# -- trace emission -------------------------------------------------------------

def trace_dict(result: UnravelResult) -> dict:
    t = result.tableau
    nodes = []
    for v in t.nodes:
        jump_info = None
        if v.expanded:
            jump_info = {
                "x_v": v.x_v,
                "m": None if v.m is None else v.m + 1,
                "gamma_v": None if v.gamma_v is None else str(v.gamma_v),
            }
        nodes.append({
            "id": v.nid,
            "parent": v.parent,
            "edge": v.edge,
            "alpha_state": v.alpha,
            "colour": sorted(t.colour(v.alpha)),
            "beta": [
                {
                    "theta": str(e.theta),
                    "status": e.status,
                    "rho_ids": sorted(g.fid for g in e.rho),
                    "chi_prime": str(e.chi_prime),
                }
                for e in v.beta
            ],
            "jump": jump_info,
        })
    return {
        "dialect": t.dialect,
        "phi0": str(result.phi0),
        "phi0_effective": str(result.phi0_effective),
        "rounds": result.rounds,
        "stopped": result.stopped,
        "gamma0": [str(g) for g in t.gamma0],
        "nodes": nodes,
    }


def trace_json(result: UnravelResult) -> str:
    return json.dumps(trace_dict(result), indent=2, sort_keys=True)
