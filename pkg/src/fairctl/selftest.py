"""The seeded acceptance suite: every release criterion as one checkable unit.

Each criterion returns a CriterionResult with a deterministic one-line
summary; identical (seed, samples) always render byte-identical reports.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List

from . import automata as AUT
from . import fol
from . import formulas as F
from . import mso as M
from . import randgen as R
from . import tableau as TB
from .evaluator import (EvalContext, _Ops, brute_force_af, brute_force_ar,
                        brute_force_eg, brute_force_eu, check_axioms, eval_qf,
                        valuation_from_colour)
from .systems import TransitionSystem


@dataclass
class CriterionResult:
    key: str
    title: str
    passed: bool
    detail: str
    failures: List[str] = field(default_factory=list)

    def render(self) -> str:
        line = f"{'PASS' if self.passed else 'FAIL'} {self.key} {self.title}: {self.detail}"
        for f in self.failures[:20]:
            line += f"\n    {f}"
        return line


def _rng(seed: int, tag: str) -> random.Random:
    return random.Random(f"{seed}:{tag}")


# -- C1: semantics vs brute-force oracles -----------------------------------------

def criterion_semantics_oracle(seed: int, samples: int = 500) -> CriterionResult:
    rng = _rng(seed, "oracle")
    failures: List[str] = []
    pairs = 0
    for i in range(samples):
        nprops = rng.randint(1, 3)
        ts = R.random_system(rng, max_states=6, props=("p", "q", "r")[:nprops])
        ctx = EvalContext(ts, {})
        full = (1 << ts.n) - 1
        for _ in range(3):
            a, b = rng.randint(0, full), rng.randint(0, full)
            pairs += 1
            for name, got, want in (
                ("EU", ctx.kernel.eu(a, b, full), brute_force_eu(ts, a, b)),
                ("EG", ctx.kernel.eg(a, b), brute_force_eg(ts, a, b)),
                ("AR", ctx.kernel.ar(a, b), brute_force_ar(ts, a, b)),
                ("AF", ctx.kernel.af(a, b, full), brute_force_af(ts, a, b)),
            ):
                if got != want:
                    failures.append(
                        f"system {i}: {name}(a={a:#x}, b={b:#x}) eval={got:#x} "
                        f"oracle={want:#x}")
    return CriterionResult(
        "C1", "semantics-oracle",
        not failures,
        f"{samples} systems <=6 states, {pairs} (a,b) pairs x 4 operators, "
        f"{len(failures)} mismatches",
        failures)


# -- C2: quasi-equational axiom suite ----------------------------------------------

def criterion_axioms(seed: int, models: int = 200) -> CriterionResult:
    rng = _rng(seed, "axioms")
    failures: List[str] = []
    checked = 0
    rooted_models = binary_models = 0
    for i in range(models):
        kind = rng.random()
        if kind < 0.4:
            ts = R.random_system(rng, max_states=rng.choice((4, 8)))
        elif kind < 0.75:
            ts = R.random_rooted_system(rng, max_states=rng.choice((4, 8)))
            rooted_models += 1
        else:
            ts = R.random_binary_system(rng, max_states=4,
                                        strict_root=rng.random() < 0.5)
            binary_models += 1
        rep = check_axioms(ts, rng, n_samples=100, exhaustive_limit=4)
        checked += rep.checked
        for v in rep.violations:
            failures.append(f"model {i} (n={ts.n}): {v}")
    return CriterionResult(
        "C2", "axiom-suite",
        not failures,
        f"{models} models ({rooted_models} rooted, {binary_models} binary), "
        f"{checked} quantifier instances, {len(failures)} violations",
        failures)


# -- C3: contextual operators -------------------------------------------------------

def criterion_contextual(seed: int, models: int = 200) -> CriterionResult:
    rng = _rng(seed, "contextual")
    failures: List[str] = []
    quads = 0
    for i in range(models):
        ts = R.random_system(rng, max_states=6)
        ops = _Ops(ts)
        full = (1 << ts.n) - 1
        for _ in range(5):
            p, q, r, g = (rng.randint(0, full) for _ in range(4))
            quads += 1
            x = 0
            while True:
                nxt = p | (q & ops.dia(r & x))
                if nxt == x:
                    break
                x = nxt
            if ops.eu3(p, q, r) != x:
                failures.append(f"model {i}: EU_c lfp mismatch p={p:#x} q={q:#x} r={r:#x}")
            x = 0
            while True:
                nxt = p | ops.box(ops.ar(q | (r & x), p))
                if nxt == x:
                    break
                x = nxt
            if ops.af3(p, q, r) != x:
                failures.append(f"model {i}: AF_c lfp mismatch p={p:#x} q={q:#x} r={r:#x}")
            af3 = ops.af3(p, q, r)
            if af3 != p | ops.box((q | r) & af3):
                failures.append(f"model {i}: AF_c unfolding p={p:#x} q={q:#x} r={r:#x}")
            if g & ops.eu3(p, q, r) and not g & ops.eu3(p, q, r & (full ^ g)):
                failures.append(f"model {i}: EU context rule gamma={g:#x}")
            if g & ops.af3(p, q, r) and not g & ops.af3(p, q, r & (full ^ g)):
                failures.append(f"model {i}: AF context rule gamma={g:#x}")
    return CriterionResult(
        "C3", "contextual-operators",
        not failures,
        f"{models} models, {quads} (p,q,r,gamma) quadruples, {len(failures)} violations",
        failures)


# -- C4: NNF and derived-operator soundness ------------------------------------------

def criterion_nnf(seed: int, formulas: int = 300) -> CriterionResult:
    rng = _rng(seed, "nnf")
    failures: List[str] = []
    for i in range(formulas):
        dialect = rng.choice(("plain", "plain", "rooted", "binary"))
        f = R.random_formula(rng, depth=rng.randint(1, 5), dialect=dialect)
        if dialect == "binary":
            ts = R.random_binary_system(rng, max_states=4)
        elif dialect == "rooted":
            ts = R.random_rooted_system(rng, max_states=5)
        else:
            ts = R.random_system(rng, max_states=5)
        full = (1 << ts.n) - 1
        val = {p: rng.randint(0, full) for p in ("p", "q")}
        ctx = EvalContext(ts, val)
        ref = ctx.eval(f)
        g = F.nnf(f)
        h = F.expand_derived(f)
        if not F.is_nnf(g):
            failures.append(f"formula {i}: nnf output not in NNF: {g}")
        if F.nnf(g) is not g:
            failures.append(f"formula {i}: nnf not idempotent on {f}")
        if not F.is_basic(h):
            failures.append(f"formula {i}: expand_derived output not basic: {h}")
        if ctx.eval(g) != ref:
            failures.append(f"formula {i}: eval(nnf) differs on {f}")
        if ctx.eval(h) != ref:
            failures.append(f"formula {i}: eval(expand_derived) differs on {f}")
        if F.parse_formula(F.print_formula(f), dialect) is not f:
            failures.append(f"formula {i}: parse/print round trip broke on {f}")
    return CriterionResult(
        "C4", "nnf-and-derived",
        not failures,
        f"{formulas} random formulas depth<=5, {len(failures)} violations",
        failures)


# -- C5: tableau integrity -------------------------------------------------------------

def _tableau_instance(rng: random.Random, dialect: str, max_diamonds: int):
    """A satisfiable (phi0, system, valuation) whose unravelling stays small."""
    while True:
        if dialect == "binary":
            ts = R.random_binary_system(rng, max_states=3, strict_root=True)
        elif dialect == "rooted":
            ts = R.random_rooted_system(rng, max_states=4)
        else:
            ts = R.random_system(rng, max_states=4)
        phi0 = R.random_formula(rng, depth=rng.randint(1, 2), dialect=dialect)
        val = valuation_from_colour(ts)
        for p in ("p", "q"):
            val.setdefault(p, 0)
        effective = TB.rooted_wrapper(phi0) if dialect == "rooted" else phi0
        try:
            F.check_dialect(F.nnf(effective), dialect)
            gamma0 = F.fischer_ladner_closure([F.nnf(effective)], dialect)
        except F.DialectError:
            continue
        if dialect != "binary" and len(gamma0.diamonds()) > max_diamonds:
            continue
        if len(gamma0) > 80:
            continue
        if TB.sat_in(F.nnf(effective), ts, val) is None:
            continue
        return phi0, ts, val


def criterion_tableau(seed: int, instances: int = 50, depth: int = 8) -> CriterionResult:
    rng = _rng(seed, "tableau")
    failures: List[str] = []
    dialects = ["plain", "rooted", "binary"]
    total_nodes = 0
    for i in range(instances):
        dialect = dialects[i % 3]
        phi0, ts, val = _tableau_instance(rng, dialect, max_diamonds=3)
        try:
            res = TB.unravel(phi0, ts, val, depth=depth, dialect=dialect,
                             node_budget=30000)
        except TB.InternalTableauError as exc:
            failures.append(f"instance {i} ({dialect}, {phi0}): {exc}")
            continue
        total_nodes += len(res.tableau.nodes)
        truth = TB.verify_truth_prefix(res)
        for o in truth.failures:
            failures.append(
                f"instance {i} ({dialect}, {phi0}): truth failure at node "
                f"{o.node} for {o.theta}")
        if truth.root_colour_ok is False:
            failures.append(f"instance {i} ({dialect}, {phi0}): I-colour not root-only")
        mon = TB.monitor_eventualities(res)
        for e in mon.flagged:
            failures.append(
                f"instance {i} ({dialect}, {phi0}): monitor {e.flags} at leaf "
                f"{e.leaf} pos {e.index} ({e.theta}, trace {e.statuses})")
    return CriterionResult(
        "C5", "tableau-integrity",
        not failures,
        f"{instances} satisfiable instances x depth {depth} "
        f"({total_nodes} nodes), {len(failures)} violations",
        failures)


# -- C6: quantifier-free reduction ---------------------------------------------------

def criterion_qf_reduction(seed: int, samples: int = 200) -> CriterionResult:
    rng = _rng(seed, "lemma-qf")
    failures: List[str] = []
    for i in range(samples):
        ts = R.random_rooted_system(rng, max_states=5)
        full = (1 << ts.n) - 1
        val = {p: rng.randint(0, full) for p in ("p", "q")}
        phi = R.random_qf_formula(rng)
        want = eval_qf(phi, ts, val)
        t_phi = M.qf_to_equation(phi)
        t_prime = M.qf_to_nonbot(phi)
        ctx = EvalContext(ts, val)
        via_eq = ctx.eval(t_phi) == full
        via_nb = ctx.eval(t_prime) != 0
        if not (want == via_eq == via_nb):
            failures.append(
                f"sample {i}: phi={phi} qf={want} (t=top)={via_eq} (t'!=bot)={via_nb}")
    return CriterionResult(
        "C6", "qf-reduction",
        not failures,
        f"{samples} quantifier-free formulas on rooted models, "
        f"{len(failures)} violations",
        failures)


# -- C7: standard translation cross-oracle ---------------------------------------------

def _translation_cost(t: F.Formula) -> int:
    return sum(1 for g in t.subformulas() if g.kind in (F.EU, F.EG, F.AR, F.AF))


def criterion_translation(seed: int, samples: int = 200) -> CriterionResult:
    rng = _rng(seed, "translation")
    failures: List[str] = []
    points = 0
    for i in range(samples):
        ts = R.random_system(rng, max_states=5)
        full = (1 << ts.n) - 1
        val = {p: rng.randint(0, full) for p in ("p", "q")}
        while True:
            term = R.random_formula(rng, depth=rng.randint(0, 3), dialect="plain")
            if _translation_cost(term) <= 2:
                break
        mask = EvalContext(ts, val).eval(term)
        tdot = M.standard_translation(term, "v")
        for s in range(ts.n):
            points += 1
            got = M.mso_eval(tdot, ts, {**val, "v": 1 << s})
            if got != bool(mask >> s & 1):
                failures.append(f"sample {i}: {term} at state {s}: "
                                f"eval={bool(mask >> s & 1)} mso={got}")
    return CriterionResult(
        "C7", "standard-translation",
        not failures,
        f"{samples} I-free terms, {points} pointwise checks, "
        f"{len(failures)} disagreements",
        failures)


# -- C8: automaton / acc-term cross-validation --------------------------------------------

def _product_size(aut: AUT.ParityTreeAutomaton, gen: TransitionSystem) -> int:
    seen = {(gen.root, aut.init)}
    todo = [(gen.root, aut.init)]
    while todo:
        s, q = todo.pop()
        letter = frozenset(gen.colour[s]) & frozenset(aut.props)
        for q0, q1 in aut.options(q, letter):
            for nxt in ((gen.f0[s], q0), (gen.f1[s], q1)):
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
    return len(seen)


def criterion_automata(seed: int, samples: int = 30) -> CriterionResult:
    rng = _rng(seed, "automata")
    failures: List[str] = []
    accepted = rejected = 0
    i = 0
    while i < samples:
        nprops = rng.randint(1, 2)
        props = ("p", "q")[:nprops]
        aut = R.random_parity_automaton(rng, max_states=3, max_priority=3,
                                        props=props)
        gen = R.random_binary_system(rng, max_states=3, props=props)
        if _product_size(aut, gen) > 6:
            continue
        i += 1
        res = AUT.accepts_regular(aut, gen)
        acc = AUT.compile_acc_binary(aut)
        if res.accepts:
            accepted += 1
            ts, val = res.run.to_system()
            full = (1 << ts.n) - 1
            if EvalContext(ts, val).eval(acc) != full:
                failures.append(
                    f"instance {i}: accepted but acc-term not full on the "
                    f"strategy product (|Q|={len(aut.states)}, gen n={gen.n})")
        else:
            rejected += 1
            witness = AUT.exhaustive_labelling_search(aut, gen)
            if witness is not None:
                failures.append(
                    f"instance {i}: rejected but exhaustive search found a "
                    f"labelling (|Q|={len(aut.states)}, gen n={gen.n})")
    return CriterionResult(
        "C8", "automata-acc-cross-validation",
        not failures,
        f"{samples} automaton/generator pairs ({accepted} accepted, "
        f"{rejected} rejected), {len(failures)} violations",
        failures)


# -- C9: determinism -------------------------------------------------------------------

def criterion_determinism(seed: int, samples: int = 200) -> CriterionResult:
    small = max(5, samples // 20)
    first = render_report(run_criteria(seed, small))
    second = render_report(run_criteria(seed, small))
    passed = first == second
    return CriterionResult(
        "C9", "determinism",
        passed,
        f"two reduced runs (seed {seed}, scale {small}) "
        f"{'byte-identical' if passed else 'DIFFER'}",
        [] if passed else ["reports differ between identical runs"])


# -- harness ------------------------------------------------------------------------------

def run_criteria(seed: int, samples: int = 200) -> List[CriterionResult]:
    """Criteria C1-C8 scaled from the base sample count (spec sizes at 200)."""
    return [
        criterion_semantics_oracle(seed, samples=max(1, samples * 5 // 2)),
        criterion_axioms(seed, models=samples),
        criterion_contextual(seed, models=samples),
        criterion_nnf(seed, formulas=max(1, samples * 3 // 2)),
        criterion_tableau(seed, instances=max(3, samples // 4)),
        criterion_qf_reduction(seed, samples=samples),
        criterion_translation(seed, samples=samples),
        criterion_automata(seed, samples=max(2, samples * 3 // 20)),
    ]


def run_selftest(seed: int = 7, samples: int = 200) -> List[CriterionResult]:
    results = run_criteria(seed, samples)
    results.append(criterion_determinism(seed, samples))
    return results


def render_report(results: List[CriterionResult]) -> str:
    lines = [r.render() for r in results]
    ok = sum(1 for r in results if r.passed)
    lines.append(f"{ok}/{len(results)} criteria passed")
    return "\n".join(lines)


def report_dict(results: List[CriterionResult]) -> Dict:
    return {
        "criteria": [
            {
                "key": r.key,
                "title": r.title,
                "passed": r.passed,
                "detail": r.detail,
                "failures": r.failures,
            }
            for r in results
        ],
        "passed": all(r.passed for r in results),
    }
