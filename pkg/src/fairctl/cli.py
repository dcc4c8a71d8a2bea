"""The fairctl command line: model checking, axiom sweeps, tableau traces,
automaton acceptance, and logic translations.

Exit codes: 0 success, 1 a checked property failed / a violation was found,
2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional

from . import __version__
from . import automata as AUT
from . import formulas as F
from . import mso as M
from . import randgen as R
from . import selftest as ST
from . import tableau as TB
from .evaluator import (EvalContext, check_axioms, states_of,
                        valuation_from_colour)
from .kernels import BACKEND
from .systems import load_system

import random


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _load_model(path: str):
    return load_system(_read(path))


def _parse_assigns(pairs: List[str], n: int) -> Dict[str, int]:
    out: Dict[str, int] = {}
    for item in pairs:
        if "=" not in item:
            raise UsageError(f"bad --assign {item!r}, expected name=i,j,...")
        name, _, rhs = item.partition("=")
        mask = 0
        rhs = rhs.strip()
        if rhs:
            for tok in rhs.split(","):
                s = int(tok)
                if not 0 <= s < n:
                    raise UsageError(f"--assign {item!r}: state {s} out of range")
                mask |= 1 << s
        out[name.strip()] = mask
    return out


def cmd_check(args) -> int:
    ts = _load_model(args.model)
    f = F.parse_formula(args.formula, args.dialect)
    val = valuation_from_colour(ts)
    for name in sorted(f.variables() - set(val)):
        val[name] = 0
    mask = EvalContext(ts, val).eval(f)
    sat = states_of(mask, ts.n)
    if args.at is not None:
        holds = bool(mask >> args.at & 1)
        if args.json:
            print(json.dumps({"formula": str(f), "state": args.at, "holds": holds}))
        else:
            print("yes" if holds else "no")
        return 0 if holds else 1
    if args.json:
        print(json.dumps({"formula": str(f), "satisfying_states": sat}))
    else:
        print(" ".join(map(str, sat)) if sat else "(empty)")
    return 0


def cmd_axioms(args) -> int:
    rng = random.Random(args.seed)
    violations = 0
    lines = []
    for i in range(args.models):
        kind = rng.random()
        if kind < 0.5:
            ts = R.random_system(rng, max_states=args.states)
        elif kind < 0.8:
            ts = R.random_rooted_system(rng, max_states=args.states)
        else:
            ts = R.random_binary_system(rng, max_states=min(args.states, 4),
                                        strict_root=rng.random() < 0.5)
        rep = check_axioms(ts, rng, n_samples=args.samples)
        for v in rep.violations:
            violations += 1
            lines.append(f"model {i} (n={ts.n}): {v}")
    if args.json:
        print(json.dumps({"models": args.models, "violations": lines}))
    else:
        for line in lines:
            print(line)
        print(f"{args.models} models checked, {violations} violations")
    return 1 if violations else 0


def cmd_unravel(args) -> int:
    ts = _load_model(args.model)
    f = F.parse_formula(args.formula, args.dialect)
    val = valuation_from_colour(ts)
    for name in sorted(f.variables() - set(val)):
        val[name] = 0
    res = TB.unravel(f, ts, val, depth=args.depth, dialect=args.dialect,
                     node_budget=args.budget)
    doc = TB.trace_dict(res)
    truth = TB.verify_truth_prefix(res)
    mon = TB.monitor_eventualities(res)
    doc["truth_counts"] = truth.counts()
    doc["truth_failures"] = len(truth.failures)
    doc["monitor_flagged"] = len(mon.flagged)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.json:
        print(json.dumps({k: doc[k] for k in
                          ("dialect", "phi0", "phi0_effective", "rounds",
                           "stopped", "truth_counts", "truth_failures",
                           "monitor_flagged")}, sort_keys=True))
    else:
        print(f"unravelled {len(res.tableau.nodes)} nodes in {res.rounds} rounds "
              f"({res.stopped})")
        print(f"truth report: {truth.counts()}; monitor flags: {len(mon.flagged)}")
        if args.trace:
            print(f"trace written to {args.trace}")
    return 1 if (truth.failures or mon.flagged) else 0


def cmd_accepts(args) -> int:
    aut = AUT.parse_automaton(_read(args.aut))
    if not isinstance(aut, AUT.ParityTreeAutomaton):
        raise UsageError("accepts needs a parity tree automaton")
    gen = _load_model(args.model)
    res = AUT.accepts_regular(aut, gen)
    if args.json:
        doc = {"accepts": res.accepts, "game_size": res.game_size}
        if res.run is not None:
            doc["run"] = {f"{s},{q}": list(res.run.choice[(s, q)])
                          for (s, q) in res.run.pairs}
        print(json.dumps(doc, sort_keys=True))
    else:
        print("accepts" if res.accepts else "rejects")
        if res.run is not None:
            for (s, q) in res.run.pairs:
                q0, q1 = res.run.choice[(s, q)]
                print(f"  ({s},{q}) -> 0:{q0} 1:{q1}")
    return 0 if res.accepts else 1


def cmd_acc_term(args) -> int:
    aut = AUT.parse_automaton(_read(args.aut))
    if isinstance(aut, AUT.ModalAutomaton):
        acc = AUT.compile_acc_modal(aut)
    else:
        acc = AUT.compile_acc_binary(aut)
    print(F.print_formula(acc))
    return 0


def cmd_to_mso(args) -> int:
    dialect = "s2s" if args.dialect == "s2s" else "mso"
    f = F.parse_formula(args.formula, "binary" if dialect == "s2s" else "rooted")
    phi = M.standard_translation(f, args.var, dialect="s2s" if dialect == "s2s"
                                 else "rooted")
    print(M.print_mso(phi))
    return 0


def cmd_mso_eval(args) -> int:
    ts = _load_model(args.model)
    phi = M.parse_mso(args.mso, dialect="s2s" if ts.is_binary else "mso")
    assign = _parse_assigns(args.assign or [], ts.n)
    val = valuation_from_colour(ts)
    merged = {**val, **assign}
    missing = sorted(M.free_vars(phi) - set(merged))
    if missing:
        raise UsageError(f"unassigned variables: {missing} (use --assign)")
    out = M.mso_eval(phi, ts, merged)
    print(json.dumps({"holds": out}) if args.json else ("true" if out else "false"))
    return 0 if out else 1


def cmd_nnf(args) -> int:
    f = F.parse_formula(args.formula, args.dialect)
    print(F.print_formula(F.nnf(f)))
    return 0


def cmd_closure(args) -> int:
    f = F.nnf(F.parse_formula(args.formula, args.dialect))
    gamma = F.fischer_ladner_closure([f], args.dialect)
    if args.json:
        print(json.dumps({
            "size": len(gamma),
            "bound": gamma.bound,
            "members": [{"formula": str(g), "rule": gamma.provenance[g]}
                        for g in gamma],
        }, sort_keys=True))
    else:
        for g in gamma:
            print(f"{gamma.provenance[g]:>12}  {g}")
        print(f"{len(gamma)} formulas (bound {gamma.bound})")
    return 0


def cmd_selftest(args) -> int:
    results = ST.run_selftest(args.seed, args.samples)
    if args.json:
        print(json.dumps(ST.report_dict(results), sort_keys=True))
    else:
        print(ST.render_report(results))
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fairctl",
        description="fair-CTL toolkit: model checking, tableaux, automata, MSO")
    ap.add_argument("--version", action="version",
                    version=f"fairctl {__version__} (kernel: {BACKEND})")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true", help="JSON output")
        return p

    p = add("check", cmd_check, help="evaluate a formula on a model")
    p.add_argument("--model", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--dialect", choices=F.DIALECTS, default="binary")
    p.add_argument("--at", type=int, default=None, help="ask at one state")

    p = add("axioms", cmd_axioms, help="check the axiom suite on random models")
    p.add_argument("--states", type=int, default=6)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--models", type=int, default=20)

    p = add("unravel", cmd_unravel, help="build a tableau tree model")
    p.add_argument("--model", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--dialect", choices=F.DIALECTS, default="plain")
    p.add_argument("--trace", default=None, help="write the JSON trace here")
    p.add_argument("--budget", type=int, default=20000, help="node budget")

    p = add("accepts", cmd_accepts, help="parity tree automaton vs regular tree")
    p.add_argument("--aut", required=True)
    p.add_argument("--model", required=True)

    p = add("acc-term", cmd_acc_term, help="compile the acceptance term")
    p.add_argument("--aut", required=True)

    p = add("to-mso", cmd_to_mso, help="standard translation of an L-term")
    p.add_argument("--formula", required=True)
    p.add_argument("--dialect", choices=("mso", "s2s"), default="mso")
    p.add_argument("--var", default="v", help="free first-order variable name")

    p = add("mso-eval", cmd_mso_eval, help="evaluate an MSO formula on a model")
    p.add_argument("--model", required=True)
    p.add_argument("--mso", required=True)
    p.add_argument("--assign", action="append",
                   help="variable assignment, e.g. p=0,2 (repeatable)")

    p = add("nnf", cmd_nnf, help="negation normal form")
    p.add_argument("--formula", required=True)
    p.add_argument("--dialect", choices=F.DIALECTS, default="binary")

    p = add("closure", cmd_closure, help="Fischer-Ladner closure")
    p.add_argument("--formula", required=True)
    p.add_argument("--dialect", choices=F.DIALECTS, default="plain")

    p = add("selftest", cmd_selftest, help="run the acceptance suite")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--samples", type=int, default=200)

    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, F.FormulaSyntaxError, F.DialectError, M.MSOError,
            AUT.AutomatonError) as exc:
        print(f"fairctl: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"fairctl: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
