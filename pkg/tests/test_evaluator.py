import random

import pytest

from fairctl import fol
from fairctl import formulas as F
from fairctl import randgen as R
from fairctl.evaluator import (EvalContext, DialectMismatchError,
                               UnboundVariableError, brute_force_af,
                               brute_force_ar, brute_force_eg, brute_force_eu,
                               check_axioms, eval_formula, eval_qf, eval_fo,
                               valuation_from_colour)
from fairctl.systems import TransitionSystem
from conftest import eval_on, rng_for

p, q = F.var("p"), F.var("q")


class TestEval:
    def test_dia_top_is_all(self):
        rng = rng_for("dia-top")
        for _ in range(50):
            ts = R.random_system(rng, max_states=6)
            assert eval_on(ts, F.dia(F.top())) == (1 << ts.n) - 1

    def test_eu_needs_reachable_target(self, self_loop):
        # single q-state with a self loop: no path ever reaches p
        assert eval_on(self_loop, F.eu(p, q)) == 0

    def test_eg_on_two_cycle(self, two_cycle):
        assert eval_on(two_cycle, F.eg(F.top(), p)) == 0b11
        assert eval_on(two_cycle, F.eg(F.neg(p), p)) == 0

    def test_unbound_variable(self, two_cycle):
        with pytest.raises(UnboundVariableError):
            EvalContext(two_cycle, {}).eval(F.var("nope"))

    def test_dialect_mismatch(self, two_cycle):
        with pytest.raises(DialectMismatchError):
            EvalContext(two_cycle, {}).eval(F.root())
        with pytest.raises(DialectMismatchError):
            EvalContext(two_cycle, {"p": 1}).eval(F.x0(p))

    def test_root_constant(self):
        ts = TransitionSystem(2, [(0, 1), (1, 1)], {}, root=0)
        assert eval_on(ts, F.root()) == 0b01

    def test_x_preimage(self):
        ts = TransitionSystem(2, [], {0: {"p"}}, root=0, f0=[1, 1], f1=[0, 0])
        assert eval_on(ts, F.x1(p)) == 0b11  # f1 always goes to state 0 = p
        assert eval_on(ts, F.x0(p)) == 0


class TestBruteForceOracles:
    def test_no_target(self, two_cycle):
        assert brute_force_eu(two_cycle, 0, 0b11) == 0

    def test_n0_paths(self, two_cycle):
        assert brute_force_eu(two_cycle, 0b11, 0) == 0b11

    def test_size_guard(self):
        ts = TransitionSystem(11, [(s, (s + 1) % 11) for s in range(11)], {})
        with pytest.raises(ValueError):
            brute_force_eu(ts, 1, 1)

    def test_agreement_with_eval(self):
        rng = rng_for("oracle-agreement")
        for _ in range(500):
            ts = R.random_system(rng, max_states=6)
            full = (1 << ts.n) - 1
            a, b = rng.randint(0, full), rng.randint(0, full)
            k = EvalContext(ts, {}).kernel
            assert k.eu(a, b, full) == brute_force_eu(ts, a, b)
            assert k.eg(a, b) == brute_force_eg(ts, a, b)
            assert k.ar(a, b) == brute_force_ar(ts, a, b)
            assert k.af(a, b, full) == brute_force_af(ts, a, b)


class TestAlgebraicLaws:
    def test_de_morgan_duality(self):
        rng = rng_for("de-morgan")
        for _ in range(200):
            ts = R.random_system(rng, max_states=6)
            full = (1 << ts.n) - 1
            a, b = rng.randint(0, full), rng.randint(0, full)
            k = EvalContext(ts, {}).kernel
            assert k.ar(a, b) == full ^ k.eu(full ^ a, full ^ b, full)
            assert k.af(a, b, full) == full ^ k.eg(full ^ a, full ^ b)

    def test_monotonicity(self):
        rng = rng_for("monotone")
        for _ in range(200):
            ts = R.random_system(rng, max_states=6)
            full = (1 << ts.n) - 1
            a = rng.randint(0, full)
            b = rng.randint(0, full)
            a2 = a | rng.randint(0, full)
            b2 = b | rng.randint(0, full)
            k = EvalContext(ts, {}).kernel

            def leq(x, y):
                return x | y == y

            assert leq(k.eu(a, b, full), k.eu(a2, b2, full))
            assert leq(k.eg(a, b), k.eg(a2, b2))
            assert leq(k.ar(a, b), k.ar(a2, b2))
            assert leq(k.af(a, b, full), k.af(a2, b2, full))

    def test_fixpoint_round_counts(self):
        # ascending/descending chains close within |S|+1 rounds
        rng = rng_for("rounds")
        for _ in range(100):
            ts = R.random_system(rng, max_states=6)
            full = (1 << ts.n) - 1
            a, b, r = (rng.randint(0, full) for _ in range(3))
            k = EvalContext(ts, {}).kernel
            x, rounds = 0, 0
            while True:
                nxt = a | (b & k.preimage(r & x))
                if nxt == x:
                    break
                x, rounds = nxt, rounds + 1
            assert rounds <= ts.n + 1
            assert x == k.eu(a, b, r)
            y, rounds = full, 0
            while True:
                nxt = a & k.preimage(k.eu(b & y, a, full))
                if nxt == y:
                    break
                y, rounds = nxt, rounds + 1
            assert rounds <= ts.n + 1
            assert y == k.eg(a, b)


class TestEvalQF:
    def test_trivial_equalities(self, two_cycle):
        assert eval_qf(fol.TermEq(F.top(), F.top()), two_cycle, {})

    def test_axiom_d_as_equation(self):
        rng = rng_for("qf-axiom-d")
        phi = fol.TermEq(F.dia(F.top()), F.top())
        for _ in range(100):
            ts = R.random_system(rng, max_states=6)
            assert eval_qf(phi, ts, {})

    def test_eu_fixpoint_identity(self):
        rng = rng_for("qf-eufix")
        lhs = F.eu(p, q)
        rhs = F.or_(p, F.and_(q, F.dia(F.eu(p, q))))
        for _ in range(500):
            ts = R.random_system(rng, max_states=6)
            full = (1 << ts.n) - 1
            val = {"p": rng.randint(0, full), "q": rng.randint(0, full)}
            assert eval_qf(fol.TermEq(lhs, rhs), ts, val)

    def test_rejects_quantifiers(self, two_cycle):
        phi = fol.FExists("x", fol.TermEq(F.var("x"), F.var("x")))
        with pytest.raises(ValueError):
            eval_qf(phi, two_cycle, {})
        assert eval_fo(phi, two_cycle, {})


class TestAxiomSuite:
    def test_clean_run(self):
        rng = rng_for("axioms-clean")
        for _ in range(30):
            ts = R.random_system(rng, max_states=5)
            rep = check_axioms(ts, rng, n_samples=60)
            assert rep.ok, rep.violations

    def test_rooted_and_binary_axioms(self):
        rng = rng_for("axioms-rooted")
        for _ in range(15):
            ts = R.random_rooted_system(rng, max_states=5)
            assert check_axioms(ts, rng, n_samples=60).ok
        for _ in range(15):
            ts = R.random_binary_system(rng, max_states=4, strict_root=True)
            assert check_axioms(ts, rng, n_samples=60).ok

    def test_mutated_eg_caught_by_egmax(self, two_cycle):
        # computing EG as a least fixpoint gives emptyset on the 2-cycle,
        # which EGmax rejects with c = {s0,s1}, a = top, b = p
        def broken_eval(tpl, val):
            ctx = EvalContext(two_cycle, val)
            if tpl.kind == F.EG:
                a, b = ctx.eval(tpl.args[0]), ctx.eval(tpl.args[1])
                x = 0
                while True:
                    nxt = a & ctx.kernel.preimage(ctx.kernel.eu(b & x, a, 0b11))
                    if nxt == x:
                        return x
                    x = nxt
            return ctx.eval(tpl)

        rep = check_axioms(two_cycle, random.Random(0), n_samples=20,
                           eval_fn=broken_eval)
        names = {v.axiom for v in rep.violations}
        assert "EGmax" in names
        witnesses = [v for v in rep.violations if v.axiom == "EGmax"]
        assert any(v.witness["a"] == 0b11 and v.witness["b"] == 0b10
                   and v.witness["c"] == 0b11 for v in witnesses)

    def test_eufix_instance_a_top(self):
        # top <= EU(top, b) for every b
        rng = rng_for("eufix-top")
        for _ in range(50):
            ts = R.random_system(rng, max_states=6)
            full = (1 << ts.n) - 1
            b = rng.randint(0, full)
            k = EvalContext(ts, {}).kernel
            assert k.eu(full, b, full) == full
