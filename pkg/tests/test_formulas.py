import pytest

from fairctl import formulas as F
from fairctl import randgen as R
from fairctl.evaluator import EvalContext
from conftest import eval_on, random_model_and_valuation, rng_for

p, q, r = F.var("p"), F.var("q"), F.var("r")


class TestParsePrint:
    def test_eu_binary(self):
        assert F.parse_formula("EU(p, q)", "plain") is F.eu(p, q)

    def test_neg_of_disjunction(self):
        f = F.parse_formula("~(dia p | box q)", "plain")
        assert f is F.neg(F.or_(F.dia(p), F.box(q)))

    def test_dialect_gate_x0(self):
        with pytest.raises(F.DialectError):
            F.parse_formula("X0 p", "plain")

    def test_dialect_gate_i(self):
        with pytest.raises(F.DialectError):
            F.parse_formula("I", "plain")
        assert F.parse_formula("I", "rooted") is F.root()

    def test_syntax_error_position(self):
        with pytest.raises(F.FormulaSyntaxError):
            F.parse_formula("EU(p", "plain")

    def test_precedence(self):
        assert F.parse_formula("~p & q | r", "plain") is F.or_(
            F.and_(F.neg(p), q), r)
        assert F.parse_formula("dia p & q", "plain") is F.and_(F.dia(p), q)

    def test_ternary_prints_binary_when_chi_top(self):
        assert F.print_formula(F.eu(p, q, F.top())) == "EU(p, q)"
        assert F.print_formula(F.eu(p, q, r)) == "EU(p, q, r)"

    def test_parse_print_identity_on_random_formulas(self):
        rng = rng_for("parse-print")
        for _ in range(300):
            f = R.random_formula(rng, depth=rng.randint(0, 5), dialect="binary")
            assert F.parse_formula(F.print_formula(f), "binary") is f


class TestHashConsing:
    def test_structural_sharing(self):
        a = F.and_(F.dia(p), F.dia(p))
        assert a.args[0] is a.args[1]

    def test_ids_total_order(self):
        f, g = F.dia(p), F.box(q)
        assert (f.fid < g.fid) or (g.fid < f.fid)

    def test_binary_is_ternary_with_top(self):
        assert F.eu(p, q) is F.eu(p, q, F.top())
        assert F.af(p, q) is F.af(p, q, F.top())

    def test_concurrent_interning(self):
        import threading

        results = []

        def worker(i):
            results.append(F.and_(F.var(f"w{i % 3}"), F.dia(F.var("w0"))))

        threads = [threading.Thread(target=worker, args=(i,)) for i in range(24)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        by_name = {}
        for f in results:
            by_name.setdefault(f.args[0].name, set()).add(f.fid)
        assert all(len(v) == 1 for v in by_name.values())


class TestExpandDerived:
    def test_box(self):
        assert F.expand_derived(F.box(p)) is F.neg(F.dia(F.neg(p)))

    def test_ar(self):
        assert F.expand_derived(F.ar(p, q)) is F.neg(F.eu(F.neg(p), F.neg(q)))

    def test_af_binary(self):
        assert F.expand_derived(F.af(p, q)) is F.neg(F.eg(F.neg(p), F.neg(q)))

    def test_eu3_defining_term(self):
        # EU_c(p,q,r) = p | (q & dia EU(p&r, q&r)); expansion goes through
        # exactly that term before recursing
        direct = F.expand_derived(F.eu(p, q, r))
        via_term = F.expand_derived(
            F.or_(p, F.and_(q, F.dia(F.eu(F.and_(p, r), F.and_(q, r))))))
        assert direct is via_term

    def test_af3_defining_term(self):
        direct = F.expand_derived(F.af(p, q, r))
        via_term = F.expand_derived(
            F.and_(F.af(p, q), F.or_(p, F.box(F.ar(F.or_(q, r), p)))))
        assert direct is via_term

    def test_output_is_basic(self):
        rng = rng_for("expand-basic")
        for _ in range(200):
            f = R.random_formula(rng, depth=rng.randint(0, 4), dialect="binary")
            assert F.is_basic(F.expand_derived(f)), f

    def test_eval_equivalent(self):
        rng = rng_for("expand-eval")
        for _ in range(200):
            ts, val = random_model_and_valuation(rng)
            f = R.random_formula(rng, depth=rng.randint(0, 4))
            ctx = EvalContext(ts, val)
            assert ctx.eval(f) == ctx.eval(F.expand_derived(f))


class TestNNF:
    def test_neg_eu_is_ar(self):
        assert F.nnf(F.neg(F.eu(p, q))) is F.ar(F.neg(p), F.neg(q))

    def test_double_negation(self):
        assert F.nnf(F.neg(F.neg(p))) is p

    def test_neg_eg_example(self):
        # ~EG(p, q|r) -> AF(~p, ~q & ~r), then eval-checked below
        got = F.nnf(F.neg(F.eg(p, F.or_(q, r))))
        assert got is F.af(F.neg(p), F.and_(F.neg(q), F.neg(r)))
        rng = rng_for("nnf-eg")
        for _ in range(100):
            ts, val = random_model_and_valuation(rng, props=("p", "q", "r"))
            ctx = EvalContext(ts, val)
            assert ctx.eval(F.neg(F.eg(p, F.or_(q, r)))) == ctx.eval(got)

    def test_idempotent_and_literal_only_negation(self):
        rng = rng_for("nnf-idem")
        for _ in range(300):
            f = R.random_formula(rng, depth=rng.randint(0, 5), dialect="binary")
            g = F.nnf(f)
            assert F.is_nnf(g)
            assert F.nnf(g) is g

    def test_eval_equivalent(self):
        rng = rng_for("nnf-eval")
        for _ in range(200):
            ts, val = random_model_and_valuation(rng)
            f = R.random_formula(rng, depth=rng.randint(0, 5))
            ctx = EvalContext(ts, val)
            assert ctx.eval(f) == ctx.eval(F.nnf(f))


class TestClosure:
    def test_eg_unfolding_member(self):
        gamma = F.fischer_ladner_closure([F.eg(p, q)])
        assert F.dia(F.eu(F.and_(q, F.eg(p, q)), p)) in gamma

    def test_empty_seed(self):
        gamma = F.fischer_ladner_closure([])
        top3 = F.eu(F.top(), F.top(), F.top())
        assert top3 in gamma
        assert F.top() in gamma
        assert gamma.members == F.fischer_ladner_closure([F.top()]).members

    def test_af3_box_member(self):
        chi = F.var("chi")
        gamma = F.fischer_ladner_closure([F.af(p, q, chi)])
        assert F.box(F.ar(F.or_(q, chi), p)) in gamma

    def test_binary_adds_next_formulas(self):
        gamma = F.fischer_ladner_closure([F.dia(p)], "binary")
        assert F.x0(p) in gamma and F.x1(p) in gamma

    def test_rejects_non_nnf_seed(self):
        with pytest.raises(ValueError):
            F.fischer_ladner_closure([F.neg(F.dia(p))])

    def test_monotone_and_bounded(self):
        rng = rng_for("closure-mono")
        for _ in range(60):
            f = F.nnf(R.random_formula(rng, depth=rng.randint(0, 3)))
            g = F.nnf(R.random_formula(rng, depth=rng.randint(0, 3)))
            small = F.fischer_ladner_closure([f])
            big = F.fischer_ladner_closure([f, g])
            assert small.members <= big.members
            assert len(small) <= small.bound
            assert len(big) <= big.bound

    def test_provenance_recorded(self):
        gamma = F.fischer_ladner_closure([F.eg(p, q)])
        assert gamma.provenance[F.eg(p, q)] == "seed"
        assert gamma.provenance[F.eu(F.top(), F.top(), F.top())] == "initial"


class TestContextualOps:
    def test_chi_top_collapses_to_binary(self, two_cycle):
        ctx = EvalContext(two_cycle, {"p": 2, "q": 1})
        assert ctx.eval(F.eu_c(p, q, F.top())) == ctx.eval(F.eu(p, q))
        assert ctx.eval(F.af_c(p, q, F.top())) == ctx.eval(F.af(p, q))

    def test_af_unfolding_identity(self):
        rng = rng_for("afc-unfold")
        for _ in range(120):
            ts, val = random_model_and_valuation(rng, props=("p", "q", "r"))
            ctx = EvalContext(ts, val)
            lhs = ctx.eval(F.af_c(p, q, r))
            rhs = ctx.eval(F.or_(p, F.box(F.and_(F.or_(q, r), F.af_c(p, q, r)))))
            assert lhs == rhs


class TestCharacteristicFormula:
    def test_empty_rho(self):
        assert F.characteristic_formula([], []) is F.top()

    def test_two_element_rho(self):
        got = F.characteristic_formula([p], [p, q])
        assert got is F.conj(sorted([p]) + [F.neg(q)])

    def test_type_lemma_exhaustive(self):
        # s' satisfies kappa(s, rho) iff s and s' agree on rho
        rng = rng_for("kappa-lemma")
        for _ in range(40):
            ts, val = random_model_and_valuation(rng, max_states=6)
            ctx = EvalContext(ts, val)
            rho = [R.random_formula(rng, rng.randint(0, 2)) for _ in range(3)]
            masks = {g: ctx.eval(g) for g in rho}
            for s in range(ts.n):
                members = [g for g in rho if masks[g] >> s & 1]
                kappa = F.characteristic_formula(members, rho)
                km = ctx.eval(kappa)
                for s2 in range(ts.n):
                    agree = all((masks[g] >> s & 1) == (masks[g] >> s2 & 1)
                                for g in rho)
                    assert bool(km >> s2 & 1) == agree


class TestEventualities:
    def test_top_eventuality(self):
        top3 = F.eu(F.top(), F.top(), F.top())
        assert F.eventualities([top3]) == [top3]

    def test_eg_closure_eventualities(self):
        gamma = F.fischer_ladner_closure([F.eg(p, q)])
        got = F.eventualities(gamma)
        expect = sorted([F.eu(F.and_(q, F.eg(p, q)), p),
                         F.eu(F.top(), F.top(), F.top())])
        assert got == expect

    def test_box_closure_eventualities(self):
        gamma = F.fischer_ladner_closure([F.box(F.nnf(p))])
        assert F.eventualities(gamma) == [F.eu(F.top(), F.top(), F.top())]
