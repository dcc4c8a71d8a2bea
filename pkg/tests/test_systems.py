import pytest

from fairctl import formulas as F
from fairctl import randgen as R
from fairctl.evaluator import EvalContext, prefix_force, valuation_from_colour
from fairctl.systems import (ModelError, TransitionSystem,
                             binary_unravel_to_depth, load_system,
                             omega_expand_to_depth, save_system,
                             unravel_to_depth)
from conftest import rng_for


class TestLoadSave:
    def test_single_self_loop(self):
        ts = load_system("states 1\nedge 0 0\ncolor 0 p\n")
        assert ts.n == 1 and ts.colour[0] == {"p"}

    def test_non_serial_rejected(self):
        with pytest.raises(ModelError, match="state 1 not serial"):
            load_system("states 2\nedge 0 1\n")

    def test_full_binary_tree_generator(self):
        # one state with f0 = f1 = self unravels to the full binary tree
        ts = load_system("states 1\nf0 0 0\nf1 0 0\nroot 0\ncolor 0 p\n")
        assert ts.is_binary and ts.root == 0
        assert not ts.has_strict_root  # self loop reaches the root

    def test_edges_must_match_f_maps(self):
        text = "states 2\nedge 0 0\nedge 1 0\nf0 0 1\nf1 0 1\nf0 1 0\nf1 1 0\n"
        with pytest.raises(ModelError, match="differs"):
            load_system(text)

    def test_partial_f_maps_rejected(self):
        with pytest.raises(ModelError, match="every state"):
            load_system("states 2\nf0 0 1\nf1 0 1\nf0 1 0\n")

    def test_bad_root(self):
        with pytest.raises(ModelError, match="not reachable"):
            load_system("states 2\nedge 0 0\nedge 1 1\nroot 0\n")

    def test_round_trip(self):
        rng = rng_for("model-roundtrip")
        for _ in range(40):
            ts = R.random_system(rng, max_states=5)
            ts2 = load_system(save_system(ts))
            assert ts2.succ == ts.succ and ts2.colour == ts.colour
        for _ in range(20):
            ts = R.random_binary_system(rng, max_states=4)
            ts2 = load_system(save_system(ts))
            assert ts2.f0 == ts.f0 and ts2.f1 == ts.f1 and ts2.root == ts.root


class TestUnravel:
    def test_self_loop_depth2_is_path(self):
        ts = TransitionSystem(1, [(0, 0)], {0: {"p"}}, root=0)
        tree = unravel_to_depth(ts, 2)
        assert len(tree) == 3
        assert [tree.parent[v] for v in range(3)] == [None, 0, 1]

    def test_binary_one_state_depth2(self):
        ts = TransitionSystem(1, [], {0: {"p"}}, root=0, f0=[0], f1=[0])
        tree = binary_unravel_to_depth(ts, 2)
        assert len(tree) == 7
        assert sorted(tree.branch[v] for v in tree.children[0]) == [0, 1]

    def test_two_cycle_alternates(self):
        ts = TransitionSystem(2, [(0, 1), (1, 0)], {1: {"p"}}, root=0)
        tree = unravel_to_depth(ts, 3)
        states = []
        v = 0
        while True:
            states.append(tree.state[v])
            if not tree.children[v]:
                break
            v = tree.children[v][0]
        assert states == [0, 1, 0, 1]


class TestOmegaExpansion:
    def test_width1_equals_unravel(self):
        rng = rng_for("omega-w1")
        for _ in range(20):
            ts = R.random_rooted_system(rng, max_states=4)
            a = unravel_to_depth(ts, 3)
            b = omega_expand_to_depth(ts, 3, width=1)
            assert a.state == b.state and a.parent == b.parent

    def test_self_loop_width2(self):
        ts = TransitionSystem(1, [(0, 0)], {}, root=0)
        tree = omega_expand_to_depth(ts, 1, width=2)
        assert len(tree.children[0]) == 2

    def test_colour_equals_projection(self):
        rng = rng_for("omega-colour")
        for _ in range(30):
            ts = R.random_rooted_system(rng, max_states=5)
            tree = omega_expand_to_depth(ts, 3, width=2)
            for v in range(len(tree)):
                assert tree.colour[v] == ts.colour[tree.state[v]]


class TestPrefixForcing:
    def test_definite_prefix_verdicts_match_eval(self):
        # on the unravelling, a definite verdict for the prefix-decidable
        # fragment agrees with eval at the projected state
        rng = rng_for("prefix-eval")
        for _ in range(60):
            ts = R.random_rooted_system(rng, max_states=5)
            val = valuation_from_colour(ts)
            for name in ("p", "q"):
                val.setdefault(name, 0)
            ctx = EvalContext(ts, val)
            tree = unravel_to_depth(ts, 4)
            f = R.random_formula(rng, depth=rng.randint(0, 3))
            mask = ctx.eval(f)
            for v in range(len(tree)):
                verdict = prefix_force(tree, v, f)
                if verdict is not None:
                    assert verdict == bool(mask >> tree.state[v] & 1), (f, v)

    def test_bisimulation_smoke_on_omega_expansion(self):
        # definite verdicts at omega-expansion nodes match eval at the z-image
        rng = rng_for("omega-bisim")
        for _ in range(40):
            ts = R.random_rooted_system(rng, max_states=5)
            val = valuation_from_colour(ts)
            for name in ("p", "q"):
                val.setdefault(name, 0)
            ctx = EvalContext(ts, val)
            tree = omega_expand_to_depth(ts, 3, width=2)
            f = R.random_formula(rng, depth=rng.randint(0, 3))  # plain: no I
            mask = ctx.eval(f)
            for v in range(len(tree)):
                verdict = prefix_force(tree, v, f)
                if verdict is not None:
                    assert verdict == bool(mask >> tree.state[v] & 1)
