import random

import pytest

from fairctl import randgen as R
from fairctl.evaluator import EvalContext
from fairctl.systems import TransitionSystem


@pytest.fixture
def two_cycle():
    """s0 <-> s1 with p only at s1, q only at s0."""
    return TransitionSystem(2, [(0, 1), (1, 0)], {0: {"q"}, 1: {"p"}})


@pytest.fixture
def self_loop():
    """One state with a self loop, coloured q."""
    return TransitionSystem(1, [(0, 0)], {0: {"q"}})


def eval_on(ts, formula, valuation=None):
    from fairctl.evaluator import valuation_from_colour

    val = valuation_from_colour(ts) if valuation is None else valuation
    for name in formula.variables() - set(val):
        val[name] = 0
    return EvalContext(ts, val).eval(formula)


def random_model_and_valuation(rng, max_states=6, props=("p", "q")):
    ts = R.random_system(rng, max_states=max_states, props=props)
    full = (1 << ts.n) - 1
    val = {p: rng.randint(0, full) for p in props}
    return ts, val


def rng_for(test_name):
    return random.Random(f"fairctl-tests:{test_name}")
