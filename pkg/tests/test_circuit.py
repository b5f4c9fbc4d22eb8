import random

import pytest
from hypothesis import given, settings, strategies as st

from sketchrepair.decider.suite import normalize_output
from sketchrepair.localize.circuit import FALSE, TRUE, Circuit
from sketchrepair.localize.output import OutputAutomaton
from sketchrepair.maxsat import Solver

W = 8


def signed(v, w=W):
    v &= (1 << w) - 1
    return v - (1 << w) if v >> (w - 1) else v


def c_div(a, b):
    q = abs(a) // abs(b)
    return q if (a < 0) == (b < 0) else -q


def c_mod(a, b):
    return a - b * c_div(a, b)


OPS = {
    "add": (lambda c, a, b: c.add(a, b), lambda x, y: x + y),
    "sub": (lambda c, a, b: c.sub(a, b), lambda x, y: x - y),
    "mul": (lambda c, a, b: c.mul(a, b), lambda x, y: x * y),
    "div": (lambda c, a, b: c.sdivmod(a, b)[0], c_div),
    "mod": (lambda c, a, b: c.sdivmod(a, b)[1], c_mod),
    "neg": (lambda c, a, b: c.neg(a), lambda x, y: -x),
    "slt": (lambda c, a, b: c.from_bool(c.slt(a, b), W), lambda x, y: int(x < y)),
    "ult": (lambda c, a, b: c.from_bool(c.ult(a, b), W),
            lambda x, y: int((x & 0xFF) < (y & 0xFF))),
    "eq": (lambda c, a, b: c.from_bool(c.eq(a, b), W), lambda x, y: int(x == y)),
}


def evaluate(build, x, y, symbolic):
    c = Circuit()
    if not symbolic:
        out = build(c, Circuit.const(x, W), Circuit.const(y, W))
        value = Circuit.value_of(out)
        assert value is not None, "constant inputs must fold"
        return value
    a, b = c.fresh(W), c.fresh(W)
    out = build(c, a, b)
    s = Solver()
    s.ensure_vars(c.f.num_vars)
    for cl in c.f.hard:
        s.add_clause(cl)
    pins = [lit if (v >> i) & 1 else -lit for vec, v in ((a, x), (b, y)) for i, lit in enumerate(vec)]
    assert s.solve(pins)
    bits = [b == TRUE or (b not in (TRUE, FALSE) and s.model[abs(b)] == (b > 0)) for b in out]
    return signed(sum(1 << i for i, bit in enumerate(bits) if bit))


values = st.integers(-(1 << (W - 1)), (1 << (W - 1)) - 1)


@pytest.mark.parametrize("op", sorted(OPS))
@settings(max_examples=40, deadline=None)
@given(x=values, y=values)
def test_folded_constants_match_c(op, x, y):
    build, ref = OPS[op]
    if op in ("div", "mod") and y == 0:
        return
    assert evaluate(build, x, y, symbolic=False) == signed(ref(x, y))


@pytest.mark.parametrize("op", sorted(OPS))
def test_encoded_gates_match_c(op):
    build, ref = OPS[op]
    rng = random.Random(op)
    edge = [0, 1, -1, 127, -128, 7, -7]
    pairs = [(x, y) for x in edge for y in edge] + [(rng.randint(-128, 127), rng.randint(-128, 127))
                                                    for _ in range(30)]
    for x, y in pairs:
        if op in ("div", "mod") and y == 0:
            continue
        assert evaluate(build, x, y, symbolic=True) == signed(ref(x, y)), (x, y)


def test_constant_folding_emits_no_gates():
    c = Circuit()
    before = c.f.num_vars
    c.mul(Circuit.const(13, 16), Circuit.const(-5, 16))
    assert c.f.num_vars == before


def test_structural_hashing_reuses_gates():
    c = Circuit()
    a, b = c.var(), c.var()
    assert c.and2(a, b) == c.and2(b, a)
    assert c.and2(a, -a) == FALSE
    assert c.or2(a, TRUE) == TRUE


def test_sign_extension():
    assert Circuit.value_of(Circuit().sext(Circuit.const(-3, 4), 8)) == -3
    assert Circuit.value_of(Circuit().sext(Circuit.const(5, 4), 8)) == 5


def test_value_of_symbolic_is_none():
    c = Circuit()
    assert Circuit.value_of(c.fresh(3)) is None


# -- output automaton -------------------------------------------------------------------

texts = st.text(alphabet="ab \t\n", max_size=8)


@settings(max_examples=500, deadline=None)
@given(expected=texts, actual=texts)
def test_automaton_agrees_with_normalization(expected, actual):
    auto = OutputAutomaton(expected)
    assert auto.matches(actual) == (normalize_output(actual) == normalize_output(expected))


@pytest.mark.parametrize("actual,ok", [("3\n", True), ("3", True), ("3 \n\n", True),
                                       ("33\n", False), ("\n3", False), ("", False)])
def test_automaton_examples(actual, ok):
    assert OutputAutomaton("3\n").matches(actual) is ok
