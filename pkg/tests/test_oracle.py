import random

import pytest

from permcc.instances import random_small_instance
from permcc.oracle import UniverseTooLarge, build_universe, oracle_decide, oracle_universe
from permcc.permgroup import from_cycles
from permcc.rewriter import decide_word
from permcc.terms import Equation, Signature

from conftest import closure_of


@pytest.fixture
def sig():
    s = Signature()
    for n in "ab":
        s.declare(n, 0)
    s.declare("z", 0)
    s.declare("f", 1)
    s.declare("g", 2)
    return s


def test_universe_examples(sig):
    a, b = sig.app("a"), sig.app("b")
    u = build_universe([Equation(a, b)], [a, b], sig)
    assert set(u.terms) == {a, b}
    sig.add_perm("g", from_cycles(2, [[1, 2]]))
    u = build_universe([], [sig.app("g", a, b)], sig)
    assert set(u.terms) == {a, b, sig.app("g", a, b), sig.app("g", b, a)}
    sig.set_theory("g", "N", "z")
    u = build_universe([], [a], sig)
    assert sig.app("z") in u.terms


def test_oracle_examples(sig):
    a, b = sig.app("a"), sig.app("b")
    assert oracle_decide(a, a, [], sig)
    assert oracle_decide(sig.app("f", a), sig.app("f", b), [Equation(a, b)], sig)
    assert not oracle_decide(sig.app("f", a), sig.app("f", b), [], sig)


def test_oracle_b_rules(sig):
    a, b, z = sig.app("a"), sig.app("b"), sig.app("z")
    g = lambda x, y: sig.app("g", x, y)
    sig.set_theory("g", "IU", "z")
    P = [Equation(a, b)]
    assert oracle_decide(g(a, b), a, P, sig)
    assert oracle_decide(g(z, b), a, P, sig)
    assert not oracle_decide(g(a, z), z, [], sig)


def test_cap(sig):
    with pytest.raises(UniverseTooLarge):
        oracle_universe([Equation(sig.app("f", sig.app("f", sig.app("a"))), sig.app("b"))], [], sig, cap=2)


def test_board_cross_check(board):
    # shrunk: only the first four axioms, still arity 8
    from permcc.cli import ProblemFile

    prob = ProblemFile(board.sig, board.axioms[:4], board.queries)
    cs = closure_of(prob_instance(prob))
    u = oracle_universe(prob.axioms, [t for q in prob.queries for t in (q.lhs, q.rhs)], prob.sig)
    for i, s in enumerate(u.terms):
        for t in u.terms[i + 1:]:
            assert u.same(s, t) == decide_word(s, t, cs)


def prob_instance(prob):
    from permcc.instances import Instance

    return Instance(prob.sig, prob.axioms, prob.queries)


@pytest.mark.parametrize("seed", range(30))
def test_oracle_properties_and_agreement(seed):
    rng = random.Random(seed)
    inst = random_small_instance(rng, [None, "I", "U", "IU"][seed % 4])
    u = oracle_universe(inst.equations, [], inst.sig)
    cs = closure_of(inst)
    terms = u.terms
    for s in terms[:15]:
        for t in terms[:15]:
            assert u.same(s, t) == u.same(t, s)
            assert u.same(s, t) == decide_word(s, t, cs)
    merges = sum(1 for i in range(len(terms)) if u.find(i) != i)
    assert merges <= len(terms)
