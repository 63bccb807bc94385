"""Acceptance criteria, one test per criterion.

Run with ``pytest -v tests/test_acceptance.py``; each criterion yields one
PASSED or FAILED line.  Thresholds are the published ones and are not tuned.
"""

import itertools
import random
import time

from permcc.cli import ProblemFile, run_bench, loglog_slope, solve
from permcc.engine import CRule, DRule, EngineState, replay_states, run_fair_mu
from permcc.etheory import decompose, ground_eq_mod_e
from permcc.instances import random_e_variant, random_permutation, random_small_instance, random_term
from permcc.oracle import oracle_universe
from permcc.permgroup import act, contains, from_cycles, generate
from permcc.rewriter import ClosureSystem, decide_word, normalize
from permcc.terms import Equation, KConst, Signature, subterms

from conftest import isomorphic

K = KConst
ALL_THEORIES = (None, "I", "U", "IU", "N", "NU")


def test_criterion_1_board_golden(board):
    t0 = time.perf_counter()
    sol = solve(board)
    answers = sol.answers(board.queries)
    elapsed = time.perf_counter() - t0
    n_d, n_c = len(sol.state.d_rules), len(sol.state.c_rules)
    report = f"D={n_d} C={n_c} answers={answers} time={elapsed:.3f}s"
    assert answers == [True, True, False], report
    assert elapsed < 1.0, report
    assert (n_d, n_c) == (14, 14), report


def test_criterion_2_example2_flattening(two_comm):
    s = two_comm.sig
    st = EngineState(two_comm.axioms, s, decompose(s)).flatten()
    d0 = [
        DRule(s.app("a"), K(0)),
        DRule(s.app("b"), K(1)),
        DRule(s.app("g", K(1), K(0), K(0)), K(2)),
        DRule(s.app("f", K(1), K(2)), K(3)),
        DRule(s.app("h", K(0)), K(4)),
    ]
    assert isomorphic(st.d_rules, d0, st.K, [K(i) for i in range(5)])
    assert len(st.equations) == 1
    st.orient(0)
    c0 = [CRule(K(3), K(4))]
    assert isomorphic(st.d_rules + st.c_rules, d0 + c0, st.K, [K(i) for i in range(5)])


def test_criterion_3_membership_is_e_equality():
    rng = random.Random(3)
    agree = 0
    for _ in range(1000):
        n = rng.randint(1, 6)
        sig = Signature()
        names = [f"x{i}" for i in range(n)]
        for nm in names:
            sig.declare(nm, 0)
        sig.declare("f", n)
        gens = [random_permutation(rng, n) for _ in range(rng.randint(0, 3))]
        for p in gens:
            sig.add_perm("f", p)
        G = generate(n, gens)
        pi = random_permutation(rng, n) if rng.random() < 0.5 else rng.choice(sorted(G.elements, key=lambda p: p.images))
        xs = [sig.app(nm) for nm in names]
        eq = ground_eq_mod_e(sig.app("f", *xs), sig.app("f", *act(pi, xs)), decompose(sig))
        agree += eq == contains(G, pi)
    assert agree == 1000


def test_criterion_4_group_orders(board):
    import math

    for n in range(2, 8):
        cyc = from_cycles(n, [list(range(1, n + 1))])
        assert len(generate(n, [from_cycles(n, [[1, 2]]), cyc]).elements) == math.factorial(n)
    assert len(decompose(board.sig).groups["f"].elements) == 96


def _oracle_instances(n, seed):
    rng = random.Random(seed)
    return [random_small_instance(rng, ALL_THEORIES[i % len(ALL_THEORIES)]) for i in range(n)]


def test_criterion_5_oracle_equivalence():
    insts = _oracle_instances(500, 5)
    t0 = time.perf_counter()
    bad = pairs = 0
    for inst in insts:
        assert sum(len(list(subterms(e.lhs))) + len(list(subterms(e.rhs))) for e in inst.equations) <= 30
        assert all(s.arity <= 4 for s in inst.sig.symbols.values())
        cs = solve(ProblemFile(inst.sig, inst.equations, [])).closure
        u = oracle_universe(inst.equations, [], inst.sig)
        for s, t in itertools.combinations(u.terms, 2):
            pairs += 1
            bad += u.same(s, t) != decide_word(s, t, cs)
    elapsed = time.perf_counter() - t0
    assert bad == 0, f"{bad}/{pairs} disagreements"
    assert elapsed < 60.0, f"{elapsed:.1f}s"


def test_criterion_6_convergence_modulo_e():
    rng = random.Random(6)
    for i in range(200):
        inst = random_small_instance(rng, ALL_THEORIES[i % len(ALL_THEORIES)])
        th = decompose(inst.sig)
        cs = solve(ProblemFile(inst.sig, inst.equations, [])).closure
        groups = th.groups
        for _ in range(20):
            t = random_term(rng, inst.sig, 3)
            nf = normalize(t, cs)
            for _ in range(20):
                v = random_e_variant(rng, t, inst.sig, groups)
                assert ground_eq_mod_e(normalize(v, cs), nf, th), (t, v)


def _as_equations(facts):
    return [f if isinstance(f, Equation) else Equation(f.lhs, f.rhs) for f in facts]


def test_criterion_7_steps_preserve_provability():
    rng = random.Random(7)
    checked = 0
    for i in range(100):
        inst = random_small_instance(rng, (None, "I", "U", "IU")[i % 4], max_total=16)
        st = run_fair_mu(inst.equations, inst.sig, decompose(inst.sig))
        states = list(replay_states(inst.equations, st.trace))
        for (K0, P0, R0), (_, P1, R1) in zip(states, states[1:]):
            pool = sorted(
                {u for f in _as_equations(list(P0) + list(R0)) for side in (f.lhs, f.rhs) for u in subterms(side)},
                key=str,
            )
            pool += [random_term(rng, inst.sig, 2, sorted(K0)) for _ in range(4)]
            pairs = [(rng.choice(pool), rng.choice(pool)) for _ in range(50)]
            queries = [x for p in pairs for x in p]
            before = oracle_universe(_as_equations(P0.elements()) + _as_equations(R0.elements()), queries, inst.sig)
            after = oracle_universe(_as_equations(P1.elements()) + _as_equations(R1.elements()), queries, inst.sig)
            for s, t in pairs:
                assert before.same(s, t) == after.same(s, t), (s, t)
                checked += 1
    assert checked > 0


def test_criterion_8_complexity_scaling():
    rows = run_bench([50, 100, 200, 400, 800, 1600], seed=0, repeats=3)
    ns = [r[0] for r in rows]
    trace_slope = loglog_slope(ns, [r[1] for r in rows])
    time_slope = loglog_slope(ns, [r[2] for r in rows])
    assert trace_slope <= 2.3, trace_slope
    assert time_slope <= 3.3, time_slope


def test_criterion_9_witness_property(board, two_comm):
    insts = [(board.sig, board.axioms), (two_comm.sig, two_comm.axioms)]
    insts += [(inst.sig, inst.equations) for inst in _oracle_instances(500, 9)]
    for sig, eqs in insts:
        st = run_fair_mu(eqs, sig, decompose(sig))
        cs = ClosureSystem.from_state(st)
        for c in st.K:
            assert normalize(st.witness(c), cs) == st.c_normal(c), c
