from pathlib import Path

import pytest

from permcc.cli import parse_problem

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def load(name: str):
    return parse_problem((PROBLEMS / name).read_text(encoding="utf-8"))


@pytest.fixture
def board():
    return load("electric_board.prob")


@pytest.fixture
def two_comm():
    return load("two_commutative.prob")


def rename_rules(rules, mapping):
    from permcc.engine import DRule
    from permcc.terms import App

    out = set()
    for r in rules:
        if isinstance(r, DRule):
            out.add(DRule(App(r.lhs.head, [mapping[a] for a in r.lhs.args]), mapping[r.rhs]))
        else:
            out.add((mapping[r.lhs], mapping[r.rhs]))
    return out


def isomorphic(rules_a, rules_b, consts_a, consts_b):
    """Is there a bijection of K-constants carrying rules_a onto rules_b?"""
    import itertools

    consts_a, consts_b = sorted(consts_a, key=lambda c: c.index), sorted(consts_b, key=lambda c: c.index)
    if len(consts_a) != len(consts_b):
        return False
    norm_b = rename_rules(rules_b, {c: c for c in consts_b})
    for perm in itertools.permutations(consts_b):
        m = dict(zip(consts_a, perm))
        if rename_rules(rules_a, m) == norm_b:
            return True
    return False


def closure_of(inst):
    from permcc.cli import ProblemFile, solve

    return solve(ProblemFile(inst.sig, inst.equations, inst.queries)).closure
