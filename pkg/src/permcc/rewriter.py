"""Normal forms with respect to a finished closure R = D u C together with B, modulo E."""

from __future__ import annotations

from dataclasses import dataclass, field

from permcc.engine import EngineError, EngineState
from permcc.etheory import PermTheory, flat_key, ground_eq_mod_e
from permcc.terms import App, BTheorySpec, KConst, Signature, Term, size


class NotAClosure(EngineError):
    pass


@dataclass(frozen=True)
class ClosureSystem:
    K: tuple[KConst, ...]
    d_index: dict[tuple, KConst]
    c_map: dict[KConst, KConst]
    b: BTheorySpec | None
    th: PermTheory
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_state(cls, st: EngineState) -> "ClosureSystem":
        if st.P:
            raise NotAClosure("P is not empty")
        c_map = {c: st.c_normal(c) for c in st.C}
        d_index: dict[tuple, KConst] = {}
        for rule in st.D.values():
            key = flat_key(rule.lhs.head.name, rule.lhs.args, st.th)
            rhs = c_map.get(rule.rhs, rule.rhs)
            if d_index.get(key, rhs) != rhs:
                raise NotAClosure(f"two D-rules share the key of {rule.lhs}")
            d_index[key] = rhs
        return cls(tuple(st.K), d_index, c_map, st.b, st.th)

    @property
    def zero_term(self) -> App | None:
        if self.b is None or self.b.zero is None:
            return None
        return App(self.b.zero, ())


def normalize(t: Term, cs: ClosureSystem) -> Term:
    hit = cs._cache.get(t)
    if hit is None:
        hit = normalize_counted(t, cs)[0]
        cs._cache[t] = hit
    return hit


def normalize_counted(t: Term, cs: ClosureSystem) -> tuple[Term, int]:
    """Innermost normal form and the number of rewrite steps taken."""
    steps = [0]
    return _nf(t, cs, steps), steps[0]


def _nf(t: Term, cs: ClosureSystem, steps: list[int]) -> Term:
    if isinstance(t, KConst):
        d = cs.c_map.get(t)
        if d is None:
            return t
        steps[0] += 1
        return d
    args = tuple(_nf(a, cs, steps) for a in t.args)
    if all(isinstance(a, KConst) for a in args):
        rhs = cs.d_index.get(flat_key(t.head.name, args, cs.th))
        if rhs is not None:
            steps[0] += 1
            return _nf(rhs, cs, steps)
    b = cs.b
    if b is not None and t.head == b.symbol:
        u, v = args
        if (b.idempotent or b.nilpotent) and ground_eq_mod_e(u, v, cs.th):
            steps[0] += 1
            return u if b.idempotent else _nf(cs.zero_term, cs, steps)
        if b.unit:
            z = _nf(cs.zero_term, cs, [0])
            if ground_eq_mod_e(v, z, cs.th):
                steps[0] += 1
                return u
            if ground_eq_mod_e(u, z, cs.th):
                steps[0] += 1
                return v
    return App(t.head, args)


def decide_word(s: Term, t: Term, cs: ClosureSystem) -> bool:
    return ground_eq_mod_e(normalize(s, cs), normalize(t, cs), cs.th)


def step_bound(t: Term, cs: ClosureSystem) -> int:
    """Upper bound on normalisation steps for t."""
    n_const = sum(1 for _ in _leaves(t))
    return size(t) + max(len(cs.K), 1) * max(n_const, 1)


def _leaves(t: Term):
    if not t.args:
        yield t
    for a in t.args:
        yield from _leaves(a)


def closure_for(equations, sig: Signature, th: PermTheory, caps=None) -> ClosureSystem:
    from permcc.engine import run_fair_mu

    return ClosureSystem.from_state(run_fair_mu(equations, sig, th, caps))
