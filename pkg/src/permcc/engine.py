"""Completion of ground equations into a congruence closure modulo E and B.

The state is the triple (K, P, R) with R split into D-rules f(c1..cn) -> c and
C-rules c -> d over fresh constants.  Every transition is one of the eight
inference rules and is appended to the trace as a `TraceEvent`.

Schedule used by `run_fair_mu`:

1. Flatten: every input equation, in order, is walked leftmost-innermost;
   each flat subterm over K is SIMPLIFY'd by an existing rule or EXTEND'ed
   with a fresh constant, until all of P lies over K.
2. Saturate with priority SIMPLIFY > EXTEND > DELETE > COLLAPSE > COMPOSE >
   REWRITE > DEDUCE > ORIENT.  P-equations are driven to normal form one at
   a time (lowest id first); the remaining rules pick their lowest-numbered
   candidate, so the whole run is deterministic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from permcc.etheory import PermTheory, flat_key, ground_eq_mod_e
from permcc.terms import (
    App,
    BTheorySpec,
    Equation,
    KConst,
    Position,
    Signature,
    Term,
    replace_at,
    size,
    subterm_at,
)

BTheory = BTheorySpec

RULE_NAMES = ("EXTEND", "SIMPLIFY", "REWRITE", "ORIENT", "DEDUCE", "DELETE", "COMPOSE", "COLLAPSE")


class EngineError(RuntimeError):
    pass


class NotEnabled(EngineError):
    """Raised when an inference is requested whose side condition fails."""


class NotFlatOverK(NotEnabled):
    pass


class NoOccurrence(NotEnabled):
    pass


class NoMatch(NotEnabled):
    pass


class NotOrientable(NotEnabled):
    pass


class NotEEqual(NotEnabled):
    pass


class ResourceCap(EngineError):
    pass


@dataclass(frozen=True)
class DRule:
    lhs: App
    rhs: KConst

    def __post_init__(self):
        if not isinstance(self.lhs, App) or not all(isinstance(a, KConst) for a in self.lhs.args):
            raise NotFlatOverK(f"D-rule left side {self.lhs} must be f(c1..cn) over K")

    def __str__(self):
        return f"{self.lhs} -> {self.rhs}"


@dataclass(frozen=True)
class CRule:
    lhs: KConst
    rhs: KConst

    def __post_init__(self):
        if not self.lhs.index < self.rhs.index:
            raise NotOrientable(f"C-rule {self.lhs} -> {self.rhs} violates c_i > c_j iff i < j")

    def __str__(self):
        return f"{self.lhs} -> {self.rhs}"


Rule = Union[DRule, CRule]
Fact = Union[Equation, DRule, CRule]


def k_greater(c: KConst, d: KConst) -> bool:
    """c > d in the constant ordering."""
    return c.index < d.index


@dataclass(frozen=True)
class TraceEvent:
    rule: str
    consumed: tuple[Fact, ...]
    produced: tuple[Fact, ...]
    side: tuple[Fact, ...] = ()

    def __str__(self):
        fmt = lambda fs: ", ".join(str(f) for f in fs) or "-"
        s = f"{self.rule:<9} -[{fmt(self.consumed)}] +[{fmt(self.produced)}]"
        if self.side:
            s += f" using [{fmt(self.side)}]"
        return s


def _is_k_eq(eq: Equation) -> bool:
    return isinstance(eq.lhs, KConst) and isinstance(eq.rhs, KConst)


class EngineState:
    """Mutable (K, P, R) with the indexes needed to find enabled inferences.

    All inference methods mutate the state in place, log a TraceEvent and
    return the state.  They raise a `NotEnabled` subclass when their side
    condition fails, leaving the state unchanged.
    """

    def __init__(
        self,
        equations: Iterable[Equation] = (),
        sig: Signature | None = None,
        th: PermTheory | None = None,
    ):
        self.sig = sig if sig is not None else Signature()
        self.th = th if th is not None else PermTheory()
        self.b: BTheory | None = self.sig.b_theory
        self.K: list[KConst] = []
        self.provenance: dict[KConst, App] = {}
        self.next_index = 0
        self.P: dict[int, Equation] = {}
        self.D: dict[int, DRule] = {}
        self.C: dict[KConst, KConst] = {}
        self.trace: list[TraceEvent] = []
        self._next_eq = 0
        self._next_rule = 0
        self._p_occ: dict[KConst, set[int]] = {}
        self._d_by_lhs: dict[App, set[int]] = {}
        self._d_by_key: dict[tuple, set[int]] = {}
        self._d_by_rhs: dict[KConst, set[int]] = {}
        self._d_occ: dict[KConst, set[int]] = {}
        self._c_by_rhs: dict[KConst, set[KConst]] = {}
        # agenda: candidates that may be enabled; always re-checked before use
        self._p_dirty: set[int] = set()
        self._collapse: set[KConst] = set()
        self._compose: set[KConst] = set()
        self._rewrite: set[int] = set()
        self._deduce: set[tuple] = set()
        for eq in equations:
            self._add_eq(eq)

    # ------------------------------------------------------------------ views

    @property
    def rules(self) -> list[Rule]:
        return list(self.D.values()) + [CRule(c, d) for c, d in self.C.items()]

    @property
    def d_rules(self) -> list[DRule]:
        return list(self.D.values())

    @property
    def c_rules(self) -> list[CRule]:
        return [CRule(c, d) for c, d in self.C.items()]

    @property
    def equations(self) -> list[Equation]:
        return list(self.P.values())

    @property
    def zero_term(self) -> App | None:
        if self.b is None or self.b.zero is None:
            return None
        return App(self.b.zero, ())

    @property
    def zero_repr(self) -> KConst | None:
        z = self.zero_term
        if z is None:
            return None
        ids = self._d_by_lhs.get(z)
        if not ids:
            return None
        return self.D[min(ids)].rhs

    def snapshot(self) -> tuple[frozenset, Counter, Counter]:
        return (
            frozenset(self.K),
            Counter(self.P.values()),
            Counter(self.rules),
        )

    def c_normal(self, c: KConst) -> KConst:
        seen = 0
        while c in self.C:
            c = self.C[c]
            seen += 1
            if seen > len(self.C):
                raise EngineError("cyclic C-rules")
        return c

    def witness(self, c: KConst) -> Term:
        """Ground term over F that was abstracted into c by EXTEND."""
        t = self.provenance[c]
        return App(t.head, [self.witness(a) for a in t.args])

    # ------------------------------------------------------------- bookkeeping

    def _log(self, rule, consumed=(), produced=(), side=()):
        self.trace.append(TraceEvent(rule, tuple(consumed), tuple(produced), tuple(side)))

    def _add_eq(self, eq: Equation) -> int:
        i = self._next_eq
        self._next_eq += 1
        self.P[i] = eq
        for t in (eq.lhs, eq.rhs):
            for c in _kconsts(t):
                self._p_occ.setdefault(c, set()).add(i)
        self._p_dirty.add(i)
        return i

    def _remove_eq(self, i: int) -> Equation:
        eq = self.P.pop(i)
        for t in (eq.lhs, eq.rhs):
            for c in _kconsts(t):
                s = self._p_occ.get(c)
                if s is not None:
                    s.discard(i)
        self._p_dirty.discard(i)
        return eq

    def _replace_eq(self, i: int, new: Equation) -> None:
        self._remove_eq(i)
        self.P[i] = new
        for t in (new.lhs, new.rhs):
            for c in _kconsts(t):
                self._p_occ.setdefault(c, set()).add(i)
        self._p_dirty.add(i)

    def _key(self, lhs: App) -> tuple:
        return flat_key(lhs.head.name, lhs.args, self.th)

    def _add_d(self, rule: DRule, rid: int | None = None) -> int:
        if rid is None:
            rid = self._next_rule
            self._next_rule += 1
        self.D[rid] = rule
        self._d_by_lhs.setdefault(rule.lhs, set()).add(rid)
        key = self._key(rule.lhs)
        bucket = self._d_by_key.setdefault(key, set())
        bucket.add(rid)
        if len(bucket) > 1:
            self._deduce.add(key)
        self._d_by_rhs.setdefault(rule.rhs, set()).add(rid)
        if rule.rhs in self.C:
            self._compose.add(rule.rhs)
        for a in set(rule.lhs.args):
            self._d_occ.setdefault(a, set()).add(rid)
            if a in self.C:
                self._collapse.add(a)
        if self.b is not None:
            if rule.lhs.head == self.b.symbol:
                self._rewrite.add(rid)
            elif rule.lhs == self.zero_term:
                self._zero_changed(rule.rhs)
        return rid

    def _remove_d(self, rid: int) -> DRule:
        rule = self.D.pop(rid)
        self._d_by_lhs[rule.lhs].discard(rid)
        if not self._d_by_lhs[rule.lhs]:
            del self._d_by_lhs[rule.lhs]
        key = self._key(rule.lhs)
        self._d_by_key[key].discard(rid)
        if not self._d_by_key[key]:
            del self._d_by_key[key]
        self._d_by_rhs[rule.rhs].discard(rid)
        for a in set(rule.lhs.args):
            self._d_occ[a].discard(rid)
        self._rewrite.discard(rid)
        return rule

    def _zero_changed(self, z: KConst) -> None:
        if self.b is not None and self.b.unit:
            for rid in self._d_occ.get(z, ()):
                if self.D[rid].lhs.head == self.b.symbol:
                    self._rewrite.add(rid)

    def _add_c(self, c: KConst, d: KConst) -> None:
        CRule(c, d)  # validates orientation
        self.C[c] = d
        self._c_by_rhs.setdefault(d, set()).add(c)
        if self._d_occ.get(c):
            self._collapse.add(c)
        if self._d_by_rhs.get(c) or self._c_by_rhs.get(c):
            self._compose.add(c)
        for i in self._p_occ.get(c, ()):
            self._p_dirty.add(i)

    def _fresh(self, t: App) -> KConst:
        c = KConst(self.next_index)
        self.next_index += 1
        self.K.append(c)
        self.provenance[c] = t
        return c

    def _find_eq(self, eq: Equation | int) -> int:
        if isinstance(eq, int):
            if eq not in self.P:
                raise NoOccurrence(f"no equation #{eq} in P")
            return eq
        for i, e in self.P.items():
            if e == eq:
                return i
        raise NoOccurrence(f"{eq} not in P")

    def _find_d(self, rule: DRule, exclude: int | None = None) -> int:
        ids = self._d_by_lhs.get(rule.lhs, ())
        for rid in sorted(ids):
            if rid != exclude and self.D[rid] == rule:
                return rid
        raise NotEnabled(f"{rule} not in R")

    # ---------------------------------------------------------- inference rules

    def extend(self, eq: Equation | int, side: int, pos: Position) -> "EngineState":
        """Abstract the flat subterm at `pos` of side 0 (lhs) / 1 (rhs) by a fresh constant."""
        i = self._find_eq(eq)
        old = self.P[i]
        root = old.lhs if side == 0 else old.rhs
        t = subterm_at(root, pos)
        if not isinstance(t, App) or not all(isinstance(a, KConst) for a in t.args):
            raise NotFlatOverK(f"{t} is not f(c1..cn) over K")
        c = self._fresh(t)
        rule = DRule(t, c)
        new = _replace_in_eq(old, side, pos, c)
        self._add_d(rule)
        self._replace_eq(i, new)
        self._log("EXTEND", [old], [rule, new])
        return self

    def simplify(self, eq: Equation | int, side: int, pos: Position, rule: Rule) -> "EngineState":
        i = self._find_eq(eq)
        old = self.P[i]
        root = old.lhs if side == 0 else old.rhs
        t = subterm_at(root, pos)
        if t != rule.lhs:
            raise NoOccurrence(f"{rule.lhs} does not occur at {list(pos)} of {old}")
        if isinstance(rule, DRule):
            self._find_d(rule)
        elif self.C.get(rule.lhs) != rule.rhs:
            raise NotEnabled(f"{rule} not in R")
        new = _replace_in_eq(old, side, pos, rule.rhs)
        self._replace_eq(i, new)
        self._log("SIMPLIFY", [old], [new], [rule])
        return self

    def delete(self, eq: Equation | int) -> "EngineState":
        i = self._find_eq(eq)
        old = self.P[i]
        if not ground_eq_mod_e(old.lhs, old.rhs, self.th):
            raise NotEEqual(f"{old} is not an E-instance")
        self._remove_eq(i)
        self._log("DELETE", [old])
        return self

    def orient(self, eq: Equation | int) -> "EngineState":
        i = self._find_eq(eq)
        old = self.P[i]
        s, t = old.lhs, old.rhs
        if isinstance(s, KConst) and isinstance(t, KConst):
            if s == t:
                raise NotOrientable(f"{old} is trivial")
            if not k_greater(s, t):
                s, t = t, s
            if s in self.C:
                raise NotOrientable(f"{s} already has a C-rule")
            rule: Rule = CRule(s, t)
            self._remove_eq(i)
            self._add_c(s, t)
        else:
            if isinstance(s, KConst):
                s, t = t, s
            if not (isinstance(t, KConst) and isinstance(s, App) and all(isinstance(a, KConst) for a in s.args)):
                raise NotOrientable(f"{old} is neither a D-rule nor a C-rule")
            rule = DRule(s, t)
            self._remove_eq(i)
            self._add_d(rule)
        self._log("ORIENT", [old], [rule])
        return self

    def deduce(self, s_rule: DRule, t_rule: DRule) -> "EngineState":
        """Drop s -> c in favour of t -> d when s =_E t, adding c = d to P."""
        tid = self._find_d(t_rule)
        sid = self._find_d(s_rule, exclude=tid)
        if sid == tid:
            raise NotEnabled("DEDUCE needs two distinct rules")
        if self._key(s_rule.lhs) != self._key(t_rule.lhs):
            raise NotEEqual(f"{s_rule.lhs} and {t_rule.lhs} are not E-equal")
        self._remove_d(sid)
        eq = Equation(s_rule.rhs, t_rule.rhs)
        self._add_eq(eq)
        self._log("DEDUCE", [s_rule], [eq], [t_rule])
        return self

    def compose(self, rule: Rule) -> "EngineState":
        """t -> c with c -> d becomes t -> d."""
        c = rule.rhs
        d = self.C.get(c)
        if d is None:
            raise NotEnabled(f"no C-rule for {c}")
        side = CRule(c, d)
        if isinstance(rule, DRule):
            rid = self._find_d(rule)
            self._remove_d(rid)
            new: Rule = DRule(rule.lhs, d)
            self._add_d(new, rid)
        else:
            if self.C.get(rule.lhs) != c:
                raise NotEnabled(f"{rule} not in R")
            self._c_by_rhs[c].discard(rule.lhs)
            self.C[rule.lhs] = d
            self._c_by_rhs.setdefault(d, set()).add(rule.lhs)
            if self._c_by_rhs.get(d) and d in self.C:
                self._compose.add(d)
            new = CRule(rule.lhs, d)
        self._log("COMPOSE", [rule], [new], [side])
        return self

    def collapse(self, rule: DRule, c: KConst) -> "EngineState":
        """Rewrite every argument occurrence of c in the rule's left side by C(c)."""
        rid = self._find_d(rule)
        d = self.C.get(c)
        if d is None:
            raise NotEnabled(f"no C-rule for {c}")
        if c not in rule.lhs.args:
            raise NoOccurrence(f"{c} is not an argument of {rule.lhs}")
        self._remove_d(rid)
        lhs = App(rule.lhs.head, [d if a == c else a for a in rule.lhs.args])
        new = DRule(lhs, rule.rhs)
        self._add_d(new, rid)
        self._log("COLLAPSE", [rule], [new], [CRule(c, d)])
        return self

    def b_match(self, rule: DRule) -> Term | None:
        """Instantiated right side r.sigma if the rule's left side is a B-redex."""
        b = self.b
        lhs = rule.lhs
        if b is None or lhs.head != b.symbol:
            return None
        x, y = lhs.args
        if x == y:
            if b.idempotent:
                return x
            if b.nilpotent:
                return self.zero_term
        if b.unit:
            z = self.zero_repr
            if z is not None:
                if y == z:
                    return x
                if x == z:
                    return y
        return None

    def rewrite_b(self, rule: DRule) -> "EngineState":
        rid = self._find_d(rule)
        r = self.b_match(rule)
        if r is None:
            raise NoMatch(f"{rule.lhs} is not an instance of a B-rule")
        self._remove_d(rid)
        eq = Equation(r, rule.rhs)
        self._add_eq(eq)
        self._log("REWRITE", [rule], [eq])
        return self

    # ---------------------------------------------------------------- strategy

    def _p_redex(self, eq: Equation) -> tuple[int, Position, Rule | None] | None:
        """Leftmost-innermost SIMPLIFY (rule given) or EXTEND (rule None) site."""
        for side, root in ((0, eq.lhs), (1, eq.rhs)):
            for pos, t in _postorder(root):
                if isinstance(t, KConst):
                    d = self.C.get(t)
                    if d is not None:
                        return side, pos, CRule(t, d)
                elif all(isinstance(a, KConst) for a in t.args):
                    ids = self._d_by_lhs.get(t)
                    if ids:
                        return side, pos, self.D[min(ids)]
                    return side, pos, None
        return None

    def _step_p(self, allow_delete: bool = True) -> bool:
        while self._p_dirty:
            i = min(self._p_dirty)
            eq = self.P[i]
            site = self._p_redex(eq)
            if site is not None:
                side, pos, rule = site
                if rule is None:
                    self.extend(i, side, pos)
                else:
                    self.simplify(i, side, pos, rule)
                return True
            if allow_delete and ground_eq_mod_e(eq.lhs, eq.rhs, self.th):
                self.delete(i)
                return True
            self._p_dirty.discard(i)
        return False

    def _step_collapse(self) -> bool:
        while self._collapse:
            c = min(self._collapse)
            ids = self._d_occ.get(c)
            if c in self.C and ids:
                self.collapse(self.D[min(ids)], c)
                return True
            self._collapse.discard(c)
        return False

    def _step_compose(self) -> bool:
        while self._compose:
            c = min(self._compose)
            if c in self.C:
                ids = self._d_by_rhs.get(c)
                if ids:
                    self.compose(self.D[min(ids)])
                    return True
                lhss = self._c_by_rhs.get(c)
                if lhss:
                    x = min(lhss)
                    self.compose(CRule(x, c))
                    return True
            self._compose.discard(c)
        return False

    def _step_rewrite(self) -> bool:
        while self._rewrite:
            rid = min(self._rewrite)
            rule = self.D.get(rid)
            self._rewrite.discard(rid)
            if rule is not None and self.b_match(rule) is not None:
                self.rewrite_b(rule)
                return True
        return False

    def _step_deduce(self) -> bool:
        while self._deduce:
            key = min(self._deduce)
            ids = sorted(self._d_by_key.get(key, ()))
            if len(ids) >= 2:
                r1, r2 = self.D[ids[0]], self.D[ids[1]]
                # drop the rule whose rhs is larger in the ordering (smaller index)
                if r2.rhs.index < r1.rhs.index:
                    r1, r2 = r2, r1
                elif r1.rhs == r2.rhs:
                    r1, r2 = r2, r1
                self.deduce(r1, r2)
                return True
            self._deduce.discard(key)
        return False

    def _step_orient(self) -> bool:
        if not self.P:
            return False
        self.orient(min(self.P))
        return True

    def flatten(self) -> "EngineState":
        """Eager EXTEND/SIMPLIFY until every equation of P lies over K."""
        while self._step_p(allow_delete=False):
            pass
        self._p_dirty = set(self.P)
        return self

    def saturate(self, max_steps: int | None = None) -> "EngineState":
        steps = 0
        while (
            self._step_p()
            or self._step_collapse()
            or self._step_compose()
            or self._step_rewrite()
            or self._step_deduce()
            or self._step_orient()
        ):
            steps += 1
            if max_steps is not None and len(self.trace) > max_steps:
                raise ResourceCap(f"derivation exceeded {max_steps} steps")
        return self

    def enabled(self) -> list[str]:
        """Names of inference rules with at least one enabled instance (full scan)."""
        out = set()
        for eq in self.P.values():
            site = self._p_redex(eq)
            if site is not None:
                out.add("EXTEND" if site[2] is None else "SIMPLIFY")
            elif ground_eq_mod_e(eq.lhs, eq.rhs, self.th):
                out.add("DELETE")
            else:
                out.add("ORIENT")
        for rule in self.D.values():
            if any(a in self.C for a in rule.lhs.args):
                out.add("COLLAPSE")
            if rule.rhs in self.C:
                out.add("COMPOSE")
            if self.b_match(rule) is not None:
                out.add("REWRITE")
        if any(d in self.C for d in self.C.values()):
            out.add("COMPOSE")
        if any(len(v) > 1 for v in self._d_by_key.values()):
            out.add("DEDUCE")
        return sorted(out)


def _kconsts(t: Term) -> Iterator[KConst]:
    if isinstance(t, KConst):
        yield t
    else:
        for a in t.args:
            yield from _kconsts(a)


def _postorder(t: Term, prefix: Position = ()) -> Iterator[tuple[Position, Term]]:
    for i, a in enumerate(t.args, 1):
        yield from _postorder(a, prefix + (i,))
    yield prefix, t


def _replace_in_eq(eq: Equation, side: int, pos: Position, u: Term) -> Equation:
    if side == 0:
        return Equation(replace_at(eq.lhs, pos, u), eq.rhs)
    return Equation(eq.lhs, replace_at(eq.rhs, pos, u))


def input_size(equations: Iterable[Equation]) -> int:
    return sum(size(e.lhs) + size(e.rhs) for e in equations)


@dataclass
class Caps:
    step_factor: int = 64
    max_steps: int | None = None
    max_constants: int | None = None

    def steps_for(self, n: int) -> int:
        if self.max_steps is not None:
            return self.max_steps
        return self.step_factor * (n + 1) ** 2 + 1000


def run_fair_mu(
    equations: Iterable[Equation],
    sig: Signature | None = None,
    th: PermTheory | None = None,
    caps: Caps | None = None,
) -> EngineState:
    equations = list(equations)
    caps = caps or Caps()
    n = input_size(equations)
    st = EngineState(equations, sig, th)
    st.flatten()
    st.saturate(caps.steps_for(n))
    if caps.max_constants is not None and len(st.K) > caps.max_constants:
        raise ResourceCap(f"{len(st.K)} constants exceed cap {caps.max_constants}")
    if st.P:
        raise EngineError("saturation stopped with a non-empty P")
    return st


# ------------------------------------------------------------------- replay


def apply_event(
    K: set[KConst], P: Counter, R: Counter, ev: TraceEvent
) -> None:
    for f in ev.consumed:
        bag = P if isinstance(f, Equation) else R
        if bag[f] <= 0:
            raise EngineError(f"replay: {f} consumed by {ev.rule} but absent")
        bag[f] -= 1
        if not bag[f]:
            del bag[f]
    for f in ev.produced:
        if isinstance(f, Equation):
            P[f] += 1
        else:
            R[f] += 1
            if ev.rule == "EXTEND":
                K.add(f.rhs)


def replay_states(
    equations: Iterable[Equation], trace: Iterable[TraceEvent]
) -> Iterator[tuple[frozenset, Counter, Counter]]:
    """States before the first event and after every event."""
    K: set[KConst] = set()
    P = Counter(equations)
    R: Counter = Counter()
    yield frozenset(K), Counter(P), Counter(R)
    for ev in trace:
        apply_event(K, P, R, ev)
        yield frozenset(K), Counter(P), Counter(R)


def replay(equations: Iterable[Equation], trace: Iterable[TraceEvent]):
    last = None
    for last in replay_states(equations, trace):
        pass
    return last
