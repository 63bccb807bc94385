"""Brute-force ground truth for s = t modulo P, E and B on small instances.

Works on a finite, subterm-closed universe of terms with a union-find
partition, merging until stable by congruence, by permutation instances and
by B instances.  It deliberately shares no code with `etheory` or the
completion engine: groups are re-enumerated here and E-equality is found by
trying every group element against a signature table, never through
canonical forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from permcc.terms import App, Equation, Signature, Term

DEFAULT_UNIVERSE_CAP = 20_000


class UniverseTooLarge(RuntimeError):
    pass


def _closure(n: int, gens: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """All products of generators, as 0-based image tuples."""
    ident = tuple(range(n))
    gens0 = [tuple(i - 1 for i in g) for g in gens]
    out = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens0:
                q = tuple(p[g[i]] for i in range(n))
                if q not in out:
                    out.add(q)
                    nxt.append(q)
        frontier = nxt
    return sorted(out)


def groups_of(sig: Signature) -> dict[str, list[tuple[int, ...]]]:
    return {
        name: _closure(sig[name].arity, [p.images for p in gens])
        for name, gens in sig.perm_gens.items()
    }


@dataclass
class Universe:
    terms: list[Term]
    index: dict[Term, int]
    parent: list[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.parent:
            self.parent = list(range(len(self.terms)))

    def find(self, i: int) -> int:
        p = self.parent
        while p[i] != i:
            p[i] = p[p[i]]
            i = p[i]
        return i

    def union(self, i: int, j: int) -> bool:
        a, b = self.find(i), self.find(j)
        if a == b:
            return False
        if a < b:
            a, b = b, a
        self.parent[a] = b
        return True

    def same(self, s: Term, t: Term) -> bool:
        return self.find(self.index[s]) == self.find(self.index[t])

    def classes(self) -> list[list[Term]]:
        groups: dict[int, list[Term]] = {}
        for i, t in enumerate(self.terms):
            groups.setdefault(self.find(i), []).append(t)
        return list(groups.values())

    def __len__(self):
        return len(self.terms)


def build_universe(
    P: Iterable[Equation],
    queries: Iterable[Term],
    sig: Signature,
    cap: int = DEFAULT_UNIVERSE_CAP,
    groups: dict[str, list[tuple[int, ...]]] | None = None,
) -> Universe:
    groups = groups_of(sig) if groups is None else groups
    terms: list[Term] = []
    index: dict[Term, int] = {}

    def add(t: Term) -> None:
        if t in index:
            return
        for a in t.args:
            add(a)
        if t in index:
            return
        if len(terms) >= cap:
            raise UniverseTooLarge(f"universe exceeds {cap} terms")
        index[t] = len(terms)
        terms.append(t)

    roots: list[Term] = []
    for eq in P:
        roots += [eq.lhs, eq.rhs]
    roots += list(queries)
    bt = sig.b_theory
    if bt is not None and bt.zero is not None:
        roots.append(App(bt.zero, ()))
    for t in roots:
        add(t)
    # orbit closure at every permutation-headed node
    i = 0
    while i < len(terms):
        t = terms[i]
        i += 1
        if isinstance(t, App) and t.head.name in groups:
            for p in groups[t.head.name]:
                add(App(t.head, [t.args[j] for j in p]))
    return Universe(terms, index)


def saturate(
    u: Universe,
    P: Iterable[Equation],
    sig: Signature,
    groups: dict[str, list[tuple[int, ...]]] | None = None,
) -> Universe:
    groups = groups_of(sig) if groups is None else groups
    for eq in P:
        u.union(u.index[eq.lhs], u.index[eq.rhs])
    bt = sig.b_theory
    zero = None
    if bt is not None and bt.zero is not None:
        zero = u.index[App(bt.zero, ())]
    apps = [
        (i, t.head.name, tuple(u.index[a] for a in t.args))
        for i, t in enumerate(u.terms)
        if isinstance(t, App) and t.args
    ]
    changed = True
    while changed:
        changed = False
        table: dict[tuple, int] = {}
        for i, head, args in apps:
            cls = tuple(u.find(a) for a in args)
            key = (head, cls)
            j = table.get(key)
            if j is None:
                table[key] = i
            elif u.union(i, j):
                changed = True
        for i, head, args in apps:
            perms = groups.get(head)
            if perms:
                cls = tuple(u.find(a) for a in args)
                for p in perms:
                    j = table.get((head, tuple(cls[k] for k in p)))
                    if j is not None and u.union(i, j):
                        changed = True
            if bt is not None and head == bt.symbol.name:
                x, y = args
                fx, fy = u.find(x), u.find(y)
                if fx == fy:
                    if bt.idempotent and u.union(i, x):
                        changed = True
                    if bt.nilpotent and u.union(i, zero):
                        changed = True
                if bt.unit:
                    fz = u.find(zero)
                    if fy == fz and u.union(i, x):
                        changed = True
                    if fx == fz and u.union(i, y):
                        changed = True
    return u


def oracle_universe(
    P: Iterable[Equation],
    queries: Iterable[Term],
    sig: Signature,
    cap: int = DEFAULT_UNIVERSE_CAP,
) -> Universe:
    P = list(P)
    groups = groups_of(sig)
    u = build_universe(P, queries, sig, cap, groups)
    return saturate(u, P, sig, groups)


def oracle_decide(
    s: Term,
    t: Term,
    P: Iterable[Equation],
    sig: Signature,
    cap: int = DEFAULT_UNIVERSE_CAP,
) -> bool:
    return oracle_universe(P, [s, t], sig, cap).same(s, t)
