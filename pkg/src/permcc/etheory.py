"""Equality modulo permutation equations.

Each permutation symbol f carries the group generated by the permutations of
its equations; two terms headed by f are E-equal iff some group element maps
one (canonicalised) argument tuple onto the other.  Canonical forms pick the
orbit-minimal argument tuple at every node, bottom-up.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from permcc.permgroup import DEFAULT_GROUP_CAP, PermGroup, generate, min_image
from permcc.terms import App, KConst, Signature, Term, TermError, is_flat


class NotFlat(TermError):
    pass


@dataclass(frozen=True)
class PermTheory:
    groups: dict[str, PermGroup] = field(default_factory=dict)
    ranks: dict[str, int] = field(default_factory=dict)

    def group(self, name: str) -> PermGroup | None:
        g = self.groups.get(name)
        if g is None or g.is_trivial():
            return None
        return g

    def __contains__(self, name: str) -> bool:
        return name in self.groups


def decompose(sig: Signature, cap: int = DEFAULT_GROUP_CAP) -> PermTheory:
    groups = {}
    for name, gens in sig.perm_gens.items():
        groups[name] = generate(sig[name].arity, gens, cap)
    return PermTheory(groups, sig.ranks())


def term_key(t: Term, ranks: dict[str, int]) -> tuple:
    """Total order on terms: K-constants by index first, then symbol rank, then children."""
    if isinstance(t, KConst):
        return (0, t.index)
    r = ranks.get(t.head.name)
    return (1, r if r is not None else len(ranks), t.head.name, tuple(term_key(a, ranks) for a in t.args))


def flat_eq_test(s: Term, t: Term, th: PermTheory) -> bool:
    if not (is_flat(s) and is_flat(t)):
        raise NotFlat(f"{s} / {t} not flat")
    if isinstance(s, KConst) or isinstance(t, KConst):
        return s == t
    if s.head != t.head:
        return False
    G = th.group(s.head.name)
    if G is None:
        return s == t
    # multiset check is only a fast rejection
    if Counter(s.args) != Counter(t.args):
        return False
    key = lambda v: term_key(v, th.ranks)
    return min_image(G, s.args, key) == min_image(G, t.args, key)


def canonical_term(t: Term, th: PermTheory) -> Term:
    if isinstance(t, KConst) or not t.args:
        return t
    args = tuple(canonical_term(a, th) for a in t.args)
    G = th.group(t.head.name)
    if G is not None:
        args = min_image(G, args, lambda v: term_key(v, th.ranks))
    return App(t.head, args)


def ground_eq_mod_e(s: Term, t: Term, th: PermTheory) -> bool:
    return canonical_term(s, th) == canonical_term(t, th)


def flat_key(head: str, args: tuple[KConst, ...], th: PermTheory) -> tuple:
    """Hashable canonical key of a flat term f(c1..cn) over K."""
    G = th.group(head)
    if G is None:
        return (head, tuple(a.index for a in args))
    return (head, min_image(G, tuple(a.index for a in args)))
