"""Random problem generators shared by the benchmark, the CLI and the tests."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from permcc.permgroup import Permutation, from_cycles, symmetric_generators
from permcc.terms import App, Equation, KConst, Signature, Term, size


@dataclass
class Instance:
    sig: Signature
    equations: list[Equation]
    queries: list[Equation] = field(default_factory=list)


def random_permutation(rng: random.Random, n: int) -> Permutation:
    imgs = list(range(1, n + 1))
    rng.shuffle(imgs)
    return Permutation(tuple(imgs))


def random_term(rng: random.Random, sig: Signature, depth: int, leaves: list[Term] | None = None) -> Term:
    consts = [s for s in sig.symbols.values() if s.arity == 0]
    funs = [s for s in sig.symbols.values() if s.arity > 0]
    pool_leaves = [App(c, ()) for c in consts] + list(leaves or [])
    if depth <= 0 or not funs or rng.random() < 0.3:
        return rng.choice(pool_leaves)
    f = rng.choice(funs)
    return App(f, [random_term(rng, sig, depth - 1, leaves) for _ in range(f.arity)])


def random_equations(
    rng: random.Random, sig: Signature, target_size: int, max_depth: int = 3
) -> list[Equation]:
    eqs: list[Equation] = []
    total = 0
    misses = 0
    while total < target_size and misses < 50:
        s = random_term(rng, sig, max_depth)
        t = random_term(rng, sig, max_depth)
        n = size(s) + size(t)
        if total + n > target_size:
            misses += 1
            continue
        eqs.append(Equation(s, t))
        total += n
    if not eqs:
        leaves = [App(c, ()) for c in sig.symbols.values() if c.arity == 0]
        eqs.append(Equation(rng.choice(leaves), rng.choice(leaves)))
    return eqs


def bench_signature() -> Signature:
    sig = Signature()
    for name in "abcde":
        sig.declare(name, 0)
    sig.declare("h", 1)
    sig.declare("g", 2)
    sig.declare("f", 4)
    for p in symmetric_generators(4):
        sig.add_perm("f", p)
    return sig


def bench_instance(rng: random.Random, n: int) -> Instance:
    sig = bench_signature()
    return Instance(sig, random_equations(rng, sig, n, max_depth=3) if n > 0 else [])


def random_signature(
    rng: random.Random,
    theory: str | None = None,
    n_consts: int | None = None,
    max_arity: int = 4,
    max_degree: int | None = None,
) -> Signature:
    """Small signature: constants, a unary h, a binary g and one permutation symbol f."""
    sig = Signature()
    n_consts = n_consts if n_consts is not None else rng.randint(2, 4)
    for i in range(n_consts):
        sig.declare("abcdefgh"[i], 0)
    sig.declare("h", 1)
    sig.declare("g", 2)
    arity = rng.randint(2, max_degree or max_arity)
    sig.declare("f", arity)
    k = rng.randint(1, 2)
    for _ in range(k):
        sig.add_perm("f", random_permutation(rng, arity))
    if theory is not None:
        sig.declare("z", 0)
    if rng.random() < 0.5 or (theory is not None and rng.random() < 0.5):
        sig.add_perm("g", from_cycles(2, [[1, 2]]))
    if theory is not None:
        sig.set_theory("g", theory, "z" if ("N" in theory or "U" in theory) else None)
    return sig


def random_small_instance(
    rng: random.Random,
    theory: str | None = None,
    max_total: int = 30,
    max_depth: int = 3,
) -> Instance:
    sig = random_signature(rng, theory)
    target = rng.randint(4, max_total)
    eqs = random_equations(rng, sig, target, max_depth)
    if theory is not None and "N" in theory:
        zero = App(sig["z"], ())
        if not any(_mentions(e, zero) for e in eqs):
            eqs[-1] = Equation(eqs[-1].lhs, zero)
    while sum(size(e.lhs) + size(e.rhs) for e in eqs) > max_total and len(eqs) > 1:
        eqs.pop(0)
    return Instance(sig, eqs)


def _mentions(eq: Equation, t: Term) -> bool:
    from permcc.terms import subterms

    return any(s == t for s in subterms(eq.lhs)) or any(s == t for s in subterms(eq.rhs))


def random_e_variant(rng: random.Random, t: Term, sig: Signature, groups) -> Term:
    """Apply random group elements at random permutation-headed nodes."""
    if isinstance(t, KConst) or not t.args:
        return t
    args = [random_e_variant(rng, a, sig, groups) for a in t.args]
    G = groups.get(t.head.name)
    if G is not None and rng.random() < 0.7:
        p = rng.choice(sorted(G.elements, key=lambda q: q.images))
        args = [args[j - 1] for j in p.images]
    return App(t.head, args)
