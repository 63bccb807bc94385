"""Finite permutation groups, fully enumerated.

Permutations act on argument positions 1..n.  Groups are materialised by a
breadth-first closure over their generators; this is only sensible for the
small arities of permutation symbols, so `generate` refuses to go past a cap.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, TypeVar

DEFAULT_GROUP_CAP = 1_000_000

V = TypeVar("V")


class PermError(ValueError):
    pass


class DegreeMismatch(PermError):
    pass


class OutOfRange(PermError):
    pass


class RepeatedPoint(PermError):
    pass


class NotABijection(PermError):
    pass


class LengthMismatch(PermError):
    pass


class GroupTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class Permutation:
    """images[i-1] = pi(i)."""

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(self.images)
        object.__setattr__(self, "images", imgs)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise NotABijection(f"{list(imgs)} is not a permutation of 1..{len(imgs)}")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __str__(self) -> str:
        cyc = to_cycles(self)
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """(p o q)(i) = p(q(i))."""
    if p.degree != q.degree:
        raise DegreeMismatch(f"degrees {p.degree} and {q.degree}")
    pi = p.images
    return Permutation(tuple(pi[j - 1] for j in q.images))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.degree
    for i, j in enumerate(p.images, 1):
        inv[j - 1] = i
    return Permutation(tuple(inv))


def from_cycles(degree: int, cycles: Iterable[Sequence[int]]) -> Permutation:
    images = list(range(1, degree + 1))
    seen: set[int] = set()
    for cyc in cycles:
        for x in cyc:
            if not 1 <= x <= degree:
                raise OutOfRange(f"point {x} outside 1..{degree}")
            if x in seen:
                raise RepeatedPoint(f"point {x} repeated in cycles")
            seen.add(x)
        for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
            images[a - 1] = b
    return Permutation(tuple(images))


def to_cycles(p: Permutation) -> list[list[int]]:
    out, seen = [], set()
    for start in range(1, p.degree + 1):
        if start in seen or p(start) == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = p(x)
        out.append(cyc)
    return out


def act(p: Permutation, tup: Sequence[V]) -> tuple[V, ...]:
    """result[i] = tup[p(i)]: the argument shuffle of f(x1..xn) = f(x_p(1)..x_p(n))."""
    if len(tup) != p.degree:
        raise LengthMismatch(f"tuple of length {len(tup)} for degree {p.degree}")
    return tuple(tup[j - 1] for j in p.images)


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: tuple[Permutation, ...]
    elements: frozenset[Permutation]
    # 0-based image tuples in BFS order; used by the hot min_image loop
    _index_tuples: tuple[tuple[int, ...], ...] = ()

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Permutation) -> bool:
        return contains(self, p)

    def contains(self, p: Permutation) -> bool:
        return contains(self, p)

    def is_trivial(self) -> bool:
        return len(self.elements) == 1


def generate(degree: int, gens: Iterable[Permutation], cap: int = DEFAULT_GROUP_CAP) -> PermGroup:
    gens = tuple(gens)
    if cap < 1:
        raise ValueError("cap must be >= 1")
    for g in gens:
        if g.degree != degree:
            raise DegreeMismatch(f"generator {g} has degree {g.degree}, expected {degree}")
    e = identity(degree)
    seen = {e}
    order = [e]
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(g, x)
            if y not in seen:
                if len(seen) >= cap:
                    raise GroupTooLarge(f"group on {degree} points exceeds {cap} elements")
                seen.add(y)
                order.append(y)
                queue.append(y)
    idx = tuple(tuple(j - 1 for j in p.images) for p in order)
    return PermGroup(degree, gens, frozenset(seen), idx)


def contains(G: PermGroup, p: Permutation) -> bool:
    if p.degree != G.degree:
        raise DegreeMismatch(f"permutation degree {p.degree}, group degree {G.degree}")
    return p in G.elements


def min_image(
    G: PermGroup,
    tup: Sequence[V],
    key: Callable[[V], object] | None = None,
) -> tuple[V, ...]:
    """Lexicographically least member of the orbit of `tup`, values compared by `key`."""
    if len(tup) != G.degree:
        raise LengthMismatch(f"tuple of length {len(tup)} for degree {G.degree}")
    tup = tuple(tup)
    if len(G.elements) == 1:
        return tup
    keys = tup if key is None else tuple(key(v) for v in tup)
    best_idx = None
    best_key = None
    for idx in G._index_tuples:
        cand = tuple(keys[j] for j in idx)
        if best_key is None or cand < best_key:
            best_key, best_idx = cand, idx
    return tuple(tup[j] for j in best_idx)


def orbit(G: PermGroup, tup: Sequence[V]) -> set[tuple[V, ...]]:
    return {act(p, tup) for p in G.elements}


def symmetric_generators(n: int) -> list[Permutation]:
    """(1 2) and (1 2 ... n)."""
    if n < 2:
        return []
    return [from_cycles(n, [[1, 2]]), from_cycles(n, [list(range(1, n + 1))])]
