import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from permcc.permgroup import (
    DegreeMismatch,
    GroupTooLarge,
    LengthMismatch,
    NotABijection,
    OutOfRange,
    Permutation,
    RepeatedPoint,
    act,
    compose,
    contains,
    from_cycles,
    generate,
    identity,
    inverse,
    min_image,
    symmetric_generators,
)

BOARD_GENS = [
    from_cycles(8, [[1, 2]]),
    from_cycles(8, [[1, 2, 3, 4]]),
    from_cycles(8, [[5, 6]]),
    from_cycles(8, [[7, 8]]),
]
BLOCKS = [(0, 1, 2, 3), (4, 5), (6, 7)]


def preserves_blocks(images):
    return all({images[i] - 1 for i in b} == set(b) for b in BLOCKS)


def brute_closure(n, gens):
    """Independent closure: repeatedly multiply the whole set by generators."""
    elems = {tuple(range(1, n + 1))}
    while True:
        new = {tuple(g[x - 1] for x in e) for e in elems for g in gens} | elems
        if new == elems:
            return elems
        elems = new


def test_compose_examples():
    t12 = from_cycles(5, [[1, 2]])
    c5 = from_cycles(5, [[1, 2, 3, 4, 5]])
    assert compose(identity(5), c5) == c5
    assert compose(t12, t12) == identity(5)
    assert compose(t12, c5).images == (1, 3, 4, 5, 2)
    with pytest.raises(DegreeMismatch):
        compose(t12, identity(4))


def test_from_cycles():
    assert from_cycles(5, [[1, 2]]).images == (2, 1, 3, 4, 5)
    assert from_cycles(4, []) == identity(4)
    assert from_cycles(8, [[1, 2, 3, 4]]).images == (2, 3, 4, 1, 5, 6, 7, 8)
    with pytest.raises(OutOfRange):
        from_cycles(3, [[1, 4]])
    with pytest.raises(RepeatedPoint):
        from_cycles(3, [[1, 2], [2, 3]])
    with pytest.raises(NotABijection):
        Permutation((1, 1, 2))


def test_generate_examples():
    assert generate(5, symmetric_generators(5)).order == 120
    assert generate(3, []).order == 1


def test_board_group_against_block_enumeration():
    G = generate(8, BOARD_GENS)
    expected = {p for p in itertools.permutations(range(1, 9)) if preserves_blocks(p)}
    assert len(expected) == 96
    assert {p.images for p in G.elements} == expected


def test_contains():
    S5 = generate(5, symmetric_generators(5))
    assert contains(S5, from_cycles(5, [[1, 3]]))
    assert not contains(generate(8, [from_cycles(8, [[5, 6]])]), from_cycles(8, [[1, 2]]))
    G = generate(8, BOARD_GENS)
    assert contains(G, from_cycles(8, [[1, 4], [2, 3], [5, 6]]))
    assert not contains(G, from_cycles(8, [[4, 5]]))
    with pytest.raises(DegreeMismatch):
        contains(G, identity(3))


def test_act():
    assert act(identity(3), "abc") == ("a", "b", "c")
    assert act(from_cycles(3, [[1, 2]]), "abc") == ("b", "a", "c")
    xs = ("x1", "x2", "x3", "x4", "x5")
    assert act(from_cycles(5, [[1, 2, 3, 4, 5]]), xs) == ("x2", "x3", "x4", "x5", "x1")
    with pytest.raises(LengthMismatch):
        act(identity(3), "ab")


def test_min_image_examples():
    tup = (1, 0, 0, 2, 0)
    assert min_image(generate(5, []), tup) == tup
    assert min_image(generate(5, symmetric_generators(5)), tup) == (0, 0, 0, 1, 2)
    T, F = "T", "F"
    order = {F: 0, T: 1}
    got = min_image(generate(8, BOARD_GENS), (T, T, F, F, T, F, T, F), order.get)
    assert got == (F, F, T, T, F, T, F, T)


def test_cap():
    with pytest.raises(GroupTooLarge):
        generate(6, symmetric_generators(6), cap=100)


@pytest.mark.parametrize("n", range(2, 8))
def test_symmetric_orders(n):
    assert generate(n, symmetric_generators(n)).order == math.factorial(n)


perms = st.integers(2, 5).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.permutations(range(1, n + 1)), max_size=3),
    )
)


@given(perms)
@settings(max_examples=60)
def test_generate_matches_brute_closure(case):
    n, gens = case
    G = generate(n, [Permutation(tuple(g)) for g in gens])
    assert {p.images for p in G.elements} == brute_closure(n, [tuple(g) for g in gens])
    assert math.factorial(n) % G.order == 0
    for g in G.generators:
        assert g in G.elements
    for p in G.elements:
        assert inverse(p) in G.elements
        for q in list(G.elements)[:10]:
            assert compose(p, q) in G.elements


@given(perms, st.data())
@settings(max_examples=60)
def test_min_image_is_orbit_canonical(case, data):
    n, gens = case
    G = generate(n, [Permutation(tuple(g)) for g in gens])
    tup = tuple(data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n)))
    orbit = {act(p, tup) for p in G.elements}
    m = min_image(G, tup)
    assert m == min(orbit)
    for p in G.elements:
        assert min_image(G, act(p, tup)) == m
    other = tuple(data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n)))
    assert (other in orbit) == (min_image(G, other) == m)
