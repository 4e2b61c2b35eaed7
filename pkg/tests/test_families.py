import itertools

import pytest

from posetflow.errors import SizeLimit, SizeMismatch
from posetflow.families import (
    Permutation,
    StirlingTable,
    absolute_leq,
    boolean_lattice,
    check_absolute_reverse_refinement,
    decompose_copies,
    partition_lattice,
    reduce_permutation,
    set_partitions,
    stirling_row,
    symmetric_group_refinement,
)
from posetflow.poset import chain, is_isomorphic, product


def cycle_count_census(n):
    """Independent oracle: count cycles of every permutation by direct walking."""
    counts = [0] * (n + 1)
    for images in itertools.permutations(range(n)):
        seen = set()
        c = 0
        for i in range(n):
            if i not in seen:
                c += 1
                while i not in seen:
                    seen.add(i)
                    i = images[i]
        counts[c] += 1
    return counts


def block_census(n):
    """Independent oracle: set partitions from all block-label functions."""
    found = set()
    for labels in itertools.product(range(n), repeat=n):
        blocks = {}
        for point, b in enumerate(labels):
            blocks.setdefault(b, set()).add(point)
        found.add(frozenset(frozenset(b) for b in blocks.values()))
    counts = [0] * (n + 1)
    for p in found:
        counts[len(p)] += 1
    return counts


def test_permutation_basics():
    pi = Permutation.from_cycles("(1 4 2 3)")
    assert pi.images == (4, 3, 1, 2)
    assert str(pi) == "(1 4 2 3)"
    assert str(Permutation.from_cycles("(2 3)", n=4)) == "(1)(2 3)(4)"
    assert pi.absolute_length() == 3
    assert (pi * pi.inverse()) == Permutation.identity(4)
    with pytest.raises(ValueError):
        Permutation([1, 1])
    with pytest.raises(ValueError):
        Permutation.from_cycles("(1 2")


def test_boolean_lattice():
    assert boolean_lattice(0).element_count == 1
    assert boolean_lattice(4).level_weights() == [1, 4, 6, 4, 1]
    assert is_isomorphic(boolean_lattice(2), product(chain(2), chain(2)))
    with pytest.raises(SizeLimit):
        boolean_lattice(21)


def test_symmetric_group_levels_match_cycle_census():
    for n in range(1, 7):
        P, _ = symmetric_group_refinement(n)
        assert P.level_weights() == cycle_count_census(n)[1:]
    assert symmetric_group_refinement(3)[0].level_weights() == [2, 3, 1]
    assert symmetric_group_refinement(4)[0].level_weights() == [6, 11, 6, 1]
    with pytest.raises(SizeLimit):
        symmetric_group_refinement(9)


def test_refinements_of_a_three_cycle():
    P, elements = symmetric_group_refinement(3)
    index = {str(e): i for i, e in enumerate(elements)}
    c = index["(1 2 3)"]
    ups = {P.labels[y] for y in P.upper_covers[c]}
    assert ups == {"(1 2)(3)", "(1 3)(2)", "(1)(2 3)"}


def test_ids_are_lexicographic():
    _, elements = symmetric_group_refinement(4)
    assert [e.images for e in elements] == sorted(e.images for e in elements)


def test_partition_lattice():
    assert partition_lattice(1).element_count == 1
    assert partition_lattice(3).level_weights() == [1, 3, 1]
    assert partition_lattice(4).level_weights() == [1, 6, 7, 1]
    for n in range(1, 7):
        assert partition_lattice(n).level_weights() == block_census(n)[1:][::-1]
        assert len(set_partitions(n)) == sum(block_census(n))


def test_absolute_leq_examples():
    for sigma in map(Permutation, itertools.permutations(range(1, 4))):
        assert absolute_leq(Permutation.identity(3), sigma)
        assert absolute_leq(sigma, sigma)
    assert absolute_leq(Permutation.from_cycles("(1 2)", 3), Permutation.from_cycles("(1 2 3)"))
    with pytest.raises(SizeMismatch):
        absolute_leq(Permutation.identity(2), Permutation.identity(3))


def test_absolute_order_is_partial_order():
    for n in range(1, 5):
        perms = [Permutation(p) for p in itertools.permutations(range(1, n + 1))]
        le = {(a, b): absolute_leq(a, b) for a in perms for b in perms}
        for a in perms:
            assert le[(a, a)]
            for b in perms:
                if a != b and le[(a, b)]:
                    assert not le[(b, a)]
                    for c in perms:
                        if le[(b, c)]:
                            assert le[(a, c)]


def test_absolute_order_reverses_refinement():
    for n in range(1, 5):
        assert check_absolute_reverse_refinement(n) == (True, None)


def test_stirling_rows():
    assert stirling_row("first", 4) == [0, 6, 11, 6, 1]
    assert sum(stirling_row("first", 5)) == 120
    assert stirling_row("second", 4) == [0, 1, 7, 6, 1]
    for n in range(0, 8):
        assert stirling_row("first", n) == cycle_count_census(n)
    for n in range(1, 7):
        assert stirling_row("second", n) == block_census(n)
    table = StirlingTable.build("first", 5)
    assert table[5, 2] == 50 and table[5, 9] == 0


def test_stirling_recurrences_to_200():
    fact = 1
    bell = [1]
    for n in range(1, 201):
        fact *= n
        s, prev = stirling_row("first", n), stirling_row("first", n - 1)
        assert s[0] == 0 and s[n] == 1 and sum(s) == fact
        for k in range(1, n + 1):
            assert s[k] == (n - 1) * (prev[k] if k < n else 0) + prev[k - 1]
    for n in range(1, 30):
        S, prev = stirling_row("second", n), stirling_row("second", n - 1)
        for k in range(1, n + 1):
            assert S[k] == k * (prev[k] if k < n else 0) + prev[k - 1]
    # Bell numbers via the Bell triangle
    row = [1]
    for _ in range(25):
        new = [row[-1]]
        for x in row:
            new.append(new[-1] + x)
        bell.append(new[0])
        row = new
    for n in range(1, 26):
        assert sum(stirling_row("second", n)) == bell[n]


def test_log_concave_rows():
    for n in range(1, 201):
        s = stirling_row("first", n)
        assert all(s[k - 1] * s[k + 1] <= s[k] ** 2 for k in range(1, n))


def test_decompose_s4():
    dec = decompose_copies(4)
    for i in range(1, 5):
        assert len(dec.copy_members(i)) == 6
    index = {str(e): v for v, e in enumerate(dec.elements)}
    _, small = symmetric_group_refinement(3)
    raised = index["(1)(2 3)(4)"]
    assert dec.copy_of[raised] == 4
    lower = index["(1 4)(2 3)"]
    assert dec.copy_of[lower] == 1
    assert str(small[dec.reduction[lower]]) == "(1)(2 3)"
    assert set(dec.edge_color.values()) == {"blue", "red", "gray"}
    assert set(dec.edge_color) == set(dec.poset.covers)


def test_reduce_fixed_point_drops_a_cycle():
    pi = Permutation.from_cycles("(1 2)(3)(4)")
    assert str(reduce_permutation(pi)) == "(1 2)(3)"


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_copy_decomposition_facts(m):
    n = m - 1
    dec = decompose_copies(m)
    P = dec.poset
    small, _ = symmetric_group_refinement(n)
    small_covers = set(small.covers)
    for i in range(1, m + 1):
        members = dec.copy_members(i)
        images = [dec.reduction[v] for v in members]
        # reduction is a bijection of every copy onto S_n
        assert sorted(images) == list(range(small.element_count))
        blue = [(x, y) for (x, y), c in dec.edge_color.items() if c == "blue" and dec.copy_of[x] == i]
        mapped = {(dec.reduction[x], dec.reduction[y]) for x, y in blue}
        assert len(mapped) == len(blue) and mapped == small_covers
    for (x, y), c in dec.edge_color.items():
        cx, cy = dec.copy_of[x], dec.copy_of[y]
        if c == "red":
            # red edges climb from a lower copy at rank k into the raised copy at rank k+1
            assert cy == m and cx != m and P.rank[y] == P.rank[x] + 1
        elif c == "gray":
            assert cx != cy and m not in (cx, cy)
    for v in dec.copy_members(m):
        reds = [e for e, c in dec.edge_color.items() if c == "red" and e[1] == v]
        assert len(reds) == n
        # removing the fixed point n+1 removes one cycle
        assert symmetric_group_refinement(n)[1][dec.reduction[v]].cycle_count() == dec.elements[v].cycle_count() - 1
