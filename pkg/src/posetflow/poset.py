"""Graded, weighted posets given by their cover relation.

Elements are the integers ``0..n-1``. Every poset is built through
:func:`build_poset`, which recomputes ranks from the cover relation and
rejects anything that is cyclic, ungraded or carries a non-positive weight.
"""
from __future__ import annotations

import json
import os
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import CycleDetected, NonPositiveWeight, NotGraded, TooLargeForOracle, UnknownElement

DEFAULT_ORACLE_LIMIT = 24


def oracle_limit() -> int:
    """Element bound for the exhaustive oracles (``POSETFLOW_ORACLE_LIMIT`` overrides)."""
    value = os.environ.get("POSETFLOW_ORACLE_LIMIT")
    return int(value) if value else DEFAULT_ORACLE_LIMIT


@dataclass(frozen=True)
class GradedPoset:
    labels: tuple[str, ...]
    covers: tuple[tuple[int, int], ...]
    rank: tuple[int, ...]
    weight: tuple[int, ...]

    @property
    def element_count(self) -> int:
        return len(self.labels)

    @property
    def height(self) -> int:
        return max(self.rank) - min(self.rank) if self.rank else 0

    @cached_property
    def upper_covers(self) -> tuple[tuple[int, ...], ...]:
        up: list[list[int]] = [[] for _ in range(self.element_count)]
        for x, y in self.covers:
            up[x].append(y)
        return tuple(tuple(u) for u in up)

    @cached_property
    def lower_covers(self) -> tuple[tuple[int, ...], ...]:
        down: list[list[int]] = [[] for _ in range(self.element_count)]
        for x, y in self.covers:
            down[y].append(x)
        return tuple(tuple(d) for d in down)

    @cached_property
    def up_sets(self) -> tuple[int, ...]:
        """Bitset of elements strictly above each element."""
        order = sorted(range(self.element_count), key=lambda v: -self.rank[v])
        up = [0] * self.element_count
        for v in order:
            mask = 0
            for y in self.upper_covers[v]:
                mask |= up[y] | (1 << y)
            up[v] = mask
        return tuple(up)

    @cached_property
    def down_sets(self) -> tuple[int, ...]:
        """Bitset of elements strictly below each element."""
        order = sorted(range(self.element_count), key=lambda v: self.rank[v])
        down = [0] * self.element_count
        for v in order:
            mask = 0
            for x in self.lower_covers[v]:
                mask |= down[x] | (1 << x)
            down[v] = mask
        return tuple(down)

    def leq(self, x: int, y: int) -> bool:
        return x == y or bool(self.up_sets[x] >> y & 1)

    def total_weight(self, members: Iterable[int] | None = None) -> int:
        if members is None:
            return sum(self.weight)
        return sum(self.weight[v] for v in members)

    def level_weights(self) -> list[int]:
        return [w for _, _, w in levels(self)]


@dataclass(frozen=True)
class AntichainWitness:
    members: frozenset[int]
    total_weight: int

    def sorted_members(self) -> list[int]:
        return sorted(self.members)


def _topological_order(count: int, edges: Sequence[tuple[int, int]]) -> list[int]:
    indeg = [0] * count
    out: list[list[int]] = [[] for _ in range(count)]
    for x, y in edges:
        out[x].append(y)
        indeg[y] += 1
    queue = deque(v for v in range(count) if indeg[v] == 0)
    order = []
    while queue:
        v = queue.popleft()
        order.append(v)
        for y in out[v]:
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    if len(order) != count:
        raise CycleDetected(f"cover relation has a directed cycle ({count - len(order)} elements involved)")
    return order


def build_poset(
    labels: Sequence[str],
    covers: Iterable[tuple[int, int]],
    weights: Sequence[int] | None = None,
    base_rank_elements: Iterable[int] | None = None,
) -> GradedPoset:
    """Validate a cover relation and assign ranks.

    Minimal elements get rank 0 and every cover must raise the rank by
    exactly one. ``base_rank_elements``, when given, must all end up at rank 0.
    """
    count = len(labels)
    if weights is None:
        weights = [1] * count
    if len(weights) != count:
        raise ValueError(f"{len(weights)} weights for {count} elements")
    weights = tuple(int(w) for w in weights)
    for v, w in enumerate(weights):
        if w <= 0:
            raise NonPositiveWeight(f"element {v} ({labels[v]!r}) has weight {w}")
    edges = sorted({(int(x), int(y)) for x, y in covers})
    for x, y in edges:
        if not (0 <= x < count and 0 <= y < count):
            raise UnknownElement(f"cover ({x}, {y}) references an element outside 0..{count - 1}")
        if x == y:
            raise CycleDetected(f"self-cover on element {x}")
    order = _topological_order(count, edges)

    up: list[list[int]] = [[] for _ in range(count)]
    for x, y in edges:
        up[x].append(y)
    rank = [0] * count
    for v in order:
        for y in up[v]:
            if rank[y] < rank[v] + 1:
                rank[y] = rank[v] + 1
    for x, y in edges:
        if rank[y] != rank[x] + 1:
            raise NotGraded(
                f"cover {labels[x]!r} < {labels[y]!r} forces {labels[y]!r} to rank {rank[x] + 1}"
                f" but a longer chain puts it at rank {rank[y]}"
            )
    if base_rank_elements is not None:
        for v in base_rank_elements:
            if rank[v] != 0:
                raise NotGraded(f"base element {labels[v]!r} is not minimal")
    return GradedPoset(tuple(str(s) for s in labels), tuple(edges), tuple(rank), weights)


def levels(P: GradedPoset) -> list[tuple[int, frozenset[int], int]]:
    """Return ``(rank, members, level weight)`` for every rank, bottom first."""
    if P.element_count == 0:
        return []
    buckets: list[list[int]] = [[] for _ in range(max(P.rank) + 1)]
    for v, r in enumerate(P.rank):
        buckets[r].append(v)
    return [(r, frozenset(b), sum(P.weight[v] for v in b)) for r, b in enumerate(buckets)]


def _check_ids(P: GradedPoset, ids: Iterable[int]) -> list[int]:
    ids = sorted(set(ids))
    for v in ids:
        if not 0 <= v < P.element_count:
            raise UnknownElement(f"no element with id {v}")
    return ids


def is_antichain(P: GradedPoset, subset: Iterable[int]) -> tuple[bool, tuple[int, int] | None]:
    """Return ``(True, None)`` or ``(False, (lower, upper))`` for a comparable pair."""
    ids = _check_ids(P, subset)
    mask = 0
    for v in ids:
        mask |= 1 << v
    up = P.up_sets
    for x in ids:
        hit = up[x] & mask
        if hit:
            y = (hit & -hit).bit_length() - 1
            return False, (x, y)
    return True, None


def _comparability_masks(P: GradedPoset) -> list[int]:
    return [P.up_sets[v] | P.down_sets[v] for v in range(P.element_count)]


def _require_oracle_size(P: GradedPoset, limit: int | None) -> None:
    limit = oracle_limit() if limit is None else limit
    if P.element_count > limit:
        raise TooLargeForOracle(f"{P.element_count} elements exceeds the oracle bound {limit}")


def brute_force_width(P: GradedPoset, limit: int | None = None) -> AntichainWitness:
    """Maximum-weight antichain by exhaustive branch and bound.

    Among maximum-weight antichains the lexicographically smallest id set is
    returned (elements are branched on in id order, include before exclude).
    """
    _require_oracle_size(P, limit)
    n = P.element_count
    if n == 0:
        return AntichainWitness(frozenset(), 0)
    comp = _comparability_masks(P)
    wt = P.weight
    best_weight = -1
    best_mask = 0

    def mask_weight(mask: int) -> int:
        total = 0
        while mask:
            low = mask & -mask
            total += wt[low.bit_length() - 1]
            mask ^= low
        return total

    def search(cand: int, weight: int, chosen: int) -> None:
        nonlocal best_weight, best_mask
        if not cand:
            if weight > best_weight:
                best_weight, best_mask = weight, chosen
            return
        if weight + mask_weight(cand) <= best_weight:
            return
        low = cand & -cand
        i = low.bit_length() - 1
        search(cand & ~comp[i] & ~low, weight + wt[i], chosen | low)
        search(cand & ~low, weight, chosen)

    search((1 << n) - 1, 0, 0)
    members = frozenset(v for v in range(n) if best_mask >> v & 1)
    return AntichainWitness(members, best_weight)


def brute_force_k_width(P: GradedPoset, k: int, limit: int | None = None) -> tuple[int, frozenset[int]]:
    """Maximum weight of a subset containing no chain of ``k + 1`` elements."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    _require_oracle_size(P, limit)
    n = P.element_count
    order = sorted(range(n), key=lambda v: (P.rank[v], v))
    down = P.down_sets
    wt = P.weight
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + wt[order[i]]
    chain_end = [0] * n
    best = [-1, ()]

    def search(i: int, weight: int, chosen: list[int]) -> None:
        if weight + suffix[i] <= best[0]:
            return
        if i == n:
            best[0], best[1] = weight, tuple(chosen)
            return
        v = order[i]
        longest = 0
        below = down[v]
        for c in chosen:
            if below >> c & 1 and chain_end[c] > longest:
                longest = chain_end[c]
        if longest + 1 <= k:
            chain_end[v] = longest + 1
            chosen.append(v)
            search(i + 1, weight + wt[v], chosen)
            chosen.pop()
        search(i + 1, weight, chosen)

    search(0, 0, [])
    return best[0], frozenset(best[1])


def product(P: GradedPoset, Q: GradedPoset) -> GradedPoset:
    """Cartesian product; the pair ``(p, q)`` gets id ``p * |Q| + q``."""
    m = Q.element_count
    labels = [f"({a},{b})" for a in P.labels for b in Q.labels]
    covers = []
    for x, y in P.covers:
        for q in range(m):
            covers.append((x * m + q, y * m + q))
    for p in range(P.element_count):
        for x, y in Q.covers:
            covers.append((p * m + x, p * m + y))
    weights = [a * b for a in P.weight for b in Q.weight]
    R = build_poset(labels, covers, weights)
    expected = tuple(a + b for a in P.rank for b in Q.rank)
    # both factors normalize minimal elements to rank 0, so ranks add exactly
    assert R.rank == expected
    return R


def chain(m: int, weights: Sequence[int] | None = None) -> GradedPoset:
    if m < 1:
        raise ValueError("a chain needs at least one element")
    return build_poset([str(i) for i in range(1, m + 1)], [(i, i + 1) for i in range(m - 1)], weights)


def claw(m: int) -> GradedPoset:
    """Leaves ``1..m-1`` all covered by the single top ``m``."""
    if m < 1:
        raise ValueError("a claw needs at least one element")
    return build_poset([str(i) for i in range(1, m + 1)], [(i, m - 1) for i in range(m - 1)])


def singleton(weight: int = 1) -> GradedPoset:
    return build_poset(["*"], [], [weight])


def is_isomorphic(P: GradedPoset, Q: GradedPoset) -> bool:
    """Isomorphism of weighted graded posets (cover digraphs with rank and weight)."""
    import networkx as nx
    from networkx.algorithms.isomorphism import DiGraphMatcher

    if P.element_count != Q.element_count or len(P.covers) != len(Q.covers):
        return False

    def graph(R: GradedPoset) -> nx.DiGraph:
        G = nx.DiGraph()
        for v in range(R.element_count):
            G.add_node(v, rank=R.rank[v], weight=R.weight[v])
        G.add_edges_from(R.covers)
        return G

    match = DiGraphMatcher(
        graph(P), graph(Q), node_match=lambda a, b: a["rank"] == b["rank"] and a["weight"] == b["weight"]
    )
    return match.is_isomorphic()


# -- serialization ---------------------------------------------------------

def poset_to_dict(P: GradedPoset) -> dict:
    return {
        "labels": list(P.labels),
        "covers": [list(c) for c in P.covers],
        "weights": [str(w) for w in P.weight],
    }


def poset_from_dict(data: dict) -> GradedPoset:
    """Ranks are always recomputed; any ``rank`` field in ``data`` is ignored."""
    labels = data["labels"]
    covers = [tuple(c) for c in data.get("covers", [])]
    for c in covers:
        if len(c) != 2:
            raise ValueError(f"malformed cover {list(c)}")
    weights = data.get("weights")
    if weights is not None:
        weights = [int(w) for w in weights]
    return build_poset(labels, covers, weights)


def load_poset(path: str | os.PathLike) -> GradedPoset:
    with open(path) as fh:
        return poset_from_dict(json.load(fh))


def dump_poset(P: GradedPoset, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(poset_to_dict(P), fh, indent=1)
        fh.write("\n")


def to_dot(P: GradedPoset, name: str = "poset") -> str:
    lines = [f"digraph {json.dumps(name)} {{", "  rankdir=BT;"]
    for v in range(P.element_count):
        text = f"{P.labels[v]} ({P.rank[v]}, {P.weight[v]})"
        lines.append(f"  {v} [label={json.dumps(text)}];")
    for x, y in P.covers:
        lines.append(f"  {x} -> {y};")
    lines.append("}")
    return "\n".join(lines) + "\n"
