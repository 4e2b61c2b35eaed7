"""Exact flows on vertex-capacitated acyclic networks.

Every vertex ``v`` is split into ``v_in -> v_out`` carrying its capacity, and
all solvers run integer shortest-augmenting-path (level graph) max flow on
the split network. Flow witnesses are handed back as ``Fraction`` values.

Sources are the vertices without incoming edges and sinks those without
outgoing edges. An isolated vertex is both; it is treated as a source-sink
path of length zero whose throughput is recorded in
``FlowAssignment.isolated``.
"""
from __future__ import annotations

import json
import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    ConservationViolated,
    EdgeMismatch,
    NonPositiveWeight,
    NoSourceOrSink,
    NotBipartite,
    TooLargeForOracle,
    UnknownElement,
)
from .poset import GradedPoset, _topological_order

Edge = tuple[int, int]


@dataclass(frozen=True)
class Network:
    capacities: tuple[int, ...]
    edges: tuple[Edge, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.capacities)
        for v, c in enumerate(self.capacities):
            if c <= 0:
                raise NonPositiveWeight(f"vertex {v} has capacity {c}")
        for x, y in self.edges:
            if not (0 <= x < n and 0 <= y < n):
                raise UnknownElement(f"edge ({x}, {y}) references a vertex outside 0..{n - 1}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(v) for v in range(n)))
        _topological_order(n, self.edges)

    @classmethod
    def build(cls, capacities: Sequence[int], edges: Iterable[Edge], labels: Sequence[str] = ()) -> "Network":
        return cls(
            tuple(int(c) for c in capacities),
            tuple(sorted({(int(x), int(y)) for x, y in edges})),
            tuple(labels),
        )

    @property
    def vertex_count(self) -> int:
        return len(self.capacities)

    @cached_property
    def successors(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for x, y in self.edges:
            out[x].append(y)
        return tuple(tuple(o) for o in out)

    @cached_property
    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for x, y in self.edges:
            inc[y].append(x)
        return tuple(tuple(i) for i in inc)

    @cached_property
    def sources(self) -> frozenset[int]:
        return frozenset(v for v in range(self.vertex_count) if not self.predecessors[v])

    @cached_property
    def sinks(self) -> frozenset[int]:
        return frozenset(v for v in range(self.vertex_count) if not self.successors[v])

    @cached_property
    def intermediates(self) -> frozenset[int]:
        return frozenset(range(self.vertex_count)) - self.sources - self.sinks

    @cached_property
    def isolated(self) -> frozenset[int]:
        return self.sources & self.sinks

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        return tuple(_topological_order(self.vertex_count, self.edges))

    @cached_property
    def reachable_from(self) -> tuple[int, ...]:
        """Bitset of vertices reachable (by a nonempty path) from each vertex."""
        reach = [0] * self.vertex_count
        for v in reversed(self.topological_order):
            mask = 0
            for y in self.successors[v]:
                mask |= reach[y] | (1 << y)
            reach[v] = mask
        return tuple(reach)

    def is_antichain(self, vertices: Iterable[int]) -> tuple[bool, Edge | None]:
        mask = 0
        vertices = sorted(set(vertices))
        for v in vertices:
            if not 0 <= v < self.vertex_count:
                raise UnknownElement(f"no vertex {v}")
            mask |= 1 << v
        for v in vertices:
            hit = self.reachable_from[v] & mask
            if hit:
                return False, (v, (hit & -hit).bit_length() - 1)
        return True, None

    def weight(self, vertices: Iterable[int]) -> int:
        return sum(self.capacities[v] for v in vertices)


def hasse_network(P: GradedPoset) -> Network:
    """The cover digraph of ``P`` with capacity equal to weight."""
    return Network(P.weight, P.covers, P.labels)


@dataclass(frozen=True)
class FlowAssignment:
    values: Mapping[Edge, Fraction]
    isolated: Mapping[int, Fraction] = field(default_factory=dict)

    def __getitem__(self, edge: Edge) -> Fraction:
        return self.values[edge]


def zero_flow(N: Network) -> FlowAssignment:
    return FlowAssignment({e: Fraction(0) for e in N.edges})


@dataclass(frozen=True)
class FlowClassification:
    kind: str  # "underflow" | "overflow" | "both" | "neither"
    conservation: tuple[str, ...]
    underflow_violations: tuple[str, ...]
    overflow_violations: tuple[str, ...]


def _throughputs(N: Network, f: FlowAssignment) -> tuple[list[Fraction], list[Fraction]]:
    if set(f.values) != set(N.edges):
        missing = set(N.edges) - set(f.values)
        extra = set(f.values) - set(N.edges)
        raise EdgeMismatch(f"flow/edge mismatch: missing {sorted(missing)[:5]}, extra {sorted(extra)[:5]}")
    for v in f.isolated:
        if v not in N.isolated:
            raise EdgeMismatch(f"vertex {v} is not isolated but carries an isolated throughput")
    inflow = [Fraction(0)] * N.vertex_count
    outflow = [Fraction(0)] * N.vertex_count
    for (x, y), val in f.values.items():
        outflow[x] += val
        inflow[y] += val
    return inflow, outflow


def classify_flow(N: Network, f: FlowAssignment) -> FlowClassification:
    inflow, outflow = _throughputs(N, f)
    conservation = []
    for e, val in f.values.items():
        if val < 0:
            conservation.append(f"negative flow {val} on edge {e}")
    for v in sorted(N.intermediates):
        if inflow[v] != outflow[v]:
            conservation.append(f"vertex {v}: inflow {inflow[v]} != outflow {outflow[v]}")
    under, over = [], []
    for v in range(N.vertex_count):
        if v in N.isolated:
            through, role = Fraction(f.isolated.get(v, 0)), "isolated"
        elif v in N.sources:
            through, role = outflow[v], "source"
        elif v in N.sinks:
            through, role = inflow[v], "sink"
        else:
            through, role = outflow[v], "intermediate"
        cap = N.capacities[v]
        if through > cap:
            under.append(f"{role} {v}: {through} > {cap}")
        if through < cap:
            over.append(f"{role} {v}: {through} < {cap}")
    if conservation:
        kind = "neither"
    elif not under and not over:
        kind = "both"
    elif not under:
        kind = "underflow"
    elif not over:
        kind = "overflow"
    else:
        kind = "neither"
    return FlowClassification(kind, tuple(conservation), tuple(under), tuple(over))


def net_flow(N: Network, f: FlowAssignment) -> Fraction:
    """Total flow leaving the sources (isolated throughput included)."""
    inflow, outflow = _throughputs(N, f)
    for v in N.intermediates:
        if inflow[v] != outflow[v]:
            raise ConservationViolated(f"vertex {v}: inflow {inflow[v]} != outflow {outflow[v]}")
    isolated = sum((Fraction(x) for x in f.isolated.values()), Fraction(0))
    out = sum((outflow[s] for s in N.sources), Fraction(0)) + isolated
    into = sum((inflow[t] for t in N.sinks), Fraction(0)) + isolated
    if out != into:
        raise ConservationViolated(f"sources emit {out} but sinks absorb {into}")
    return out


# -- integer max-flow engine -----------------------------------------------

class _FlowGraph:
    """Residual graph with paired arcs ``a`` / ``a ^ 1`` and level-graph augmentation."""

    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.head: list[int] = []
        self.cap: list[int] = []

    def add_arc(self, u: int, v: int, cap: int, rev_cap: int = 0) -> int:
        a = len(self.head)
        self.head += (v, u)
        self.cap += (cap, rev_cap)
        self.adj[u].append(a)
        self.adj[v].append(a + 1)
        return a

    def _levels(self, s: int, t: int) -> list[int] | None:
        level = [-1] * self.n
        level[s] = 0
        queue = deque([s])
        head, cap, adj = self.head, self.cap, self.adj
        while queue:
            u = queue.popleft()
            nxt = level[u] + 1
            for a in adj[u]:
                if cap[a] > 0:
                    v = head[a]
                    if level[v] < 0:
                        level[v] = nxt
                        queue.append(v)
        return level if level[t] >= 0 else None

    def max_flow(self, s: int, t: int) -> int:
        head, cap, adj = self.head, self.cap, self.adj
        total = 0
        while True:
            level = self._levels(s, t)
            if level is None:
                return total
            it = [0] * self.n
            while True:
                stack: list[int] = []
                u = s
                while u != t:
                    arcs = adj[u]
                    i = it[u]
                    want = level[u] + 1
                    while i < len(arcs):
                        a = arcs[i]
                        if cap[a] > 0 and level[head[a]] == want:
                            break
                        i += 1
                    it[u] = i
                    if i == len(arcs):
                        if not stack:
                            break
                        level[u] = -1
                        a = stack.pop()
                        u = head[a ^ 1]
                        it[u] += 1
                        continue
                    stack.append(arcs[i])
                    u = head[arcs[i]]
                if u != t:
                    break
                push = min(cap[a] for a in stack)
                for a in stack:
                    cap[a] -= push
                    cap[a ^ 1] += push
                total += push

    def reachable(self, s: int) -> list[bool]:
        seen = [False] * self.n
        seen[s] = True
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for a in self.adj[u]:
                if self.cap[a] > 0 and not seen[self.head[a]]:
                    seen[self.head[a]] = True
                    queue.append(self.head[a])
        return seen


@dataclass(frozen=True)
class MaxFlowResult:
    value: int
    flow: FlowAssignment
    cut: frozenset[int]


@dataclass(frozen=True)
class MinFlowResult:
    value: int
    flow: FlowAssignment
    antichain: frozenset[int]


def max_flow(N: Network) -> MaxFlowResult:
    """Maximum net underflow and a minimum-weight vertex cut."""
    V = N.vertex_count
    if V == 0 or not N.sources or not N.sinks:
        raise NoSourceOrSink("network has no source or no sink")
    big = sum(N.capacities) + 1
    sigma, tau = 2 * V, 2 * V + 1
    G = _FlowGraph(2 * V + 2)
    internal = [G.add_arc(2 * v, 2 * v + 1, N.capacities[v]) for v in range(V)]
    edge_arc = {e: G.add_arc(2 * e[0] + 1, 2 * e[1], big) for e in N.edges}
    for s in sorted(N.sources):
        G.add_arc(sigma, 2 * s, big)
    for t in sorted(N.sinks):
        G.add_arc(2 * t + 1, tau, big)
    value = G.max_flow(sigma, tau)
    seen = G.reachable(sigma)
    cut = frozenset(v for v in range(V) if seen[2 * v] and not seen[2 * v + 1])
    assert N.weight(cut) == value, "max-flow/min-cut mismatch"
    flows = {e: Fraction(big - G.cap[a]) for e, a in edge_arc.items()}
    isolated = {v: Fraction(N.capacities[v] - G.cap[internal[v]]) for v in sorted(N.isolated)}
    return MaxFlowResult(value, FlowAssignment(flows, isolated), cut)


def _greedy_overflow(N: Network) -> tuple[list[int], dict[Edge, int], int]:
    """Route flow along source-to-sink paths until every vertex carries its capacity.

    Paths are grown from the deficient vertex toward the neighbour with the
    largest remaining deficit, which keeps the starting flow close to optimal.
    """
    through = [0] * N.vertex_count
    edge_flow = {e: 0 for e in N.edges}
    value = 0
    caps = N.capacities
    preds, succs = N.predecessors, N.successors
    for v in N.topological_order:
        d = caps[v] - through[v]
        if d <= 0:
            continue
        path = [v]
        u = v
        while preds[u]:
            u = max(preds[u], key=lambda p: (caps[p] - through[p], -p))
            path.append(u)
        path.reverse()
        u = v
        while succs[u]:
            u = max(succs[u], key=lambda q: (caps[q] - through[q], -q))
            path.append(u)
        for x in path:
            through[x] += d
        for x, y in zip(path, path[1:]):
            edge_flow[(x, y)] += d
        value += d
    return through, edge_flow, value


def min_flow(N: Network) -> MinFlowResult:
    """Minimum net overflow together with a maximum-weight antichain.

    A feasible overflow is built greedily, then reduced by a max flow from
    the super-sink to the super-source in the residual network whose
    backward capacities are ``flow - lower bound``.
    """
    V = N.vertex_count
    if V == 0:
        return MinFlowResult(0, FlowAssignment({}), frozenset())
    through, edge_flow, start = _greedy_overflow(N)
    big = start + 1
    sigma, tau = 2 * V, 2 * V + 1
    G = _FlowGraph(2 * V + 2)
    # each arc below is a "decrease" arc; its partner holds the unbounded increase direction
    internal = [G.add_arc(2 * v + 1, 2 * v, through[v] - N.capacities[v], big) for v in range(V)]
    edge_arc = {(x, y): G.add_arc(2 * y, 2 * x + 1, edge_flow[(x, y)], big) for x, y in N.edges}
    for s in sorted(N.sources):
        G.add_arc(2 * s, sigma, through[s], big)
    for t in sorted(N.sinks):
        G.add_arc(tau, 2 * t + 1, through[t], big)
    reduced = G.max_flow(tau, sigma)
    value = start - reduced
    seen = G.reachable(tau)
    antichain = frozenset(v for v in range(V) if seen[2 * v + 1] and not seen[2 * v])
    assert N.weight(antichain) == value, "min-flow/max-antichain mismatch"
    flows = {e: Fraction(G.cap[a]) for e, a in edge_arc.items()}
    isolated = {v: Fraction(N.capacities[v] + G.cap[internal[v]]) for v in sorted(N.isolated)}
    return MinFlowResult(value, FlowAssignment(flows, isolated), antichain)


# -- normalized flows on bipartite graphs -----------------------------------

def _bipartite_input(left: Mapping[int, int], right: Mapping[int, int], edges: Iterable[Edge]):
    if set(left) & set(right):
        raise NotBipartite(f"vertices on both sides: {sorted(set(left) & set(right))[:5]}")
    if not left or not right:
        raise ValueError("both sides of a bipartite graph must be nonempty")
    for v, w in list(left.items()) + list(right.items()):
        if w <= 0:
            raise NonPositiveWeight(f"vertex {v} has weight {w}")
    edges = sorted(set(edges))
    for x, y in edges:
        if x not in left or y not in right:
            raise NotBipartite(f"edge ({x}, {y}) does not run from the left side to the right side")
    return edges


@dataclass(frozen=True)
class NormalizedFlowResult:
    feasible: bool
    flow: FlowAssignment | None
    violating: frozenset[int] | None  # left-side set breaking the normalized matching condition


def solve_normalized_flow(
    left: Mapping[int, int], right: Mapping[int, int], edges: Iterable[Edge]
) -> NormalizedFlowResult:
    """Decide normalized-flow feasibility by one scaled integer max flow.

    On failure the left vertices still reachable from the super-source in
    the final residual graph form a set ``X`` with
    ``w(X) * w(right) > w(D(X)) * w(left)``.
    """
    edges = _bipartite_input(left, right, edges)
    wl, wr = sum(left.values()), sum(right.values())
    total = wl * wr
    lids, rids = sorted(left), sorted(right)
    index = {v: i for i, v in enumerate(lids + rids)}
    sigma, tau = len(index), len(index) + 1
    G = _FlowGraph(len(index) + 2)
    for x in lids:
        G.add_arc(sigma, index[x], left[x] * wr)
    for y in rids:
        G.add_arc(index[y], tau, right[y] * wl)
    arcs = {e: G.add_arc(index[e[0]], index[e[1]], total) for e in edges}
    value = G.max_flow(sigma, tau)
    if value == total:
        flow = {e: Fraction(total - G.cap[a], total) for e, a in arcs.items()}
        return NormalizedFlowResult(True, FlowAssignment(flow), None)
    seen = G.reachable(sigma)
    X = frozenset(x for x in lids if seen[index[x]])
    return NormalizedFlowResult(False, None, X)


def normalized_flow(
    left: Mapping[int, int], right: Mapping[int, int], edges: Iterable[Edge]
) -> FlowAssignment | None:
    return solve_normalized_flow(left, right, edges).flow


def is_normalized_flow(
    left: Mapping[int, int], right: Mapping[int, int], flow: FlowAssignment
) -> bool:
    wl, wr = sum(left.values()), sum(right.values())
    out = {x: Fraction(0) for x in left}
    into = {y: Fraction(0) for y in right}
    for (x, y), val in flow.values.items():
        if val < 0:
            return False
        out[x] += val
        into[y] += val
    return all(out[x] == Fraction(w, wl) for x, w in left.items()) and all(
        into[y] == Fraction(w, wr) for y, w in right.items()
    )


def neighbourhood(edges: Iterable[Edge], X: Iterable[int]) -> frozenset[int]:
    X = set(X)
    return frozenset(y for x, y in edges if x in X)


def nmc_bruteforce(
    left: Mapping[int, int], right: Mapping[int, int], edges: Iterable[Edge], limit: int = 20
) -> tuple[bool, frozenset[int] | None]:
    """Check ``w(X) w(right) <= w(D(X)) w(left)`` for every left subset ``X``.

    Subsets are visited in lexicographic order of their sorted id tuples and
    the first violator is returned.
    """
    edges = _bipartite_input(left, right, edges)
    lids, rids = sorted(left), sorted(right)
    if len(lids) > limit:
        raise TooLargeForOracle(f"{len(lids)} left vertices exceeds the NMC oracle bound {limit}")
    rpos = {y: j for j, y in enumerate(rids)}
    nbr = [0] * len(lids)
    lpos = {x: i for i, x in enumerate(lids)}
    for x, y in edges:
        nbr[lpos[x]] |= 1 << rpos[y]
    lw = [left[x] for x in lids]
    rw = [right[y] for y in rids]
    wl, wr = sum(lw), sum(rw)
    m = len(lids)
    # (next index to try, chosen list, X weight, D mask, D weight)
    stack = [(0, (), 0, 0, 0)]
    while stack:
        start, chosen, xw, dmask, dw = stack.pop()
        # push in reverse so lower indices are explored first
        for i in range(m - 1, start - 1, -1):
            new = nbr[i] & ~dmask
            add = 0
            while new:
                low = new & -new
                add += rw[low.bit_length() - 1]
                new ^= low
            stack.append((i + 1, chosen + (i,), xw + lw[i], dmask | nbr[i], dw + add))
        if chosen and xw * wr > dw * wl:
            return False, frozenset(lids[i] for i in chosen)
    return True, None


# -- exhaustive min cut ------------------------------------------------------

def brute_force_min_vertex_cut(N: Network, limit: int = 20) -> tuple[int, frozenset[int]]:
    """Lightest vertex set meeting every source-to-sink path, by enumeration."""
    V = N.vertex_count
    if V > limit:
        raise TooLargeForOracle(f"{V} vertices exceeds the min-cut oracle bound {limit}")
    order = N.topological_order
    pred_mask = [0] * V
    for x, y in N.edges:
        pred_mask[y] |= 1 << x
    is_source = [v in N.sources for v in range(V)]
    is_sink = [v in N.sinks for v in range(V)]
    caps = N.capacities
    weight = [0] * (1 << V)
    best, best_mask = sum(caps) + 1, 0
    for mask in range(1, 1 << V):
        low = mask & -mask
        weight[mask] = weight[mask ^ low] + caps[low.bit_length() - 1]
        if weight[mask] >= best:
            continue
        reach = 0
        ok = True
        for v in order:
            if mask >> v & 1:
                continue
            if is_source[v] or pred_mask[v] & reach:
                if is_sink[v]:
                    ok = False
                    break
                reach |= 1 << v
        if ok:
            best, best_mask = weight[mask], mask
    return best, frozenset(v for v in range(V) if best_mask >> v & 1)


# -- serialization ---------------------------------------------------------

def network_to_dict(N: Network) -> dict:
    return {
        "capacities": [str(c) for c in N.capacities],
        "edges": [list(e) for e in N.edges],
        "labels": list(N.labels),
    }


def network_from_dict(data: dict) -> Network:
    return Network.build([int(c) for c in data["capacities"]], [tuple(e) for e in data.get("edges", [])],
                         data.get("labels", ()))


def load_network(path: str | os.PathLike) -> Network:
    with open(path) as fh:
        return network_from_dict(json.load(fh))


def _fraction_text(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def flow_to_list(f: FlowAssignment) -> list[dict]:
    rows = [{"edge": list(e), "value": _fraction_text(v)} for e, v in sorted(f.values.items())]
    rows += [{"vertex": v, "value": _fraction_text(q)} for v, q in sorted(f.isolated.items())]
    return rows
