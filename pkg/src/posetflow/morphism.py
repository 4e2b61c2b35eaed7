"""Flow morphisms between networks and the two collapsing maps out of ``S_{n+1}``.

A vertex map ``phi: M -> N`` is a flow morphism when

1. it is a graph epimorphism: onto on vertices and on edges, and each domain
   edge either lands on a codomain edge or collapses onto one vertex;
2. it pulls the sources (sinks) of ``N`` back to exactly the sources (sinks) of ``M``;
3. every fiber has total capacity equal to its image's capacity;
4. for every codomain edge ``(u, v)`` the domain edges from fiber(u) to
   fiber(v) carry a normalized flow.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MorphismUnverified, NotAntichain, SizeLimit
from .families import decompose_copies, stirling_row
from .flownet import Network, hasse_network, solve_normalized_flow
from .poset import GradedPoset, build_poset, levels


@dataclass
class MorphismReport:
    epimorphism: list[str] = field(default_factory=list)
    terminals: list[str] = field(default_factory=list)
    capacity: list[str] = field(default_factory=list)
    edge_flows: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.epimorphism or self.terminals or self.capacity or self.edge_flows)

    def axioms(self) -> dict[str, bool]:
        return {
            "graph epimorphism": not self.epimorphism,
            "sources and sinks": not self.terminals,
            "capacity preserving": not self.capacity,
            "normalized edge fibers": not self.edge_flows,
        }

    def failures(self) -> list[str]:
        return self.epimorphism + self.terminals + self.capacity + self.edge_flows


@dataclass
class FlowMorphism:
    domain: Network
    codomain: Network
    vertex_map: tuple[int, ...]
    report: MorphismReport | None = None

    def fiber(self, v: int) -> list[int]:
        return [x for x, y in enumerate(self.vertex_map) if y == v]

    def fibers(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.codomain.vertex_count)]
        for x, y in enumerate(self.vertex_map):
            out[y].append(x)
        return out


def verify_flow_morphism(phi: FlowMorphism) -> MorphismReport:
    """Check all four axioms and attach the report to ``phi``."""
    M, N, f = phi.domain, phi.codomain, phi.vertex_map
    report = MorphismReport()
    if len(f) != M.vertex_count:
        raise ValueError(f"vertex map has {len(f)} entries for {M.vertex_count} domain vertices")
    for x, y in enumerate(f):
        if not 0 <= y < N.vertex_count:
            raise ValueError(f"vertex {x} maps outside the codomain")
    fibers = phi.fibers()

    codomain_edges = set(N.edges)
    edge_fibers: dict[tuple[int, int], list[tuple[int, int]]] = {e: [] for e in N.edges}
    for x, y in M.edges:
        a, b = f[x], f[y]
        if a == b:
            continue
        if (a, b) in codomain_edges:
            edge_fibers[(a, b)].append((x, y))
        else:
            report.epimorphism.append(f"domain edge {M.labels[x]} -> {M.labels[y]} straddles non-adjacent {a} -> {b}")
    for v, fib in enumerate(fibers):
        if not fib:
            report.epimorphism.append(f"codomain vertex {N.labels[v]} has an empty fiber")
    for e, pre in edge_fibers.items():
        if not pre:
            report.epimorphism.append(f"codomain edge {e} has no preimage edge")

    src = {x for x in range(M.vertex_count) if f[x] in N.sources}
    snk = {x for x in range(M.vertex_count) if f[x] in N.sinks}
    if src != set(M.sources):
        report.terminals.append(f"preimage of sources differs from domain sources by {sorted(src ^ M.sources)[:5]}")
    if snk != set(M.sinks):
        report.terminals.append(f"preimage of sinks differs from domain sinks by {sorted(snk ^ M.sinks)[:5]}")

    for v, fib in enumerate(fibers):
        total = M.weight(fib)
        if total != N.capacities[v]:
            report.capacity.append(f"fiber of {N.labels[v]} weighs {total}, capacity is {N.capacities[v]}")

    for (a, b), pre in edge_fibers.items():
        if not pre:
            continue
        left = {x: M.capacities[x] for x in fibers[a]}
        right = {y: M.capacities[y] for y in fibers[b]}
        res = solve_normalized_flow(left, right, pre)
        if not res.feasible:
            report.edge_flows.append(f"edge {N.labels[a]} -> {N.labels[b]} has no normalized flow")
    phi.report = report
    return report


def identity_morphism(N: Network) -> FlowMorphism:
    return FlowMorphism(N, N, tuple(range(N.vertex_count)))


def compose(phi: FlowMorphism, psi: FlowMorphism) -> FlowMorphism:
    """``psi`` after ``phi``; the result is unverified."""
    if phi.codomain != psi.domain:
        raise ValueError("codomain of the first map is not the domain of the second")
    return FlowMorphism(phi.domain, psi.codomain, tuple(psi.vertex_map[y] for y in phi.vertex_map))


def network_poset(N: Network) -> GradedPoset:
    """View a network as a graded poset (fails with NotGraded when it is not one)."""
    return build_poset(N.labels, N.edges, N.capacities)


def collapse_to_chain(P: GradedPoset | Network) -> tuple[Network, FlowMorphism]:
    """Send every element to its rank; the chain carries the level weights."""
    if isinstance(P, Network):
        domain, P = P, network_poset(P)
    else:
        domain = hasse_network(P)
    weights = [w for _, _, w in levels(P)]
    chain = Network.build(weights, [(r, r + 1) for r in range(len(weights) - 1)],
                          [f"rank {r}" for r in range(len(weights))])
    return chain, FlowMorphism(domain, chain, tuple(P.rank))


@dataclass(frozen=True)
class TwoChain:
    n: int
    network: Network

    def left(self, k: int) -> int:
        """Vertex of lower-copy permutations with ``k`` cycles, ``1 <= k <= n``."""
        return _left(self.n, k)

    def right(self, k: int) -> int:
        """Vertex of raised-copy permutations with ``k`` cycles, ``2 <= k <= n + 1``."""
        return _right(self.n, k)


def _left(n: int, k: int) -> int:
    return k - 1


def _right(n: int, k: int) -> int:
    return n + k - 2


def two_chain_network(n: int) -> TwoChain:
    """Left chain weights ``n s(n,k)``, right chain weights ``s(n,k-1)``."""
    s = stirling_row("first", n)
    caps = [n * s[k] for k in range(1, n + 1)] + [s[k - 1] for k in range(2, n + 2)]
    labels = [f"L{k}" for k in range(1, n + 1)] + [f"R{k}" for k in range(2, n + 2)]
    edges = [(_left(n, k), _left(n, k + 1)) for k in range(1, n)]
    edges += [(_right(n, k), _right(n, k + 1)) for k in range(2, n + 1)]
    edges += [(_left(n, k), _right(n, k + 1)) for k in range(1, n + 1)]
    return TwoChain(n, Network.build(caps, edges, labels))


def collapse_to_two_chain(n: int) -> tuple[TwoChain, FlowMorphism]:
    """Collapse the ``n`` lower copies of ``S_n`` inside ``S_{n+1}`` onto one chain."""
    if not 1 <= n <= 6:
        raise SizeLimit(f"two-chain collapse needs 2 <= n+1 <= 7, got n+1 = {n + 1}")
    dec = decompose_copies(n + 1)
    tc = two_chain_network(n)
    vmap = []
    for v, e in enumerate(dec.elements):
        k = e.cycle_count()
        vmap.append(tc.right(k) if dec.copy_of[v] == n + 1 else tc.left(k))
    return tc, FlowMorphism(hasse_network(dec.poset), tc.network, tuple(vmap))


def pull_back_antichain(phi: FlowMorphism, A) -> frozenset[int]:
    """Union of the fibers over a codomain antichain ``A``."""
    if phi.report is None or not phi.report.ok:
        raise MorphismUnverified("verify_flow_morphism must pass before pulling back antichains")
    A = frozenset(A)
    ok, pair = phi.codomain.is_antichain(A)
    if not ok:
        raise NotAntichain(f"codomain vertices {pair} are comparable")
    pre = frozenset(x for x, y in enumerate(phi.vertex_map) if y in A)
    ok, pair = phi.domain.is_antichain(pre)
    assert ok, f"preimage is not an antichain: {pair}"
    assert phi.domain.weight(pre) == phi.codomain.weight(A)
    return pre


def heaviest_vertex(N: Network) -> int:
    return max(range(N.vertex_count), key=lambda v: (N.capacities[v], -v))
