"""Random instance generators and the oracle-equivalence suites behind ``posetflow selftest``."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .flownet import (
    Network,
    brute_force_min_vertex_cut,
    hasse_network,
    max_flow,
    min_flow,
    nmc_bruteforce,
    solve_normalized_flow,
)
from .poset import GradedPoset, brute_force_width, build_poset


def random_graded_poset(rng: random.Random, max_elements: int = 15, max_weight: int = 9) -> GradedPoset:
    n = rng.randint(1, max_elements)
    height = rng.randint(0, min(4, n - 1))
    level = [0] * n
    for v in range(n):
        level[v] = rng.randint(0, height)
    by_level: dict[int, list[int]] = {}
    for v, r in enumerate(level):
        by_level.setdefault(r, []).append(v)
    # compact away empty levels so every non-bottom element can have a lower cover
    ordered = sorted(by_level)
    level = [ordered.index(r) for r in level]
    by_level = {ordered.index(r): vs for r, vs in by_level.items()}
    covers = set()
    density = rng.random()
    for v in range(n):
        r = level[v]
        if r == 0:
            continue
        below = by_level[r - 1]
        covers.add((rng.choice(below), v))
        for u in below:
            if rng.random() < density:
                covers.add((u, v))
    weights = [rng.randint(1, max_weight) for _ in range(n)]
    return build_poset([str(v) for v in range(n)], covers, weights)


def random_dag_network(rng: random.Random, max_vertices: int = 14, max_capacity: int = 9) -> Network:
    n = rng.randint(1, max_vertices)
    p = rng.uniform(0.1, 0.6)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    perm = list(range(n))
    rng.shuffle(perm)
    edges = [(perm[i], perm[j]) for i, j in edges]
    return Network.build([rng.randint(1, max_capacity) for _ in range(n)], edges)


def random_bipartite(rng: random.Random, max_side: int = 10, max_weight: int = 9):
    a, b = rng.randint(1, max_side), rng.randint(1, max_side)
    left = {i: rng.randint(1, max_weight) for i in range(a)}
    right = {a + j: rng.randint(1, max_weight) for j in range(b)}
    p = rng.uniform(0.15, 0.9)
    edges = [(x, y) for x in left for y in right if rng.random() < p]
    return left, right, edges


@dataclass(frozen=True)
class SuiteResult:
    name: str
    trials: int
    failures: int
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0


def width_suite(rng: random.Random, trials: int = 200) -> SuiteResult:
    bad = 0
    first = ""
    for t in range(trials):
        P = random_graded_poset(rng)
        flow = min_flow(hasse_network(P)).value
        oracle = brute_force_width(P).total_weight
        if flow != oracle:
            bad += 1
            first = first or f"trial {t}: min_flow {flow} != brute force {oracle}"
    return SuiteResult("min_flow = brute_force_width", trials, bad, first)


def cut_suite(rng: random.Random, trials: int = 200) -> SuiteResult:
    bad = 0
    first = ""
    for t in range(trials):
        N = random_dag_network(rng)
        flow = max_flow(N).value
        oracle, _ = brute_force_min_vertex_cut(N)
        if flow != oracle:
            bad += 1
            first = first or f"trial {t}: max_flow {flow} != min cut {oracle}"
    return SuiteResult("max_flow = exhaustive min vertex cut", trials, bad, first)


def duality_suite(rng: random.Random, trials: int = 200) -> tuple[SuiteResult, int]:
    """Returns the suite result and how many instances were feasible."""
    bad = 0
    feasible = 0
    first = ""
    for t in range(trials):
        left, right, edges = random_bipartite(rng)
        flow_ok = solve_normalized_flow(left, right, edges).feasible
        nmc_ok, _ = nmc_bruteforce(left, right, edges)
        feasible += flow_ok
        if flow_ok != nmc_ok:
            bad += 1
            first = first or f"trial {t}: normalized flow {flow_ok} but NMC {nmc_ok}"
    return SuiteResult("normalized flow <=> NMC", trials, bad, first), feasible


def run_selftest(seed: int = 0, trials: int = 200) -> list[SuiteResult]:
    rng = random.Random(seed)
    duality, _ = duality_suite(rng, trials)
    return [width_suite(rng, trials), cut_suite(rng, trials), duality]
