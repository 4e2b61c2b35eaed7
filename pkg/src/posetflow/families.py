"""Concrete posets: Boolean lattices, set partitions and permutations under refinement.

Ranks follow the picture of ``S_4`` as four copies of ``S_3``: a permutation
with ``c`` cycles sits at rank ``c - 1``, so full cycles are at the bottom and
the identity is the top element.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import SizeLimit, SizeMismatch
from .poset import GradedPoset, build_poset

BOOLEAN_LIMIT = 20
SYMMETRIC_LIMIT = 8
PARTITION_LIMIT = 9
STIRLING_LIMIT = 200


class Permutation:
    """A permutation of ``{1..n}`` stored as its image sequence."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images} is not a permutation of 1..{len(images)}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def from_cycles(cls, text: str, n: int | None = None) -> "Permutation":
        """Parse cycle notation such as ``"(1 4)(2 3)"``; omitted points are fixed."""
        cycles = [[int(t) for t in body.replace(",", " ").split()] for body in re.findall(r"\(([^()]*)\)", text)]
        if re.sub(r"\([^()]*\)", "", text).strip():
            raise ValueError(f"cannot parse cycle notation {text!r}")
        seen = [x for c in cycles for x in c]
        if len(seen) != len(set(seen)):
            raise ValueError(f"repeated point in {text!r}")
        size = max(seen, default=0) if n is None else n
        if seen and (min(seen) < 1 or max(seen) > size):
            raise ValueError(f"point out of range in {text!r}")
        images = list(range(1, size + 1))
        for c in cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                images[a - 1] = b
        return cls(images)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition ``(self * other)(i) = self(other(i))``."""
        if self.n != other.n:
            raise SizeMismatch(f"cannot compose permutations of {self.n} and {other.n} points")
        return Permutation(self.images[j - 1] for j in other.images)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images, 1):
            inv[j - 1] = i
        return Permutation(inv)

    @property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Cycles, each starting at its least point, ordered by least point."""
        seen = [False] * (self.n + 1)
        out = []
        for start in range(1, self.n + 1):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i)
                i = self.images[i - 1]
            out.append(tuple(cyc))
        return tuple(out)

    def cycle_count(self) -> int:
        return len(self.cycles)

    def absolute_length(self) -> int:
        return self.n - self.cycle_count()

    def __str__(self) -> str:
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles)

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r})"


def transposition(n: int, i: int, j: int) -> Permutation:
    images = list(range(1, n + 1))
    images[i - 1], images[j - 1] = j, i
    return Permutation(images)


def absolute_leq(pi: Permutation, sigma: Permutation) -> bool:
    if pi.n != sigma.n:
        raise SizeMismatch(f"permutations of {pi.n} and {sigma.n} points")
    return sigma.absolute_length() == pi.absolute_length() + (pi.inverse() * sigma).absolute_length()


# -- Boolean lattice -------------------------------------------------------

def _subset_label(mask: int, n: int) -> str:
    return "{" + ",".join(str(i + 1) for i in range(n) if mask >> i & 1) + "}"


def boolean_lattice(n: int) -> GradedPoset:
    if not 0 <= n <= BOOLEAN_LIMIT:
        raise SizeLimit(f"boolean lattice needs 0 <= n <= {BOOLEAN_LIMIT}, got {n}")
    size = 1 << n
    covers = [(m, m | (1 << i)) for m in range(size) for i in range(n) if not m >> i & 1]
    return build_poset([_subset_label(m, n) for m in range(size)], covers)


# -- symmetric group under refinement --------------------------------------

def _refinements(images: tuple[int, ...]) -> list[tuple[int, ...]]:
    """All ``pi * (i j)`` with ``i, j`` on a common cycle of ``pi``."""
    out = []
    for cyc in Permutation(images).cycles:
        for i, j in itertools.combinations(cyc, 2):
            new = list(images)
            # (pi * (i j))(i) = pi(j) and vice versa
            new[i - 1], new[j - 1] = images[j - 1], images[i - 1]
            out.append(tuple(new))
    return out


@lru_cache(maxsize=None)
def symmetric_group_refinement(n: int) -> tuple[GradedPoset, tuple[Permutation, ...]]:
    """``S_n`` ordered by refinement, ids in lexicographic order of image sequences."""
    if not 1 <= n <= SYMMETRIC_LIMIT:
        raise SizeLimit(f"symmetric group needs 1 <= n <= {SYMMETRIC_LIMIT}, got {n}")
    perms = list(itertools.permutations(range(1, n + 1)))
    index = {p: i for i, p in enumerate(perms)}
    covers = [(i, index[q]) for i, p in enumerate(perms) for q in _refinements(p)]
    elements = tuple(Permutation(p) for p in perms)
    P = build_poset([str(e) for e in elements], covers)
    assert all(P.rank[i] == e.cycle_count() - 1 for i, e in enumerate(elements))
    return P, elements


def check_absolute_reverse_refinement(n: int) -> tuple[bool, tuple[Permutation, Permutation] | None]:
    """Check that ``pi <=_T sigma`` exactly when ``sigma`` lies below ``pi`` under refinement."""
    if not 1 <= n <= 6:
        raise SizeLimit(f"absolute-order check needs 1 <= n <= 6, got {n}")
    P, elements = symmetric_group_refinement(n)
    for a, pi in enumerate(elements):
        for b, sigma in enumerate(elements):
            if absolute_leq(pi, sigma) != P.leq(b, a):
                return False, (pi, sigma)
    return True, None


# -- partition lattice -----------------------------------------------------

def set_partitions(n: int) -> list[tuple[tuple[int, ...], ...]]:
    """Set partitions of ``1..n`` via restricted growth strings, blocks ordered by minimum."""
    out = []

    def grow(prefix: list[int], top: int) -> None:
        if len(prefix) == n:
            blocks: list[list[int]] = [[] for _ in range(top + 1)]
            for point, b in enumerate(prefix, 1):
                blocks[b].append(point)
            out.append(tuple(tuple(b) for b in blocks))
            return
        for b in range(top + 2):
            prefix.append(b)
            grow(prefix, max(top, b))
            prefix.pop()

    if n == 0:
        return [()]
    grow([0], 0)
    return out


def _partition_label(blocks) -> str:
    sep = "," if any(x > 9 for b in blocks for x in b) else ""
    return "|".join(sep.join(map(str, b)) for b in blocks)


def partition_lattice(n: int) -> GradedPoset:
    """Set partitions with finer below coarser; rank is ``n`` minus the block count."""
    if not 1 <= n <= PARTITION_LIMIT:
        raise SizeLimit(f"partition lattice needs 1 <= n <= {PARTITION_LIMIT}, got {n}")
    parts = set_partitions(n)
    index = {p: i for i, p in enumerate(parts)}
    covers = []
    for i, p in enumerate(parts):
        for a, b in itertools.combinations(range(len(p)), 2):
            merged = [blk for t, blk in enumerate(p) if t not in (a, b)] + [tuple(sorted(p[a] + p[b]))]
            covers.append((i, index[tuple(sorted(merged))]))
    return build_poset([_partition_label(p) for p in parts], covers)


# -- Stirling numbers ------------------------------------------------------

@lru_cache(maxsize=None)
def _stirling_rows(kind: str, n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _stirling_rows(kind, n - 1)
    row = [0] * (n + 1)
    for k in range(1, n + 1):
        left = prev[k - 1]
        right = prev[k] if k <= n - 1 else 0
        # first kind: s(n,k) = (n-1) s(n-1,k) + s(n-1,k-1); second: S(n,k) = k S(n-1,k) + S(n-1,k-1)
        factor = (n - 1) if kind == "first" else k
        row[k] = factor * right + left
    return tuple(row)


def stirling_row(kind: str, n: int) -> list[int]:
    """Unsigned Stirling numbers ``[s(n,0), ..., s(n,n)]`` of the first or second kind."""
    if kind not in ("first", "second"):
        raise ValueError(f"kind must be 'first' or 'second', got {kind!r}")
    if not 0 <= n <= STIRLING_LIMIT:
        raise SizeLimit(f"Stirling rows are tabulated for 0 <= n <= {STIRLING_LIMIT}")
    # fill the cache bottom-up so deep rows do not recurse 200 levels at once
    for m in range(0, n + 1, 50):
        _stirling_rows(kind, m)
    return list(_stirling_rows(kind, n))


@dataclass(frozen=True)
class StirlingTable:
    kind: str
    rows: dict[int, tuple[int, ...]]

    @classmethod
    def build(cls, kind: str, n_max: int) -> "StirlingTable":
        return cls(kind, {n: tuple(stirling_row(kind, n)) for n in range(n_max + 1)})

    def __getitem__(self, nk: tuple[int, int]) -> int:
        n, k = nk
        row = self.rows[n]
        return row[k] if 0 <= k < len(row) else 0


# -- copies of S_n inside S_{n+1} -----------------------------------------

@dataclass(frozen=True)
class CopyDecomposition:
    n: int
    copy_of: tuple[int, ...]
    reduction: tuple[int, ...]
    edge_color: dict[tuple[int, int], str]
    poset: GradedPoset
    elements: tuple[Permutation, ...]

    @property
    def raised(self) -> int:
        return self.n + 1

    def copy_members(self, i: int) -> list[int]:
        return [v for v, c in enumerate(self.copy_of) if c == i]


def reduce_permutation(pi: Permutation) -> Permutation:
    """Delete the largest point ``m`` from its cycle (``pi'(pi^-1(m)) = pi(m)``)."""
    m = pi.n
    images = list(pi.images)
    target = images[m - 1]
    if target != m:
        images[pi.inverse()(m) - 1] = target
    return Permutation(images[: m - 1])


def decompose_copies(n_plus_1: int) -> CopyDecomposition:
    """Split ``S_{n+1}`` into copies by the value ``pi(n+1)`` and colour every cover.

    Blue covers stay inside one copy, red covers meet the raised copy
    (``pi(n+1) = n+1``), gray covers join two different lower copies.
    """
    if not 2 <= n_plus_1 <= 7:
        raise SizeLimit(f"copy decomposition needs 2 <= n+1 <= 7, got {n_plus_1}")
    n = n_plus_1 - 1
    P, elements = symmetric_group_refinement(n_plus_1)
    _, small = symmetric_group_refinement(n) if n >= 1 else (None, ())
    small_index = {e.images: i for i, e in enumerate(small)}
    copy_of = tuple(e(n_plus_1) for e in elements)
    reduction = tuple(small_index[reduce_permutation(e).images] for e in elements)
    raised = n_plus_1
    colors = {}
    for x, y in P.covers:
        cx, cy = copy_of[x], copy_of[y]
        if cx == cy:
            colors[(x, y)] = "blue"
        elif raised in (cx, cy):
            colors[(x, y)] = "red"
        else:
            colors[(x, y)] = "gray"
    return CopyDecomposition(n, copy_of, reduction, colors, P, elements)
