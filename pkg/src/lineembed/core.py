"""Signed graphs and line-embedding verification.

A signed graph has vertices 1..n and two disjoint sets of unordered edges,
positive and negative.  An ordering pi of the vertices is a feasible line
embedding when for no vertex u there are neighbours u1, u2 with

    u1 <pi u2 <pi u,  u1u positive,  u2u negative,

nor the mirrored pattern u1 >pi u2 >pi u.  Equivalently: walking away from
any vertex in either direction, its positive neighbours are never separated
from it by one of its negative neighbours.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional

import numpy as np

from .errors import GraphError, OrderingError

Edge = tuple[int, int]


def _checked_pair(u: int, v: int, n: int, sign: str) -> Edge:
    if not (1 <= u <= n and 1 <= v <= n):
        raise GraphError(f"{sign} edge ({u}, {v}) out of range 1..{n}")
    if u == v:
        raise GraphError(f"{sign} edge ({u}, {v}) is a loop")
    return (u, v) if u < v else (v, u)


def _pairs_array(pairs: tuple[Edge, ...]) -> np.ndarray:
    if not pairs:
        return np.empty((0, 2), dtype=np.int64)
    return np.asarray(pairs, dtype=np.int64)


@dataclass(frozen=True)
class Graph:
    """Plain undirected simple graph on vertices 1..n."""

    n: int
    edges: frozenset[Edge]

    @cached_property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        """Sorted adjacency lists, index 0 unused."""
        nbrs: list[list[int]] = [[] for _ in range(self.n + 1)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(b)) for b in nbrs)

    @property
    def m(self) -> int:
        return len(self.edges)


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    if n < 0:
        raise GraphError(f"vertex count {n} is negative")
    seen: set[Edge] = set()
    for u, v in edges:
        e = _checked_pair(u, v, n, "graph")
        if e in seen:
            raise GraphError(f"duplicate edge ({e[0]}, {e[1]})")
        seen.add(e)
    return Graph(n, frozenset(seen))


@dataclass(frozen=True)
class SignedGraph:
    """Signed graph: disjoint positive and negative edge sets on 1..n.

    Construct through build_signed_graph, which validates ranges, loops,
    duplicates and sign overlap.
    """

    n: int
    pos: frozenset[Edge]
    neg: frozenset[Edge]

    @property
    def m_pos(self) -> int:
        return len(self.pos)

    @property
    def m_neg(self) -> int:
        return len(self.neg)

    @cached_property
    def pos_edges(self) -> tuple[Edge, ...]:
        """Positive edges in sorted order (canonical listing)."""
        return tuple(sorted(self.pos))

    @cached_property
    def neg_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.neg))

    @cached_property
    def pos_adj(self) -> tuple[tuple[int, ...], ...]:
        return _adjacency(self.n, self.pos)

    @cached_property
    def neg_adj(self) -> tuple[tuple[int, ...], ...]:
        return _adjacency(self.n, self.neg)

    @cached_property
    def pos_masks(self) -> tuple[int, ...]:
        """Per-vertex bitmask of positive neighbours (bit w-1), index 0 unused."""
        return _masks(self.n, self.pos)

    @cached_property
    def neg_masks(self) -> tuple[int, ...]:
        return _masks(self.n, self.neg)

    @cached_property
    def pos_array(self) -> np.ndarray:
        """Positive edges as an (m, 2) int64 array in canonical order."""
        return _pairs_array(self.pos_edges)

    @cached_property
    def neg_array(self) -> np.ndarray:
        return _pairs_array(self.neg_edges)


def _adjacency(n: int, edges: frozenset[Edge]) -> tuple[tuple[int, ...], ...]:
    nbrs: list[list[int]] = [[] for _ in range(n + 1)]
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    return tuple(tuple(sorted(b)) for b in nbrs)


def _masks(n: int, edges: frozenset[Edge]) -> tuple[int, ...]:
    masks = [0] * (n + 1)
    for u, v in edges:
        masks[u] |= 1 << (v - 1)
        masks[v] |= 1 << (u - 1)
    return tuple(masks)


def build_signed_graph(
    n: int,
    positive: Iterable[tuple[int, int]],
    negative: Iterable[tuple[int, int]],
) -> SignedGraph:
    """Validate and build a signed graph.

    Raises GraphError on endpoints outside 1..n, loops, duplicated pairs
    within one sign, or a pair carrying both signs.
    """
    if n < 0:
        raise GraphError(f"vertex count {n} is negative")
    pos: set[Edge] = set()
    for u, v in positive:
        e = _checked_pair(u, v, n, "positive")
        if e in pos:
            raise GraphError(f"duplicate positive edge ({e[0]}, {e[1]})")
        pos.add(e)
    neg: set[Edge] = set()
    for u, v in negative:
        e = _checked_pair(u, v, n, "negative")
        if e in neg:
            raise GraphError(f"duplicate negative edge ({e[0]}, {e[1]})")
        if e in pos:
            raise GraphError(f"edge ({e[0]}, {e[1]}) appears with both signs")
        neg.add(e)
    return SignedGraph(n, frozenset(pos), frozenset(neg))


def is_complete(g: SignedGraph) -> bool:
    """True when every vertex pair carries exactly one sign."""
    return g.m_pos + g.m_neg == g.n * (g.n - 1) // 2


def positive_part(g: SignedGraph) -> Graph:
    """The undirected graph formed by the positive edges alone."""
    return Graph(g.n, g.pos)


# ---------------------------------------------------------------------------
# Orderings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ordering:
    """A total order of 1..n, stored as the sequence of vertices by rank."""

    seq: tuple[int, ...]

    @staticmethod
    def from_seq(vertices: Iterable[int]) -> "Ordering":
        seq = tuple(vertices)
        if sorted(seq) != list(range(1, len(seq) + 1)):
            raise OrderingError(
                f"sequence {seq} is not a permutation of 1..{len(seq)}"
            )
        return Ordering(seq)

    @cached_property
    def position(self) -> dict[int, int]:
        """Vertex -> rank, ranks 1..n."""
        return {v: i + 1 for i, v in enumerate(self.seq)}

    @cached_property
    def rank_array(self) -> np.ndarray:
        """rank_array[v] = rank of v; index 0 unused (0)."""
        rank = np.zeros(len(self.seq) + 1, dtype=np.int64)
        rank[list(self.seq)] = np.arange(1, len(self.seq) + 1)
        return rank

    def __len__(self) -> int:
        return len(self.seq)

    def __iter__(self) -> Iterator[int]:
        return iter(self.seq)

    def reversed(self) -> "Ordering":
        return Ordering(tuple(reversed(self.seq)))


@dataclass(frozen=True)
class Violation:
    """Witness triple: u1 <pi u2 <pi u on side 'left' (mirrored on 'right'),
    with u1u positive and u2u negative."""

    u1: int
    u2: int
    u: int
    side: str  # "left" or "right"


@dataclass(frozen=True)
class VerificationResult:
    violation: Optional[Violation] = None

    @property
    def valid(self) -> bool:
        return self.violation is None

    def __bool__(self) -> bool:
        return self.valid


VALID = VerificationResult()


def verify_embedding(g: SignedGraph, ordering: Ordering) -> VerificationResult:
    """Check the two embedding conditions for every vertex.

    Decision runs in O(n + m) array passes: a violation on the left of u
    exists iff some positive neighbour of u sits strictly left of some
    negative neighbour of u, both left of u, i.e. iff
    min rank(positive left nbr) < max rank(negative left nbr); mirrored on
    the right.  On failure, returns the first violation ordered by vertex u,
    then side (left before right), then u2, then u1.
    """
    if len(ordering) != g.n:
        raise OrderingError(
            f"ordering covers {len(ordering)} vertices, graph has {g.n}"
        )
    n = g.n
    if n == 0:
        return VALID

    rank = ordering.rank_array
    hi = np.int64(n + 1)

    def _side_extremes(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        # For each vertex: min rank among its left neighbours in arr,
        # max rank among its right neighbours in arr.
        centers = np.concatenate([arr[:, 0], arr[:, 1]])
        others = np.concatenate([arr[:, 1], arr[:, 0]])
        c_rank = rank[centers]
        o_rank = rank[others]
        left = o_rank < c_rank
        min_left = np.full(n + 1, hi, dtype=np.int64)
        max_right = np.zeros(n + 1, dtype=np.int64)
        np.minimum.at(min_left, centers[left], o_rank[left])
        np.maximum.at(max_right, centers[~left], o_rank[~left])
        return min_left, max_right

    min_pos_left, max_pos_right = _side_extremes(g.pos_array)
    # For the negative side the roles flip: need max on the left, min on right.
    max_neg_left = np.zeros(n + 1, dtype=np.int64)
    min_neg_right = np.full(n + 1, hi, dtype=np.int64)
    narr = g.neg_array
    if narr.shape[0]:
        centers = np.concatenate([narr[:, 0], narr[:, 1]])
        others = np.concatenate([narr[:, 1], narr[:, 0]])
        left = rank[others] < rank[centers]
        np.maximum.at(max_neg_left, centers[left], rank[others][left])
        np.minimum.at(min_neg_right, centers[~left], rank[others][~left])

    left_bad = min_pos_left < max_neg_left
    right_bad = max_pos_right > min_neg_right
    bad = left_bad | right_bad
    bad[0] = False
    if not bad.any():
        return VALID

    u = int(np.argmax(bad))
    side = "left" if left_bad[u] else "right"
    return VerificationResult(_first_violation(g, rank, u, side))


def _first_violation(
    g: SignedGraph, rank: np.ndarray, u: int, side: str
) -> Violation:
    """Smallest u2 then u1 (by vertex id) witnessing u's violation."""
    ru = rank[u]
    if side == "left":
        best_pos = min(rank[w] for w in g.pos_adj[u] if rank[w] < ru)
        u2 = next(
            w for w in g.neg_adj[u] if best_pos < rank[w] < ru
        )
        u1 = next(w for w in g.pos_adj[u] if rank[w] < rank[u2])
    else:
        best_pos = max(rank[w] for w in g.pos_adj[u] if rank[w] > ru)
        u2 = next(
            w for w in g.neg_adj[u] if ru < rank[w] < best_pos
        )
        u1 = next(w for w in g.pos_adj[u] if rank[w] > rank[u2])
    return Violation(u1=int(u1), u2=int(u2), u=u, side=side)
