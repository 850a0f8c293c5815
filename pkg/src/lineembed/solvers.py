"""Exact feasibility solvers for arbitrary signed graphs.

Two routes: a lexicographic backtracking search over orderings (the small
oracle), and a subset dynamic program over 2^n prefix sets.  The DP rests on
the prefix characterization: an ordering is feasible iff each vertex v is
"good" for the set X of vertices placed before it, meaning

  (a) no already-placed negative neighbour of v keeps a positive neighbour
      outside X union {v}, and
  (b) no unplaced negative neighbour of v (other than v) has a positive
      neighbour inside X.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .core import Ordering, SignedGraph, verify_embedding
from .errors import CapExceededError, GraphError, MembershipError

BRUTE_FORCE_CAP = 10
SUBSET_DP_CAP = 64


@lru_cache(maxsize=4)
def _subset_universe(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(all subsets, subsets sorted by popcount, layer boundaries) for size n.

    Graph-independent, so cached across solver calls; entries are read-only.
    """
    subsets = np.arange(1 << n, dtype=np.int64)
    counts = np.bitwise_count(subsets).astype(np.int64)
    by_count = np.argsort(counts, kind="stable").astype(np.int64)
    bounds = np.searchsorted(counts[by_count], np.arange(n + 2))
    return subsets, by_count, bounds


def is_good(g: SignedGraph, v: int, chosen: Iterable[int]) -> bool:
    """Can v be placed directly after the prefix set `chosen`?

    Raises MembershipError when v is already in the set; GraphError when v
    or a set member is outside 1..n.
    """
    if not 1 <= v <= g.n:
        raise GraphError(f"vertex {v} out of range 1..{g.n}")
    x_mask = 0
    for w in chosen:
        if not 1 <= w <= g.n:
            raise GraphError(f"vertex {w} out of range 1..{g.n}")
        x_mask |= 1 << (w - 1)
    v_bit = 1 << (v - 1)
    if x_mask & v_bit:
        raise MembershipError(f"vertex {v} is already in the chosen set")
    outside = ((1 << g.n) - 1) & ~x_mask & ~v_bit
    pos, neg = g.pos_masks, g.neg_masks

    m = neg[v] & x_mask
    while m:  # placed negative neighbours must have no positive edge outward
        b = m & -m
        m ^= b
        if pos[b.bit_length()] & outside:
            return False
    m = neg[v] & outside
    while m:  # unplaced negative neighbours must have no positive edge inward
        b = m & -m
        m ^= b
        if pos[b.bit_length()] & x_mask:
            return False
    return True


# ---------------------------------------------------------------------------
# Backtracking search over orderings
# ---------------------------------------------------------------------------


def solve_bruteforce(g: SignedGraph, cap: int = BRUTE_FORCE_CAP) -> Optional[Ordering]:
    """Lexicographically first feasible ordering, or None.

    Depth-first over prefixes in ascending vertex order.  A prefix is
    abandoned as soon as its placed vertices contain a violating triple;
    relative order of placed vertices never changes afterwards, so this
    prunes exactly the extensions of infeasible prefixes and the first
    complete leaf is the lexicographic minimum.
    """
    n = g.n
    if n > cap:
        raise CapExceededError(f"n={n} exceeds the brute-force cap {cap}")
    if n == 0:
        return Ordering(())
    pos_adj, neg_adj = g.pos_adj, g.neg_adj
    rank = [0] * (n + 1)  # 0 = unplaced
    neg_after = [0] * (n + 1)  # placed negative neighbours to the right
    seq: list[int] = []

    def extend() -> bool:
        k = len(seq) + 1
        for u in range(1, n + 1):
            if rank[u]:
                continue
            # Left pattern closing at u: a placed positive neighbour before
            # a placed negative neighbour.
            min_pos = n + 1
            for w in pos_adj[u]:
                r = rank[w]
                if r and r < min_pos:
                    min_pos = r
            skip = False
            for w in neg_adj[u]:
                if min_pos < rank[w]:
                    skip = True
                    break
            if skip:
                continue
            # Right pattern closing at u as the far positive endpoint.
            for w in pos_adj[u]:
                if rank[w] and neg_after[w]:
                    skip = True
                    break
            if skip:
                continue
            rank[u] = k
            seq.append(u)
            for w in neg_adj[u]:
                if rank[w] and rank[w] < k:
                    neg_after[w] += 1
            if k == n or extend():
                return True
            for w in neg_adj[u]:
                if rank[w] and rank[w] < k:
                    neg_after[w] -= 1
            seq.pop()
            rank[u] = 0
        return False

    if extend():
        return Ordering.from_seq(seq)
    return None


# ---------------------------------------------------------------------------
# Subset dynamic program
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReachabilityTable:
    """DP table over all subsets of vertices, indexed by bitmask.

    reachable[X] is True when some feasible prefix realizes exactly the set
    X; chosen[X] is then the smallest vertex that can be placed last in such
    a prefix (0 where undefined).
    """

    n: int
    reachable: np.ndarray
    chosen: np.ndarray

    def is_reachable(self, mask: int) -> bool:
        return bool(self.reachable[mask])

    def chosen_vertex(self, mask: int) -> int:
        return int(self.chosen[mask])


def _bad_extension_masks(g: SignedGraph) -> np.ndarray:
    """badmask[X] has bit v-1 set when v (not in X) is NOT good for X.

    Accumulated per witness vertex w over all subsets at once: a placed w
    (in X) with positive neighbours outside X blocks all its negative
    neighbours except the single outside neighbour case, which blocks all
    but that neighbour; an unplaced w with a positive neighbour inside X
    blocks all its negative neighbours.  Bits for v in X are meaningless.
    """
    n = g.n
    size = 1 << n
    subsets = _subset_universe(n)[0]
    bad = np.zeros(size, dtype=np.int64)
    zero = np.int64(0)
    for w in range(1, n + 1):
        nw = np.int64(g.neg_masks[w])
        if nw == 0:
            continue
        pw = np.int64(g.pos_masks[w])
        w_in = (subsets & np.int64(1 << (w - 1))) != 0
        out_w = pw & ~subsets
        inside = (pw & subsets) != 0
        lone = (out_w != 0) & ((out_w & (out_w - 1)) == 0)
        spare = np.where(lone, out_w, zero)
        bad |= np.where(w_in & (out_w != 0), nw & ~spare, zero)
        bad |= np.where(~w_in & inside, nw, zero)
    return bad


def reachability_table(g: SignedGraph, cap: int = SUBSET_DP_CAP) -> ReachabilityTable:
    """Fill the subset DP table layer by layer (increasing popcount)."""
    n = g.n
    if n > cap:
        raise CapExceededError(f"n={n} exceeds the subset DP cap {cap}")
    size = 1 << n
    reachable = np.zeros(size, dtype=bool)
    reachable[0] = True
    chosen = np.zeros(size, dtype=np.int8)
    if n == 0:
        return ReachabilityTable(0, reachable, chosen)

    bad = _bad_extension_masks(g)
    _, by_count, bounds = _subset_universe(n)
    vbits = np.int64(1) << np.arange(n, dtype=np.int64)
    vindex = np.arange(n, dtype=np.int64)

    for k in range(1, n + 1):
        layer = by_count[bounds[k] : bounds[k + 1]]
        member = (layer[:, None] & vbits[None, :]) != 0
        preds = layer[:, None] ^ (layer[:, None] & vbits[None, :])
        ok = member & reachable[preds]
        ok &= ((bad[preds] >> vindex[None, :]) & 1) == 0
        any_ok = ok.any(axis=1)
        hit = layer[any_ok]
        reachable[hit] = True
        chosen[hit] = (ok.argmax(axis=1)[any_ok] + 1).astype(np.int8)
    return ReachabilityTable(n, reachable, chosen)


def solve_subset_dp(g: SignedGraph, cap: int = SUBSET_DP_CAP) -> Optional[Ordering]:
    """Feasible ordering via the subset DP, or None.

    The ordering is reconstructed backwards through chosen[], so at every
    step the smallest eligible vertex is placed last.  The result is
    re-verified before being returned.
    """
    table = reachability_table(g, cap)
    n = g.n
    full = (1 << n) - 1
    if not table.reachable[full]:
        return None
    seq_rev: list[int] = []
    mask = full
    while mask:
        v = int(table.chosen[mask])
        seq_rev.append(v)
        mask ^= 1 << (v - 1)
    ordering = Ordering.from_seq(reversed(seq_rev))
    res = verify_embedding(g, ordering)
    assert res.valid, f"DP ordering failed verification: {res.violation}"
    return ordering
