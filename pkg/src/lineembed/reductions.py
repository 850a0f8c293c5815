"""Reduction chain: CNF satisfiability to set splitting to acyclic digraph
partition to signed-graph line embedding.

Each stage has a deterministic instance translator, a forward certificate
map, a backward lift, and a verifier, so feasibility evidence can be pushed
all the way down the chain and pulled back up.  Gadget vertex numbering is
fixed (documented per translator) and identical inputs always produce
identical gadgets.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import Ordering, SignedGraph, build_signed_graph, verify_embedding
from .errors import CapExceededError, ReductionError, SelfLoopError

SPLITTER_CAP = 20
ADP_CAP = 20


# ---------------------------------------------------------------------------
# Instance types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CnfFormula:
    """CNF with clauses of 1..3 literals over variables 1..num_vars."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]


def build_cnf(num_vars: int, clauses: Iterable[Sequence[int]]) -> CnfFormula:
    if num_vars < 0:
        raise ReductionError(f"variable count {num_vars} is negative")
    out = []
    for idx, clause in enumerate(clauses, start=1):
        lits = tuple(clause)
        if not 1 <= len(lits) <= 3:
            raise ReductionError(
                f"clause {idx} has {len(lits)} literals, want 1..3"
            )
        seen = set()
        for lit in lits:
            var = abs(lit)
            if lit == 0 or var > num_vars:
                raise ReductionError(f"clause {idx} has bad literal {lit}")
            if lit in seen:
                raise ReductionError(f"clause {idx} repeats literal {lit}")
            if -lit in seen:
                raise ReductionError(
                    f"clause {idx} contains complementary literals {lit}, {-lit}"
                )
            seen.add(lit)
        out.append(lits)
    return CnfFormula(num_vars, tuple(out))


@dataclass(frozen=True)
class Assignment:
    """Truth values for variables 1..n; values[i] belongs to variable i+1."""

    values: tuple[bool, ...]

    def value(self, var: int) -> bool:
        return self.values[var - 1]


def eval_cnf(cnf: CnfFormula, assignment: Assignment) -> bool:
    if len(assignment.values) != cnf.num_vars:
        raise ReductionError(
            f"assignment covers {len(assignment.values)} variables, "
            f"formula has {cnf.num_vars}"
        )
    return all(
        any((lit > 0) == assignment.value(abs(lit)) for lit in clause)
        for clause in cnf.clauses
    )


@dataclass(frozen=True)
class SetSystem:
    """Family of nonempty subsets of 1..universe_size, order-preserving.

    `special` optionally marks one distinguished element.
    """

    universe_size: int
    sets: tuple[tuple[int, ...], ...]
    special: Optional[int] = None


def build_set_system(
    universe_size: int,
    sets: Iterable[Sequence[int]],
    special: Optional[int] = None,
) -> SetSystem:
    if universe_size < 0:
        raise ReductionError(f"universe size {universe_size} is negative")
    out = []
    for idx, members in enumerate(sets, start=1):
        elems = tuple(sorted(members))
        if not elems:
            raise ReductionError(f"set {idx} is empty")
        if len(set(elems)) != len(elems):
            raise ReductionError(f"set {idx} repeats an element")
        for e in elems:
            if not 1 <= e <= universe_size:
                raise ReductionError(
                    f"set {idx} element {e} out of range 1..{universe_size}"
                )
        out.append(elems)
    if special is not None and not 1 <= special <= universe_size:
        raise ReductionError(f"special element {special} out of range")
    return SetSystem(universe_size, tuple(out), special)


@dataclass(frozen=True)
class SplitterSolution:
    chosen: frozenset[int]


@dataclass(frozen=True)
class Digraph:
    """Directed graph on 1..n; arc order is significant and preserved.

    Self-loops are allowed, duplicate arcs are not.
    """

    n: int
    arcs: tuple[tuple[int, int], ...]

    def successors(self) -> tuple[tuple[int, ...], ...]:
        succ: list[list[int]] = [[] for _ in range(self.n + 1)]
        for a, b in self.arcs:
            succ[a].append(b)
        return tuple(tuple(s) for s in succ)


def build_digraph(n: int, arcs: Iterable[tuple[int, int]]) -> Digraph:
    if n < 0:
        raise ReductionError(f"vertex count {n} is negative")
    seen = set()
    out = []
    for a, b in arcs:
        if not (1 <= a <= n and 1 <= b <= n):
            raise ReductionError(f"arc ({a}, {b}) out of range 1..{n}")
        if (a, b) in seen:
            raise ReductionError(f"duplicate arc ({a}, {b})")
        seen.add((a, b))
        out.append((a, b))
    return Digraph(n, tuple(out))


@dataclass(frozen=True)
class Partition:
    """Two-part partition of 1..n (part2 is the complement of part1)."""

    part1: frozenset[int]
    part2: frozenset[int]


def build_partition(n: int, part1: Iterable[int]) -> Partition:
    p1 = frozenset(part1)
    for v in p1:
        if not 1 <= v <= n:
            raise ReductionError(f"vertex {v} out of range 1..{n}")
    return Partition(p1, frozenset(range(1, n + 1)) - p1)


# ---------------------------------------------------------------------------
# Verifiers
# ---------------------------------------------------------------------------


def unsplit_set_index(sys: SetSystem, x: SplitterSolution) -> Optional[int]:
    """1-based index of the first set missed by X, or None if all split."""
    for e in x.chosen:
        if not 1 <= e <= sys.universe_size:
            raise ReductionError(
                f"chosen element {e} out of range 1..{sys.universe_size}"
            )
    chosen = x.chosen
    for idx, members in enumerate(sys.sets, start=1):
        hit = sum(1 for e in members if e in chosen)
        if hit == 0 or hit == len(members):
            return idx
    return None


def verify_setsplitting(sys: SetSystem, x: SplitterSolution) -> bool:
    """Every set must contain a chosen and a non-chosen element."""
    return unsplit_set_index(sys, x) is None


def _kahn_cycle(vertices: frozenset[int], digraph: Digraph) -> Optional[list[int]]:
    """Vertices of some cycle inside the induced sub-digraph, or None.

    Queue-based topological elimination; every vertex that survives keeps an
    in-neighbour among the survivors, so a backward walk from any survivor
    must revisit a vertex and close a cycle.  A self-loop is a cycle of
    length one.
    """
    succ: dict[int, list[int]] = {v: [] for v in vertices}
    pred: dict[int, list[int]] = {v: [] for v in vertices}
    indeg = {v: 0 for v in vertices}
    for a, b in digraph.arcs:
        if a in vertices and b in vertices:
            succ[a].append(b)
            pred[b].append(a)
            indeg[b] += 1
    queue = [v for v in vertices if indeg[v] == 0]
    removed = 0
    while queue:
        v = queue.pop()
        removed += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if removed == len(vertices):
        return None
    rest = {v for v in vertices if indeg[v] > 0}
    walk = [min(rest)]
    seen_at = {walk[0]: 0}
    while True:
        nxt = next(w for w in pred[walk[-1]] if w in rest)
        if nxt in seen_at:
            return list(reversed(walk[seen_at[nxt] :]))
        seen_at[nxt] = len(walk)
        walk.append(nxt)


def adp_violation(digraph: Digraph, part: Partition) -> Optional[tuple[int, list[int]]]:
    """(part number, cycle vertices) for the first cyclic part, or None."""
    if part.part1 | part.part2 != frozenset(range(1, digraph.n + 1)) or (
        part.part1 & part.part2
    ):
        raise ReductionError("parts do not partition the digraph's vertices")
    cyc = _kahn_cycle(part.part1, digraph)
    if cyc is not None:
        return (1, cyc)
    cyc = _kahn_cycle(part.part2, digraph)
    if cyc is not None:
        return (2, cyc)
    return None


def verify_adp(digraph: Digraph, part: Partition) -> bool:
    """Both induced sub-digraphs must be acyclic."""
    return adp_violation(digraph, part) is None


# ---------------------------------------------------------------------------
# Brute-force solvers (oracles at desk scale)
# ---------------------------------------------------------------------------


def solve_setsplitting_bruteforce(
    sys: SetSystem, cap: int = SPLITTER_CAP
) -> Optional[SplitterSolution]:
    """First splitter in ascending bitmask order, or None."""
    n = sys.universe_size
    if n > cap:
        raise CapExceededError(f"universe size {n} exceeds cap {cap}")
    set_masks = [
        (sum(1 << (e - 1) for e in members), len(members))
        for members in sys.sets
    ]
    for mask in range(1 << n):
        ok = True
        for smask, size in set_masks:
            hit = (mask & smask).bit_count()
            if hit == 0 or hit == size:
                ok = False
                break
        if ok:
            return SplitterSolution(
                frozenset(v + 1 for v in range(n) if mask >> v & 1)
            )
    return None


def solve_adp_bruteforce(
    digraph: Digraph, cap: int = ADP_CAP
) -> Optional[Partition]:
    """Exhaustive backtracking over part assignments.

    Vertices are assigned in index order, part 1 tried first, and a branch
    is cut as soon as the partly-built part contains a directed cycle (the
    cycle persists in every completion, so nothing feasible is lost).  With
    part 1 preferred, an arcless digraph yields part1 = V.
    """
    n = digraph.n
    if n > cap:
        raise CapExceededError(f"n={n} exceeds cap {cap}")
    succ: list[list[int]] = [[] for _ in range(n + 1)]
    for a, b in digraph.arcs:
        succ[a].append(b)

    side = [0] * (n + 1)  # 0 unassigned, else 1 or 2

    def creates_cycle(v: int, p: int) -> bool:
        # Path from a successor of v back to v inside part p implies a cycle
        # through v among assigned vertices.
        stack = [w for w in succ[v] if side[w] == p or w == v]
        if v in stack:
            return True  # self-loop
        seen = set()
        while stack:
            w = stack.pop()
            if w == v:
                return True
            if w in seen:
                continue
            seen.add(w)
            stack.extend(x for x in succ[w] if side[x] == p or x == v)
        return False

    def assign(v: int) -> bool:
        if v > n:
            return True
        for p in (1, 2):
            if not creates_cycle(v, p):
                side[v] = p
                if assign(v + 1):
                    return True
                side[v] = 0
        return False

    if not assign(1):
        return None
    part1 = frozenset(v for v in range(1, n + 1) if side[v] == 1)
    return Partition(part1, frozenset(range(1, n + 1)) - part1)


# ---------------------------------------------------------------------------
# Stage 1: CNF -> set splitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SatToSsMapping:
    """Element numbering: literal +i -> 2i-1, -i -> 2i, special -> 2n+1.

    Carries the source clauses so lifted assignments can be checked."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    special: int
    set_origins: tuple[tuple[str, int], ...]  # ("var", i) or ("clause", j)

    def element_of(self, lit: int) -> int:
        return 2 * abs(lit) - 1 if lit > 0 else 2 * abs(lit)

    def literal_of(self, element: int) -> int:
        var = (element + 1) // 2
        return var if element % 2 else -var

    def formula(self) -> CnfFormula:
        return CnfFormula(self.num_vars, self.clauses)


def sat_to_setsplitting(cnf: CnfFormula) -> tuple[SetSystem, SatToSsMapping]:
    """Per-variable pair sets plus per-clause sets through a shared special
    element.  |U| = 2n+1 and total membership is 2n + sum(|C|+1)."""
    n = cnf.num_vars
    special = 2 * n + 1
    mapping = SatToSsMapping(
        num_vars=n,
        clauses=cnf.clauses,
        special=special,
        set_origins=tuple(
            [("var", i) for i in range(1, n + 1)]
            + [("clause", j) for j in range(1, len(cnf.clauses) + 1)]
        ),
    )
    sets: list[tuple[int, ...]] = [
        (2 * i - 1, 2 * i) for i in range(1, n + 1)
    ]
    for clause in cnf.clauses:
        members = sorted({mapping.element_of(lit) for lit in clause} | {special})
        sets.append(tuple(members))
    sys = build_set_system(special, sets, special=special)
    assert sys.universe_size == 2 * n + 1
    assert sum(len(s) for s in sys.sets) == 2 * n + sum(
        len(c) + 1 for c in cnf.clauses
    )
    return sys, mapping


def sat_solution_to_setsplitting(
    assignment: Assignment, mapping: SatToSsMapping
) -> SplitterSolution:
    """X = elements of the literals made true; asserts X splits the gadget."""
    cnf = mapping.formula()
    if not eval_cnf(cnf, assignment):
        raise ReductionError("assignment does not satisfy the formula")
    chosen = frozenset(
        mapping.element_of(i if assignment.value(i) else -i)
        for i in range(1, mapping.num_vars + 1)
    )
    x = SplitterSolution(chosen)
    sys, _ = sat_to_setsplitting(cnf)
    assert verify_setsplitting(sys, x), "true-literal set fails to split"
    return x


def lift_setsplitting_to_sat(
    x: SplitterSolution, mapping: SatToSsMapping
) -> Assignment:
    """Complement away the special element, then read variables off X."""
    chosen = set(x.chosen)
    universe = set(range(1, 2 * mapping.num_vars + 2))
    if mapping.special in chosen:
        chosen = universe - chosen
    values = []
    for i in range(1, mapping.num_vars + 1):
        pos_in = (2 * i - 1) in chosen
        neg_in = (2 * i) in chosen
        if pos_in == neg_in:
            raise ReductionError(
                f"splitter does not separate the pair set of variable {i}"
            )
        values.append(pos_in)
    assignment = Assignment(tuple(values))
    assert eval_cnf(mapping.formula(), assignment), "lifted assignment fails"
    return assignment


# ---------------------------------------------------------------------------
# Stage 2: set splitting -> acyclic digraph partition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SsToAdpMapping:
    """d_u = u for u in 1..|U|; membership vertices follow in (set index,
    element) lexicographic order."""

    universe_size: int
    c_of: dict[tuple[int, int], int]  # (set index, element) -> vertex

    def sets(self) -> tuple[tuple[int, ...], ...]:
        grouped: dict[int, list[int]] = {}
        for (set_idx, elem) in self.c_of:
            grouped.setdefault(set_idx, []).append(elem)
        return tuple(
            tuple(sorted(grouped[idx])) for idx in sorted(grouped)
        )

    def gadget_digraph(self) -> Digraph:
        sys = build_set_system(self.universe_size, self.sets())
        return setsplitting_to_adp(sys)[0]


def setsplitting_to_adp(sys: SetSystem) -> tuple[Digraph, SsToAdpMapping]:
    """One element vertex per universe member, one membership vertex per
    (set, element); each set's membership vertices form a directed cycle in
    ascending element order (a singleton gives a self-loop), and every
    membership vertex exchanges arcs with its element vertex.

    |V| = |U| + total membership, |A| = 3 * total membership.
    """
    u_count = sys.universe_size
    c_of: dict[tuple[int, int], int] = {}
    nxt = u_count + 1
    for set_idx, members in enumerate(sys.sets, start=1):
        for elem in members:  # members are stored ascending
            c_of[(set_idx, elem)] = nxt
            nxt += 1
    arcs: list[tuple[int, int]] = []
    for set_idx, members in enumerate(sys.sets, start=1):
        ring = [c_of[(set_idx, e)] for e in members]
        for i, c in enumerate(ring):
            arcs.append((c, ring[(i + 1) % len(ring)]))
    for elem in range(1, u_count + 1):
        for set_idx, members in enumerate(sys.sets, start=1):
            if (set_idx, elem) in c_of:
                c = c_of[(set_idx, elem)]
                arcs.append((elem, c))
                arcs.append((c, elem))
    digraph = build_digraph(nxt - 1, arcs)
    total = sum(len(s) for s in sys.sets)
    assert digraph.n == u_count + total
    assert len(digraph.arcs) == 3 * total
    return digraph, SsToAdpMapping(universe_size=u_count, c_of=c_of)


def setsplitting_solution_to_adp(
    x: SplitterSolution, mapping: SsToAdpMapping
) -> Partition:
    """Part 1 holds chosen element vertices and the membership vertices of
    non-chosen elements; asserts the result passes verify_adp."""
    part1 = set(x.chosen)
    for (_, elem), c in mapping.c_of.items():
        if elem not in x.chosen:
            part1.add(c)
    digraph = mapping.gadget_digraph()
    part = build_partition(digraph.n, part1)
    assert verify_adp(digraph, part), "mapped partition has a cyclic part"
    return part


def lift_adp_to_setsplitting(
    part: Partition, mapping: SsToAdpMapping
) -> SplitterSolution:
    """X = universe elements whose element vertex lies in part 1."""
    x = SplitterSolution(
        frozenset(
            u for u in range(1, mapping.universe_size + 1) if u in part.part1
        )
    )
    sys = build_set_system(mapping.universe_size, mapping.sets())
    assert verify_setsplitting(sys, x), "lifted splitter misses a set"
    return x


# ---------------------------------------------------------------------------
# Stage 3: acyclic digraph partition -> line embedding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdpToLceMapping:
    """s is vertex 1; checker vertices follow in arc-input order; alignment
    vertices come last, one per digraph vertex in index order."""

    digraph_n: int
    arcs: tuple[tuple[int, int], ...]

    @property
    def s_vertex(self) -> int:
        return 1

    def checker_of(self, arc_index: int) -> int:
        return 2 + arc_index

    def align_of(self, v: int) -> int:
        return 1 + len(self.arcs) + v

    def source_digraph(self) -> Digraph:
        return Digraph(self.digraph_n, self.arcs)

    def gadget_graph(self) -> SignedGraph:
        return adp_to_lce(self.source_digraph())[0]


def adp_to_lce(digraph: Digraph) -> tuple[SignedGraph, AdpToLceMapping]:
    """Checker vertices tie the special vertex to arc sources positively and
    to arc targets negatively; alignment vertices repel the special vertex.

    A self-loop cannot be encoded (its checker would need both signs toward
    the same alignment vertex) and raises SelfLoopError; such digraphs have
    no acyclic partition anyway.  |V'| = |V| + |A| + 1, |E+| = 2|A|,
    |E-| = |A| + |V|.
    """
    for a, b in digraph.arcs:
        if a == b:
            raise SelfLoopError(
                f"arc ({a}, {b}) is a self-loop; resolve it before this stage"
            )
    mapping = AdpToLceMapping(digraph_n=digraph.n, arcs=digraph.arcs)
    pos: list[tuple[int, int]] = []
    neg: list[tuple[int, int]] = []
    for idx, (a, b) in enumerate(digraph.arcs):
        c = mapping.checker_of(idx)
        pos.append((mapping.s_vertex, c))
        pos.append((c, mapping.align_of(a)))
        neg.append((c, mapping.align_of(b)))
    for v in range(1, digraph.n + 1):
        neg.append((mapping.s_vertex, mapping.align_of(v)))
    graph = build_signed_graph(1 + len(digraph.arcs) + digraph.n, pos, neg)
    assert graph.n == digraph.n + len(digraph.arcs) + 1
    assert graph.m_pos == 2 * len(digraph.arcs)
    assert graph.m_neg == len(digraph.arcs) + digraph.n
    return graph, mapping


def _topological(vertices: frozenset[int], digraph: Digraph) -> list[int]:
    """Smallest-vertex-first topological order of the induced sub-digraph."""
    indeg = {v: 0 for v in vertices}
    succ: dict[int, list[int]] = {v: [] for v in vertices}
    for a, b in digraph.arcs:
        if a in vertices and b in vertices:
            succ[a].append(b)
            indeg[b] += 1
    heap = [v for v in vertices if indeg[v] == 0]
    heapq.heapify(heap)
    out: list[int] = []
    while heap:
        v = heapq.heappop(heap)
        out.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(out) != len(vertices):
        raise ReductionError("induced sub-digraph is not acyclic")
    return out


def adp_solution_to_lce_ordering(
    part: Partition, mapping: AdpToLceMapping
) -> Ordering:
    """Seven blocks around the special vertex.

    With topological orders pi1 of part 1 and pi2 of part 2: alignment
    vertices of part 1 in reverse pi1 order, checkers of arcs from part 1
    into part 2, checkers inside part 1 in reverse (pi1, pi1) lexicographic
    arc order, s, checkers inside part 2 in (pi2, pi2) lexicographic order,
    checkers from part 2 into part 1, alignment vertices of part 2 in pi2
    order.  The result is verified before being returned.
    """
    digraph = mapping.source_digraph()
    pi1 = {v: i for i, v in enumerate(_topological(part.part1, digraph))}
    pi2 = {v: i for i, v in enumerate(_topological(part.part2, digraph))}

    cross_12: list[int] = []
    cross_21: list[int] = []
    inner_1: list[tuple[tuple[int, int], int]] = []
    inner_2: list[tuple[tuple[int, int], int]] = []
    for idx, (a, b) in enumerate(digraph.arcs):
        c = mapping.checker_of(idx)
        if a in part.part1 and b in part.part1:
            inner_1.append(((pi1[a], pi1[b]), c))
        elif a in part.part1:
            cross_12.append(c)
        elif b in part.part1:
            cross_21.append(c)
        else:
            inner_2.append(((pi2[a], pi2[b]), c))

    seq: list[int] = []
    seq.extend(
        mapping.align_of(v)
        for v in sorted(part.part1, key=pi1.__getitem__, reverse=True)
    )
    seq.extend(cross_12)
    seq.extend(c for _, c in sorted(inner_1, reverse=True))
    seq.append(mapping.s_vertex)
    seq.extend(c for _, c in sorted(inner_2))
    seq.extend(cross_21)
    seq.extend(mapping.align_of(v) for v in sorted(part.part2, key=pi2.__getitem__))

    ordering = Ordering.from_seq(seq)
    res = verify_embedding(mapping.gadget_graph(), ordering)
    assert res.valid, f"seven-block ordering failed verification: {res.violation}"
    return ordering


def lift_lce_to_adp(ordering: Ordering, mapping: AdpToLceMapping) -> Partition:
    """Part 1 = digraph vertices whose alignment vertex precedes s."""
    pos = ordering.position
    s_rank = pos[mapping.s_vertex]
    part1 = frozenset(
        v
        for v in range(1, mapping.digraph_n + 1)
        if pos[mapping.align_of(v)] < s_rank
    )
    part = build_partition(mapping.digraph_n, part1)
    assert verify_adp(mapping.source_digraph(), part), (
        "lifted partition has a cyclic part"
    )
    return part


# ---------------------------------------------------------------------------
# Composition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SatToLceMapping:
    sat2ss: SatToSsMapping
    ss2adp: SsToAdpMapping
    adp2lce: AdpToLceMapping


def sat_to_lce(cnf: CnfFormula) -> tuple[SignedGraph, SatToLceMapping]:
    """Full chain; the intermediate gadgets are rebuilt deterministically
    from the composed mapping whenever a lift needs them."""
    sys, m1 = sat_to_setsplitting(cnf)
    digraph, m2 = setsplitting_to_adp(sys)
    graph, m3 = adp_to_lce(digraph)
    return graph, SatToLceMapping(m1, m2, m3)


def lift_lce_to_sat(ordering: Ordering, mapping: SatToLceMapping) -> Assignment:
    part = lift_lce_to_adp(ordering, mapping.adp2lce)
    x = lift_adp_to_setsplitting(part, mapping.ss2adp)
    return lift_setsplitting_to_sat(x, mapping.sat2ss)
