"""Interval models, umbrella recognition and the complete-graph solver."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from lineembed.core import Ordering, build_graph, build_signed_graph, verify_embedding
from lineembed.errors import (
    InfeasibleOrderingError,
    ModelError,
    NotCompleteError,
)
from lineembed.intervals import (
    IntervalModel,
    is_umbrella_ordering,
    model_intersection_graph,
    model_to_ordering,
    neighborhood_extremes,
    ordering_to_model,
    recognize_proper_interval,
    solve_complete,
)

from oracles import (
    feasible_orderings_brute,
    has_umbrella_ordering_brute,
    model_intersection_edges,
    umbrella_ok_direct,
)
from test_core import random_signed_graph

F = Fraction

P3 = build_signed_graph(3, [(1, 2), (2, 3)], [(1, 3)])
ABC = Ordering.from_seq([1, 2, 3])


def random_complete(rng, n, p_pos=0.5):
    pos, neg = [], []
    for pair in itertools.combinations(range(1, n + 1), 2):
        (pos if rng.random() < p_pos else neg).append(pair)
    return build_signed_graph(n, pos, neg)


def planted_unit_interval_graph(rng, n, spread):
    """Edges of a guaranteed proper interval graph from random unit intervals."""
    xs = sorted(rng.uniform(0, spread) for _ in range(n))
    labels = list(range(1, n + 1))
    rng.shuffle(labels)
    x = dict(zip(labels, xs))
    edges = [
        (u, v)
        for u, v in itertools.combinations(range(1, n + 1), 2)
        if abs(x[u] - x[v]) <= 1.0
    ]
    return edges


class TestExtremes:
    def test_p3(self) -> None:
        ext = neighborhood_extremes(build_graph(3, [(1, 2), (2, 3)]), ABC)
        assert ext.last == {1: 2, 2: 3, 3: 3}
        assert ext.first == {1: 1, 2: 1, 3: 2}

    def test_within_bounds(self) -> None:
        rng = random.Random(11)
        for _ in range(200):
            n = rng.randint(1, 8)
            edges = [
                p for p in itertools.combinations(range(1, n + 1), 2)
                if rng.random() < 0.4
            ]
            gp = build_graph(n, edges)
            seq = list(range(1, n + 1))
            rng.shuffle(seq)
            o = Ordering.from_seq(seq)
            ext = neighborhood_extremes(gp, o)
            for v in range(1, n + 1):
                assert o.position[ext.first[v]] <= o.position[v]
                assert o.position[v] <= o.position[ext.last[v]]


class TestModel:
    def test_p3_exact_values(self) -> None:
        model = ordering_to_model(P3, ABC)
        assert model.intervals == {
            1: (F(1), F(9, 4)),
            2: (F(2), F(7, 2)),
            3: (F(3), F(15, 4)),
        }

    def test_positive_triangle(self) -> None:
        g = build_signed_graph(3, [(1, 2), (2, 3), (1, 3)], [])
        model = ordering_to_model(g, ABC)
        assert model.intervals == {
            1: (F(1), F(13, 4)),
            2: (F(2), F(14, 4)),
            3: (F(3), F(15, 4)),
        }

    def test_single_vertex(self) -> None:
        g = build_signed_graph(1, [], [])
        model = ordering_to_model(g, Ordering.from_seq([1]))
        assert model.intervals == {1: (F(1), F(3, 2))}

    def test_empty_graph(self) -> None:
        g = build_signed_graph(0, [], [])
        model = ordering_to_model(g, Ordering(()))
        assert model.intervals == {}

    def test_incomplete_rejected(self) -> None:
        g = build_signed_graph(3, [(1, 2)], [])
        with pytest.raises(NotCompleteError):
            ordering_to_model(g, ABC)

    def test_infeasible_ordering_rejected(self) -> None:
        with pytest.raises(InfeasibleOrderingError) as exc:
            ordering_to_model(P3, Ordering.from_seq([2, 1, 3]))
        assert exc.value.violation is not None

    def test_round_trip(self) -> None:
        assert model_to_ordering(ordering_to_model(P3, ABC)).seq == (1, 2, 3)

    def test_intersection_matches_positive_part(self) -> None:
        # Independent pairwise oracle against the swept in-module version.
        rng = random.Random(77)
        checked = 0
        while checked < 150:
            n = rng.randint(1, 7)
            g = random_complete(rng, n, rng.uniform(0.2, 0.9))
            feasible = feasible_orderings_brute(g)
            if not feasible:
                continue
            checked += 1
            o = Ordering.from_seq(feasible[0])
            model = ordering_to_model(g, o)
            assert model_intersection_edges(model.intervals) == g.pos
            got = model_intersection_graph(model)
            assert got.edges == g.pos
            assert model_to_ordering(model).seq == o.seq

    def test_validate_containment(self) -> None:
        bad = IntervalModel({1: (F(1), F(10)), 2: (F(2), F(3))})
        with pytest.raises(ModelError, match="contains"):
            bad.validate()

    def test_validate_duplicate_endpoint(self) -> None:
        bad = IntervalModel({1: (F(1), F(2)), 2: (F(2), F(3))})
        with pytest.raises(ModelError, match="distinct"):
            bad.validate()

    def test_validate_empty_interior(self) -> None:
        bad = IntervalModel({1: (F(2), F(2))})
        with pytest.raises(ModelError, match="interior"):
            bad.validate()

    def test_validate_bad_keys(self) -> None:
        bad = IntervalModel({2: (F(1), F(2))})
        with pytest.raises(ModelError, match="1..n"):
            bad.validate()

    def test_model_to_ordering_validates(self) -> None:
        with pytest.raises(ModelError):
            model_to_ordering(IntervalModel({1: (F(3), F(1))}))


class TestUmbrellaCheck:
    def test_matches_direct_predicate(self) -> None:
        rng = random.Random(5150)
        for _ in range(400):
            n = rng.randint(1, 8)
            edges = [
                p for p in itertools.combinations(range(1, n + 1), 2)
                if rng.random() < rng.uniform(0.1, 0.9)
            ]
            gp = build_graph(n, edges)
            seq = list(range(1, n + 1))
            rng.shuffle(seq)
            assert is_umbrella_ordering(gp, Ordering.from_seq(seq)) == (
                umbrella_ok_direct(n, edges, tuple(seq))
            )


class TestRecognition:
    def test_claw_rejected(self) -> None:
        claw = build_graph(4, [(1, 2), (1, 3), (1, 4)])
        assert recognize_proper_interval(claw) is None

    def test_c4_rejected(self) -> None:
        c4 = build_graph(4, [(1, 2), (2, 3), (3, 4), (1, 4)])
        assert recognize_proper_interval(c4) is None

    def test_path_and_clique(self) -> None:
        path = build_graph(4, [(1, 2), (2, 3), (3, 4)])
        got = recognize_proper_interval(path)
        assert got is not None and is_umbrella_ordering(path, got)
        clique = build_graph(4, list(itertools.combinations(range(1, 5), 2)))
        got = recognize_proper_interval(clique)
        assert got is not None

    def test_edgeless_and_tiny(self) -> None:
        assert recognize_proper_interval(build_graph(0, [])) is not None
        assert recognize_proper_interval(build_graph(1, [])) is not None
        got = recognize_proper_interval(build_graph(5, []))
        assert got is not None and sorted(got.seq) == [1, 2, 3, 4, 5]

    def test_exhaustive_up_to_five(self) -> None:
        # Recognition verdict equals brute-force umbrella existence.
        for n in range(6):
            pairs = list(itertools.combinations(range(1, n + 1), 2))
            for bits in itertools.product((0, 1), repeat=len(pairs)):
                edges = [p for p, b in zip(pairs, bits) if b]
                gp = build_graph(n, edges)
                got = recognize_proper_interval(gp)
                if got is not None:
                    assert is_umbrella_ordering(gp, got)
                assert (got is not None) == has_umbrella_ordering_brute(n, edges)

    def test_random_against_brute(self) -> None:
        rng = random.Random(909)
        for _ in range(150):
            n = rng.randint(6, 7)
            edges = [
                p for p in itertools.combinations(range(1, n + 1), 2)
                if rng.random() < rng.uniform(0.2, 0.8)
            ]
            gp = build_graph(n, edges)
            got = recognize_proper_interval(gp)
            if got is not None:
                assert is_umbrella_ordering(gp, got)
            assert (got is not None) == has_umbrella_ordering_brute(n, edges)

    def test_planted_always_recognized(self) -> None:
        rng = random.Random(31337)
        for _ in range(120):
            n = rng.randint(2, 40)
            edges = planted_unit_interval_graph(rng, n, spread=n / rng.uniform(2, 8))
            gp = build_graph(n, edges)
            got = recognize_proper_interval(gp)
            assert got is not None
            assert is_umbrella_ordering(gp, got)


class TestSolveComplete:
    def test_p3(self) -> None:
        got = solve_complete(P3)
        assert got is not None
        assert verify_embedding(P3, got).valid

    def test_incomplete_rejected(self) -> None:
        with pytest.raises(NotCompleteError):
            solve_complete(build_signed_graph(3, [(1, 2)], []))

    def test_claw_infeasible(self) -> None:
        g = build_signed_graph(
            4, [(1, 2), (1, 3), (1, 4)], [(2, 3), (2, 4), (3, 4)]
        )
        assert solve_complete(g) is None

    def test_positive_c4_infeasible(self) -> None:
        g = build_signed_graph(
            4, [(1, 2), (2, 3), (3, 4), (1, 4)], [(1, 3), (2, 4)]
        )
        assert solve_complete(g) is None

    def test_trivial_sizes(self) -> None:
        assert solve_complete(build_signed_graph(0, [], [])).seq == ()
        assert solve_complete(build_signed_graph(1, [], [])).seq == (1,)

    def test_verdict_matches_brute(self) -> None:
        rng = random.Random(2024)
        for _ in range(300):
            n = rng.randint(2, 6)
            g = random_complete(rng, n, rng.uniform(0.15, 0.95))
            got = solve_complete(g)
            want = feasible_orderings_brute(g)
            assert (got is not None) == bool(want)
            if got is not None:
                assert verify_embedding(g, got).valid
