import itertools
import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from apictorial import (
    AssemblyConfig,
    ClosedPolyline,
    CycleGraphRecord,
    CycleLimitError,
    RigidMotion2D,
    apply_cycle_reweighting,
    build_comparison_graph,
    enumerate_cycle_graphs,
    overlap_consistency_check,
    resample_closed,
    transformation_consistency_check,
)
from apictorial.assembly import ComparisonGraph, graph_from_motions
from apictorial.cycles import cycle_counts, cycle_motion
from apictorial.geometry import IDENTITY

from conftest import puzzle
from oracles import brute_force_cycles

SQ = ClosedPolyline([[0, 0], [1, 0], [1, 1], [0, 1]])
THETA, TAU = math.pi / 20, 30.0


def complete(n):
    return graph_from_motions([SQ] * n, {e: IDENTITY for e in itertools.combinations(range(n), 2)})


def truth_graph(gt, pairs=None):
    """Graph whose edges carry the exact relative ground-truth motions."""
    T = gt.true_motions
    pairs = gt.adjacency if pairs is None else pairs
    return graph_from_motions(gt.pieces, {(i, j): T[i].inverse() @ T[j] for i, j in pairs})


def test_complete_graph_counts():
    assert len(enumerate_cycle_graphs(complete(4), 4)) == 3
    assert len(enumerate_cycle_graphs(complete(5), 4)) == 15
    assert len(enumerate_cycle_graphs(complete(5), 3)) == 10


def test_cycles_listed_once_from_smallest_vertex():
    for cyc in enumerate_cycle_graphs(complete(6), 4):
        v = cyc.vertices
        assert v[0] == min(v)
        assert v[1] < v[-1]


@given(st.integers(4, 8), st.floats(0.2, 0.9), st.integers(0, 10_000), st.integers(3, 5))
def test_counts_match_exhaustive_enumeration(n, p, seed, k):
    rng = np.random.default_rng(seed)
    pairs = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
    G = graph_from_motions([SQ] * n, {e: IDENTITY for e in pairs})
    got = {frozenset(frozenset(e) for e in c.edges()) for c in enumerate_cycle_graphs(G, k)}
    assert got == brute_force_cycles(n, {frozenset(e) for e in pairs}, k)
    assert len(got) == len(enumerate_cycle_graphs(G, k))


def test_cycle_cap():
    with pytest.raises(CycleLimitError):
        enumerate_cycle_graphs(complete(6), 4, max_cycles=5)
    with pytest.raises(ValueError):
        enumerate_cycle_graphs(complete(4), 2)


def test_identity_cycle_is_transformation_consistent():
    G = complete(4)
    for cyc in enumerate_cycle_graphs(G, 4):
        assert transformation_consistency_check(cyc, G, 1e-9, 1e-9)
        assert cyc.transformation_consistent is True


def test_one_large_translation_breaks_consistency():
    motions = {e: IDENTITY for e in itertools.combinations(range(4), 2)}
    motions[0, 1] = RigidMotion2D(0.0, 10 * TAU, 0.0)
    G = graph_from_motions([SQ] * 4, motions)
    cyc = CycleGraphRecord((0, 1, 2, 3))
    assert not transformation_consistency_check(cyc, G, THETA, TAU)
    assert cyc.transformation_consistent is False


def test_cycle_motion_composes_in_order():
    a, b, c = RigidMotion2D(0.1, 1, 0), RigidMotion2D(0.2, 0, 1), RigidMotion2D(-0.3, 2, 2)
    G = graph_from_motions([SQ] * 3, {(0, 1): a, (1, 2): b, (0, 2): c.inverse()})
    g = cycle_motion(G, (0, 1, 2))
    expect = a @ b @ c
    assert g.theta == pytest.approx(expect.theta)
    np.testing.assert_allclose(g.tau, expect.tau)


def test_ground_truth_squares_are_transformation_consistent():
    gt = puzzle(3, 3)
    G = truth_graph(gt)
    cycles = enumerate_cycle_graphs(G, 4)
    assert len(cycles) == 4
    assert all(transformation_consistency_check(c, G, THETA, 2 * 15.0) for c in cycles)
    for c in cycles:
        assert cycle_motion(G, c.vertices).is_identity(4 * 1e-9 * gt.piece_size)


def test_disjoint_placements_overlap_consistent():
    steps = [RigidMotion2D(0, 10, 0), RigidMotion2D(0, 0, 10), RigidMotion2D(0, -10, 0)]
    motions = {(0, 1): steps[0], (1, 2): steps[1], (2, 3): steps[2], (0, 3): RigidMotion2D(0, 0, 10)}
    G = graph_from_motions([SQ] * 4, motions)
    cyc = CycleGraphRecord((0, 1, 2, 3))
    assert overlap_consistency_check(cyc, G, 1 / 80)
    assert cyc.overlap_consistent is True


def test_stacked_pieces_overlap_inconsistent_but_transformation_consistent():
    # identity fits close the cycle perfectly yet pile every piece on the first
    G = complete(4)
    cyc = CycleGraphRecord((0, 1, 2, 3))
    assert transformation_consistency_check(cyc, G, THETA, TAU)
    assert not overlap_consistency_check(cyc, G, 0.49)


def test_overlap_consistent_but_transformation_inconsistent():
    motions = {
        (0, 1): RigidMotion2D(0, 10, 0),
        (1, 2): RigidMotion2D(0, 0, 10),
        (2, 3): RigidMotion2D(0, -10, 0),
        (0, 3): RigidMotion2D(0, 0, 15),
    }
    G = graph_from_motions([SQ] * 4, motions)
    cyc = CycleGraphRecord((0, 1, 2, 3))
    assert overlap_consistency_check(cyc, G, 1 / 80)
    assert not transformation_consistency_check(cyc, G, THETA, 1.0)


def test_overlap_uses_every_starting_point():
    # from vertex 0 the pieces fan out; from vertex 2 the off edge piles 0 onto 1
    motions = {
        (0, 1): RigidMotion2D(0, 10, 0),
        (1, 2): RigidMotion2D(0, 0, 10),
        (0, 2): RigidMotion2D(0, 0.2, 0.3),
    }
    G = graph_from_motions([SQ] * 3, motions)
    cyc = CycleGraphRecord((0, 1, 2))
    assert not overlap_consistency_check(cyc, G, 1 / 80)


def test_correct_fits_leave_exactly_the_squares():
    gt = puzzle(3, 3)
    cfg = AssemblyConfig()
    pieces = [resample_closed(p, cfg.delta, cfg.iterations) for p in gt.pieces]
    G = build_comparison_graph(pieces, cfg)
    # true neighbours get their exact motion; every other pair keeps its computed fit
    T = gt.true_motions
    edges = dict(G.edges)
    for i, j in gt.adjacency:
        e = edges[i, j]
        edges[i, j] = replace(e, record=replace(e.record, g=T[i].inverse() @ T[j]), weight=1.0)
    H = ComparisonGraph(G.pieces, edges)
    passing = [c.vertices for c in enumerate_cycle_graphs(H, 4) if overlap_consistency_check(c, H, 1 / 80)]
    assert sorted(passing) == [(0, 1, 4, 3), (1, 2, 5, 4), (3, 4, 7, 6), (4, 5, 8, 7)]


def test_reweighting_arithmetic():
    G = graph_from_motions([SQ] * 4, {e: IDENTITY for e in itertools.combinations(range(4), 2)},
                           {e: 8.0 for e in itertools.combinations(range(4), 2)})
    cycles = [CycleGraphRecord((0, 1, 2, 3)), CycleGraphRecord((0, 1, 3, 2))]
    H = apply_cycle_reweighting(G, cycles, 0.5)
    assert H.weight(0, 1) == 2.0  # c = 2
    assert H.weight(1, 2) == 4.0  # c = 1
    assert H.weight(0, 3) == 4.0
    assert apply_cycle_reweighting(G, [], 0.5).weights() == G.weights()
    with pytest.raises(ValueError):
        apply_cycle_reweighting(G, cycles, 1.0)


@given(st.integers(4, 7), st.integers(0, 10_000), st.floats(0.05, 0.95))
def test_reweighting_never_increases(n, seed, beta):
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(n), 2))
    weights = {e: float(rng.uniform(0, 10)) for e in pairs}
    G = graph_from_motions([SQ] * n, {e: IDENTITY for e in pairs}, weights)
    cycles = enumerate_cycle_graphs(G, 4)
    chosen = [c for c in cycles if rng.random() < 0.3]
    H = apply_cycle_reweighting(G, chosen, beta)
    counts = cycle_counts(chosen)
    for e in pairs:
        assert H.weight(*e) <= G.weight(*e)
        assert H.weight(*e) == pytest.approx(beta ** counts.get(e, 0) * G.weight(*e))
        if e not in counts:
            assert H.weight(*e) == G.weight(*e)


def test_interior_edges_lie_in_one_or_two_squares():
    gt = puzzle(3, 3)
    G = truth_graph(gt)
    cycles = [c for c in enumerate_cycle_graphs(G, 4) if overlap_consistency_check(c, G, 1 / 80)]
    counts = cycle_counts(cycles)
    assert {counts[e] for e in gt.adjacency} == {1, 2}
    # edges at the centre piece lie in two squares
    assert all(counts[e] == 2 for e in gt.adjacency if 4 in e)
