import math
import statistics

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atomroute import AnnealOptions, Circuit, DegenerateInput, Gate, interaction_graph, optimize_placement, select_radius
from atomroute.frontend import InteractionGraph
from atomroute.placement import (
    Placement,
    _Energy,
    candidate_radii,
    mst_max_edge,
    placement_objective,
    repair_separation,
    scale_factor,
    validate_min_separation,
)


def graph(n, weights):
    return InteractionGraph(n, {k: v for k, v in weights.items() if v})


def test_pearson_matches_statistics_oracle():
    g = graph(3, {(0, 1): 2, (0, 2): 1, (1, 2): 0})
    coords = [(0, 0), (0, 0.1), (0, 1)]
    # pairs in (i, j) order: (0,1) d=0.1, (0,2) d=1.0, (1,2) d=0.9
    oracle = statistics.correlation([2, 1, 0], [0.1, 1.0, 0.9])
    assert placement_objective(g, coords) == pytest.approx(oracle, abs=1e-12)
    assert oracle == pytest.approx(-0.811, abs=5e-4)


def test_pearson_zero_variance_fallbacks():
    g = graph(3, {(0, 1): 1, (0, 2): 1, (1, 2): 1})
    assert placement_objective(g, [(0, 0), (0.3, 0.1), (0.9, 0.8)]) == 0.0
    assert placement_objective(graph(2, {(0, 1): 4}), [(0, 0), (1, 1)]) == 0.0
    tri = [(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)]
    assert placement_objective(graph(3, {(0, 1): 3}), tri) == 0.0


def test_objective_needs_two_qubits():
    with pytest.raises(DegenerateInput):
        placement_objective(graph(1, {}), [(0.5, 0.5)])


def test_interacting_pairs_only_variant():
    g = graph(4, {(0, 1): 3, (1, 2): 1, (2, 3): 2})
    coords = np.array([(0, 0), (0.2, 0), (0.6, 0.1), (0.7, 0.9)])
    got = placement_objective(g, coords, interacting_pairs_only=True)
    d = [0.2, float(np.hypot(0.4, 0.1)), float(np.hypot(0.1, 0.8))]
    assert got == pytest.approx(statistics.correlation([3, 1, 2], d), abs=1e-12)


def test_cycle_beats_random_baseline():
    g = graph(4, {(0, 1): 1, (1, 2): 1, (2, 3): 1, (0, 3): 1})
    p = optimize_placement(g, AnnealOptions(seed=0))
    rng = np.random.default_rng(0)
    baseline = np.mean([placement_objective(g, rng.random((4, 2))) for _ in range(100)])
    assert placement_objective(g, p.coords) < baseline
    assert p.objective_value < baseline


def test_single_qubit_convention():
    p = optimize_placement(graph(1, {}))
    assert p.coords.tolist() == [[0.5, 0.5]]


def test_placement_is_deterministic():
    c = Circuit(6, [Gate("cz", (i, (i * 3 + 1) % 6)) for i in range(6)])
    g = interaction_graph(c)
    opts = AnnealOptions(maxiter=2000, seed=7)
    a, b = optimize_placement(g, opts), optimize_placement(g, opts)
    assert np.array_equal(a.coords, b.coords)
    assert a.objective_value == b.objective_value
    c2 = optimize_placement(g, AnnealOptions(maxiter=2000, seed=8))
    assert not np.array_equal(a.coords, c2.coords)


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 9), st.integers(0, 1000))
def test_result_never_worse_than_initial_candidate(n, seed):
    rng = np.random.default_rng(seed)
    weights = {(i, j): int(rng.integers(0, 4)) for i in range(n) for j in range(i + 1, n)}
    g = graph(n, weights)
    opts = AnnealOptions(maxiter=300, seed=seed)
    p = optimize_placement(g, opts)
    initial = np.random.default_rng(seed).random((n, 2))
    assert p.objective_value <= _Energy(g, n, opts)(initial)
    assert np.all((p.coords >= 0) & (p.coords <= 1))


def test_radius_examples():
    sel = select_radius(Placement(np.array([(0, 0), (0.5, 0), (1.0, 0)])))
    assert candidate_radii([(0, 0), (0.5, 0), (1.0, 0)]) == [0.5, 1.0]
    assert sel.r_b == 1.0 and sel.rule == "connected_diameter"
    assert select_radius(np.array([(0.1, 0.1), (0.5, 0.1)])).r_b == pytest.approx(0.4)
    sq = select_radius(np.array([(0, 0), (1, 0), (1, 1), (0, 1)]))
    assert sq.r_b == 1.0
    assert sq.scale_s == pytest.approx(6.0)


def test_radius_needs_two_points():
    with pytest.raises(DegenerateInput):
        select_radius(np.array([(0.5, 0.5)]))


def _brute_force_radius(pts):
    n = len(pts)
    dist = np.hypot(*(pts[:, None, :] - pts[None, :, :]).transpose(2, 0, 1))
    cands = sorted({float(v) for v in dist[np.triu_indices(n, 1)]})
    for r in cands:
        G = nx.Graph()
        G.add_nodes_from(range(n))
        G.add_edges_from((i, j) for i in range(n) for j in range(i + 1, n) if dist[i, j] <= r + 1e-12)
        if nx.is_connected(G) and nx.diameter(G) <= math.sqrt(n):
            return r
    return None


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.integers(0, 10**6))
def test_radius_is_minimal_over_exhaustive_scan(n, seed):
    pts = np.random.default_rng(seed).random((n, 2))
    sel = select_radius(pts)
    assert sel.rule == "connected_diameter"
    assert sel.r_b == pytest.approx(_brute_force_radius(pts), abs=1e-12)


def test_mst_max_edge():
    assert mst_max_edge([(0, 0), (0.3, 0), (0.3, 0.4), (1, 1)]) == pytest.approx(math.hypot(0.7, 0.6))


@pytest.mark.parametrize("r_b,phys,s", [(0.3, 6, 20), (6, 6, 1), (1, 6, 6)])
def test_scale_factor(r_b, phys, s):
    assert scale_factor(r_b, phys) == pytest.approx(s)


def test_scale_factor_rejects_nonpositive():
    with pytest.raises(DegenerateInput):
        scale_factor(0.0, 6)


def test_min_separation_examples():
    assert validate_min_separation([(0, 0), (0.1, 0)], 0.1) == []
    assert validate_min_separation([(0, 0), (0.099, 0)], 0.1) == [(0, 1)]
    assert validate_min_separation([], 0.1) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 14), st.integers(0, 10**6), st.floats(0.05, 0.2))
def test_repair_clears_all_violations(n, seed, d_min):
    rng = np.random.default_rng(seed)
    # clustered start, including exact duplicates
    pts = 0.5 + 0.05 * rng.standard_normal((n, 2))
    pts[n // 2] = pts[0]
    p = repair_separation(Placement(np.clip(pts, 0, 1)), d_min)
    assert validate_min_separation(p.coords, d_min) == []
    assert np.all((p.coords >= 0) & (p.coords <= 1))
