import numpy as np
import pytest

from src.errors import ConfigError, DegenerateGeometry, NoNodes
from src.layout_engine import (
    LayoutGraph,
    LayoutParams,
    QuadTree,
    compute_forces,
    init_layout,
    positions_csv,
    repulsion_forces,
    run_layout,
    state_from_positions,
    step_layout,
    trace_csv,
)
from src.network import InteractionGraph, build_graph

PAPER_PARAMS = LayoutParams(gravity=1.0, bh_theta=1.2, dissuade_hubs=True, prevent_overlap=True)


def random_layout_graph(rng, n, p):
    nodes = [f"v{i:03d}" for i in range(n)]
    edges = [(nodes[i], nodes[j], float(rng.integers(1, 4)))
             for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return LayoutGraph.from_edges(nodes, edges)


def per_node_error(approx, exact):
    return np.linalg.norm(approx - exact, axis=1) / np.linalg.norm(exact, axis=1)


# ==================== GRAPH VIEW ====================

def test_interaction_graph_view_collapses_directions():
    g = InteractionGraph()
    g.add_mention("a", "b")
    g.add_mention("b", "a")
    g.add_retweet("b", "c")
    g.add_node("d")
    lg = LayoutGraph.from_interaction_graph(g)
    assert lg.nodes == ("a", "b", "c", "d")
    assert len(lg.sources) == 2
    assert lg.degree.tolist() == [1.0, 2.0, 1.0, 0.0]
    assert lg.mass.tolist() == [2.0, 3.0, 2.0, 1.0]


def test_similarity_view_uses_strength_as_weight():
    lg = LayoutGraph.from_similarity(["x", "y"], {("x", "y"): 0.25, ("y", "x"): 0.25})
    assert lg.weights.tolist() == [0.25]


# ==================== INIT ====================

def test_init_is_seeded_and_distinct():
    nodes = [f"n{i}" for i in range(50)]
    a = init_layout(nodes, seed=3)
    b = init_layout(nodes, seed=3)
    c = init_layout(nodes, seed=4)
    assert np.array_equal(a.positions, b.positions)
    assert not np.array_equal(a.positions, c.positions)
    assert len(np.unique(a.positions, axis=0)) == 50
    assert np.abs(a.positions).max() <= 50.0


def test_init_without_nodes():
    with pytest.raises(NoNodes):
        init_layout([])
    with pytest.raises(NoNodes):
        run_layout(LayoutGraph.from_edges([], []), LayoutParams())


def test_params_validation():
    with pytest.raises(ConfigError):
        LayoutParams(scaling=0)
    with pytest.raises(ConfigError):
        LayoutParams(iterations=0)
    with pytest.raises(ConfigError):
        LayoutParams(node_sizes={"a": -1.0})


# ==================== FORCES ====================

def test_forces_cancel_without_gravity():
    rng = np.random.default_rng(0)
    p = LayoutParams(gravity=0.0, prevent_overlap=False, bh_theta=0.0)
    for k in range(100):
        lg = random_layout_graph(rng, int(rng.integers(2, 40)), 0.15)
        st = init_layout(lg.nodes, seed=k)
        forces = compute_forces(lg, st, p)
        net = np.abs(forces.sum(axis=0)).max()
        assert net <= 1e-6 * np.abs(forces).sum()


def test_tiny_theta_matches_exact_repulsion():
    rng = np.random.default_rng(1)
    lg = random_layout_graph(rng, 60, 0.05)
    pos = init_layout(lg.nodes, seed=1).positions
    p = LayoutParams(prevent_overlap=False)
    exact = repulsion_forces(lg, pos, p, theta=0.0)
    assert np.allclose(repulsion_forces(lg, pos, p, theta=1e-9), exact, rtol=1e-9, atol=1e-9)


def barnes_hut_errors(p, thetas=(1.2, 0.8, 0.4), graphs=3):
    """Per-node relative repulsion error against the exact sum, one row per fixed 200-node graph"""
    rng = np.random.default_rng(2)
    rows = []
    for k in range(graphs):
        lg = random_layout_graph(rng, 200, 0.02)
        pos = init_layout(lg.nodes, seed=k).positions
        exact = repulsion_forces(lg, pos, p, theta=0.0)
        rows.append({theta: per_node_error(repulsion_forces(lg, pos, p, theta=theta), exact)
                     for theta in thetas})
    return rows


def test_barnes_hut_per_node_error_without_overlap():
    for errors in barnes_hut_errors(LayoutParams(prevent_overlap=False)):
        worst = {theta: float(e.max()) for theta, e in errors.items()}
        assert worst[1.2] <= 0.05
        assert worst[0.4] <= worst[0.8] <= worst[1.2]


def test_barnes_hut_error_shrinks_with_overlap_prevention():
    # Bodies take the border law at their mean radius; the spread error is second order
    for errors in barnes_hut_errors(PAPER_PARAMS):
        mean = {theta: float(e.mean()) for theta, e in errors.items()}
        assert mean[0.4] < mean[0.8] < mean[1.2]
        assert float(np.median(errors[1.2])) <= 0.05


def test_quadtree_cells_and_single_node():
    pos = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [5.0, 5.0]])
    mass = np.array([1.0, 2.0, 3.0, 4.0])
    tree = QuadTree(pos, mass)
    assert tree.mass[0] == 10.0
    assert tree.center[0].real == pytest.approx((2 + 20) / 10)
    assert tree.center[0].imag == pytest.approx((3 + 20) / 10)
    assert sorted(tree.members(0).tolist()) == [0, 1, 2, 3]
    (pi, pj), (bi, _) = tree.interactions(theta=0.0)
    assert sorted(zip(pi.tolist(), pj.tolist())) == [(i, j) for i in range(4) for j in range(4) if i != j]
    assert len(bi) == 0

    lonely = QuadTree(np.array([[1.0, 1.0]]), np.array([1.0]))
    (pi, _), (bi, _) = lonely.interactions(theta=1.2)
    assert len(pi) == 0 and len(bi) == 0


def test_quadtree_covers_every_pair_once():
    rng = np.random.default_rng(8)
    pos = rng.uniform(-50, 50, size=(150, 2))
    tree = QuadTree(pos, np.ones(150), np.ones(150))
    (pi, pj), (bi, bc) = tree.interactions(theta=1.2, clearance=True)
    seen = np.zeros((150, 150), dtype=int)
    np.add.at(seen, (pi, pj), 1)
    for i, c in zip(bi.tolist(), bc.tolist()):
        members = tree.members(c)
        assert i not in members
        seen[i, members] += 1
    assert len(bi) > 0
    assert (seen == 1 - np.eye(150, dtype=int)).all()


def test_coincident_nodes():
    lg = LayoutGraph.from_edges(["a", "b", "c"], [("a", "b", 1.0)])
    st = state_from_positions(lg, {"a": (0.0, 0.0), "b": (0.0, 0.0), "c": (3.0, 1.0)})
    with pytest.raises(DegenerateGeometry):
        compute_forces(lg, st, LayoutParams())
    moved = step_layout(lg, st, LayoutParams(seed=5))
    assert moved.jitter_events == 1
    assert np.isfinite(moved.positions).all()


# ==================== RUNS ====================

def test_exact_runs_are_bit_identical():
    rng = np.random.default_rng(3)
    lg = random_layout_graph(rng, 40, 0.1)
    p = LayoutParams(bh_theta=0.0, iterations=50, seed=9)
    a = run_layout(lg, p, trace=True)
    b = run_layout(lg, p, trace=True)
    assert a.positions == b.positions
    assert positions_csv(a.positions) == positions_csv(b.positions)
    assert trace_csv(a.trace) == trace_csv(b.trace)


def test_barnes_hut_runs_are_repeatable():
    rng = np.random.default_rng(4)
    lg = random_layout_graph(rng, 30, 0.1)
    p = PAPER_PARAMS.with_overrides(iterations=15, seed=2)
    assert run_layout(lg, p).positions == run_layout(lg, p).positions


def test_no_nan_at_reference_parameters():
    rng = np.random.default_rng(5)
    for k in range(100):
        lg = random_layout_graph(rng, int(rng.integers(1, 16)), float(rng.uniform(0.0, 0.5)))
        result = run_layout(lg, PAPER_PARAMS.with_overrides(iterations=10, seed=k))
        coords = np.array(list(result.positions.values()))
        assert np.isfinite(coords).all()
        assert set(result.positions) == set(lg.nodes)


def test_trace_and_early_stop():
    rng = np.random.default_rng(6)
    lg = random_layout_graph(rng, 20, 0.2)
    full = run_layout(lg, LayoutParams(bh_theta=0.0, iterations=30), trace=True)
    assert full.steps == 30
    assert [row.step for row in full.trace] == list(range(1, 31))
    assert trace_csv(full.trace).splitlines()[0] == "step,mean_displacement,global_speed"

    early = run_layout(lg, LayoutParams(bh_theta=0.0, iterations=30, min_displacement=1e9))
    assert early.steps == 1


def test_displacement_cap():
    lg = LayoutGraph.from_edges(["a", "b"], [("a", "b", 1.0)])
    st = state_from_positions(lg, {"a": (-500.0, 0.0), "b": (500.0, 0.0)})
    p = LayoutParams(max_displacement=0.5, speed_constant=10.0, bh_theta=0.0)
    nxt = step_layout(lg, st, p)
    assert np.linalg.norm(nxt.positions - st.positions, axis=1).max() <= 0.5 + 1e-12
    assert nxt.cap_hits >= 1


def test_start_from_given_positions():
    lg = LayoutGraph.from_edges(["a", "b"], [("a", "b", 1.0)])
    start = {"a": (-1.0, 0.0), "b": (1.0, 0.0)}
    result = run_layout(lg, LayoutParams(iterations=1, bh_theta=0.0), initial_positions=start)
    assert result.steps == 1
    assert result.positions["a"][0] < result.positions["b"][0]


def test_zero_force_configuration_stays_put():
    lg = LayoutGraph.from_edges(["a"], [])
    for p, start in ((LayoutParams(gravity=0.0), (2.5, -1.0)), (LayoutParams(gravity=1.0), (0.0, 0.0))):
        st = state_from_positions(lg, {"a": start})
        nxt = step_layout(lg, st, p)
        assert tuple(nxt.positions[0]) == start


def test_mirror_symmetry_is_kept():
    lg = LayoutGraph.from_edges(["a", "b"], [("a", "b", 1.0)])
    st = state_from_positions(lg, {"a": (-3.0, 1.5), "b": (3.0, -1.5)})
    for _ in range(50):
        st = step_layout(lg, st, PAPER_PARAMS)
        assert np.array_equal(st.positions[0], -st.positions[1])


def test_translation_equivariance_without_gravity():
    rng = np.random.default_rng(9)
    lg = random_layout_graph(rng, 12, 0.3)
    start = init_layout(lg.nodes, seed=4).positions
    shift = np.array([3.0, -2.0])
    p = LayoutParams(gravity=0.0, bh_theta=0.0, iterations=30)
    base = run_layout(lg, p, initial_positions=start).positions
    moved = run_layout(lg, p, initial_positions=start + shift).positions
    for node in lg.nodes:
        assert np.allclose(np.subtract(moved[node], shift), base[node], atol=1e-6, rtol=0)


def test_connected_pair_settles():
    lg = LayoutGraph.from_edges(["a", "b"], [("a", "b", 1.0)])
    st = init_layout(lg.nodes, seed=1)
    steps = 600
    gaps = []
    for _ in range(steps):
        st = step_layout(lg, st, PAPER_PARAMS)
        gaps.append(float(np.linalg.norm(st.positions[0] - st.positions[1])))
    tail = np.array(gaps[-steps // 10:])
    assert np.isfinite(tail).all()
    assert np.abs(tail - tail.mean()).max() <= 0.1 * tail.mean()


def test_isolated_nodes_move_toward_origin():
    lg = LayoutGraph.from_edges([f"i{k:02d}" for k in range(27)], [])
    p = PAPER_PARAMS.with_overrides(iterations=50, seed=3)
    start = init_layout(lg.nodes, p.seed, p.init_extent).positions
    result = run_layout(lg, p)
    for node, (x0, y0) in zip(lg.nodes, start):
        assert np.hypot(*result.positions[node]) < np.hypot(x0, y0)


def test_reference_network_at_paper_parameters(reference_ds):
    lg = LayoutGraph.from_interaction_graph(build_graph(reference_ds))
    result = run_layout(lg, PAPER_PARAMS)
    assert len(result.positions) == 242
    assert result.steps == PAPER_PARAMS.iterations
    assert np.isfinite(np.array(list(result.positions.values()))).all()
