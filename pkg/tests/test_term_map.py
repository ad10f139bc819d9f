import itertools
import random

import networkx as nx
import pytest

from src.layout_engine import LayoutGraph, LayoutParams, run_layout
from src.term_map import (
    association_strength,
    build_term_map,
    cluster_terms,
    cooccurrence_matrix,
    extract_terms,
    greedy_modularity,
    modularity,
    similarity_csv,
    term_layout,
    term_map_csv,
)
from src.text_engine import PipelineConfig, TokenizedBio, tokenize_bios

BIOS = [
    TokenizedBio("u1", ("a", "b", "c")),
    TokenizedBio("u2", ("a", "b")),
    TokenizedBio("u3", ("b", "c")),
    TokenizedBio("u4", ("d",)),
]


def set_partitions(n):
    """Every partition of range(n) as restricted growth strings"""
    def grow(prefix, top):
        if len(prefix) == n:
            yield list(prefix)
            return
        for c in range(top + 2):
            yield from grow(prefix + [c], max(top, c))
    if n == 0:
        yield []
        return
    yield from grow([0], 0)


def random_similarity(rng, n, p):
    terms = [f"t{i}" for i in range(n)]
    sim = {}
    for a, b in itertools.combinations(terms, 2):
        if rng.random() < p:
            s = rng.uniform(0.05, 1.0)
            sim[(a, b)] = sim[(b, a)] = s
    return terms, sim


def nx_graph(terms, sim):
    g = nx.Graph()
    g.add_nodes_from(terms)
    g.add_weighted_edges_from((a, b, s) for (a, b), s in sim.items() if a < b)
    return g


def as_communities(terms, labels):
    groups = {}
    for t, c in zip(terms, labels):
        groups.setdefault(c, set()).add(t)
    return list(groups.values())


def two_cliques():
    left, right = ["a1", "a2", "a3", "a4"], ["b1", "b2", "b3", "b4"]
    sim = {}
    for group in (left, right):
        for a, b in itertools.combinations(group, 2):
            sim[(a, b)] = sim[(b, a)] = 1.0
    sim[("a1", "b1")] = sim[("b1", "a1")] = 0.1
    return left + right, sim


# ==================== TERMS ====================

def test_extract_terms_counts_bios():
    terms = extract_terms(BIOS, min_frequency=1, ngram_max=1)
    assert [(s.term, s.frequency) for s in terms] == [("b", 3), ("a", 2), ("c", 2), ("d", 1)]


def test_extract_bigrams_with_threshold():
    terms = extract_terms(BIOS, min_frequency=2, ngram_max=2)
    assert [s.term for s in terms] == ["b", "a", "a b", "b c", "c"]


def test_repeated_token_counts_once_per_bio():
    terms = extract_terms([TokenizedBio("u", ("x", "x", "x"))], min_frequency=1, ngram_max=1)
    assert [(s.term, s.frequency) for s in terms] == [("x", 1)]


def test_extract_terms_validates_arguments():
    with pytest.raises(ValueError):
        extract_terms(BIOS, min_frequency=0)
    with pytest.raises(ValueError):
        extract_terms(BIOS, ngram_max=3)


def test_cooccurrence_and_association_strength():
    terms = extract_terms(BIOS, min_frequency=1, ngram_max=1)
    c = cooccurrence_matrix(BIOS, terms, ngram_max=1)
    assert c.count("a", "b") == c.count("b", "a") == 2
    assert c.count("a", "c") == 1
    assert c.count("a", "d") == 0
    assert c.count("b", "b") == 0
    sim = association_strength(c, terms)
    assert sim[("a", "b")] == pytest.approx(2 / (2 * 3))
    assert sim[("a", "b")] == sim[("b", "a")]
    assert ("a", "d") not in sim


def test_duplicated_corpus_halves_association_strength():
    terms = extract_terms(BIOS, min_frequency=1, ngram_max=1)
    sim = association_strength(cooccurrence_matrix(BIOS, terms, ngram_max=1), terms)
    doubled = BIOS + BIOS
    terms2 = extract_terms(doubled, min_frequency=1, ngram_max=1)
    sim2 = association_strength(cooccurrence_matrix(doubled, terms2, ngram_max=1), terms2)
    assert sim2.keys() == sim.keys()
    for pair, s in sim.items():
        assert sim2[pair] == pytest.approx(s / 2)


def test_association_strength_rejects_zero_frequency():
    c = cooccurrence_matrix(BIOS, ["a", "b"], ngram_max=1)
    with pytest.raises(ValueError):
        association_strength(c, {"a": 0, "b": 3})


# ==================== CLUSTERING ====================

def test_two_cliques_split_cleanly():
    terms, sim = two_cliques()
    clusters = cluster_terms(sim, terms=terms)
    assert len({clusters[t] for t in terms[:4]}) == 1
    assert len({clusters[t] for t in terms[4:]}) == 1
    assert clusters["a1"] != clusters["b1"]
    assert set(clusters.values()) == {1, 2}


def test_edgeless_terms_stay_singletons():
    result = greedy_modularity({}, terms=["x", "y", "z"])
    assert result.clusters == {"x": 1, "y": 2, "z": 3}
    assert result.modularity == 0.0
    assert greedy_modularity({}).clusters == {}


def test_disconnected_pairs_never_share_a_cluster():
    sim = {("a", "b"): 1.0, ("b", "a"): 1.0, ("c", "d"): 1.0, ("d", "c"): 1.0}
    clusters = cluster_terms(sim)
    assert clusters["a"] == clusters["b"] != clusters["c"] == clusters["d"]


def test_clustering_rejects_bad_input():
    with pytest.raises(ValueError):
        greedy_modularity({("a", "b"): 1.0}, resolution=0)
    with pytest.raises(ValueError):
        greedy_modularity({("a", "b"): -1.0, ("b", "a"): -1.0})


def test_pass_history_never_decreases():
    rng = random.Random(3)
    for _ in range(20):
        terms, sim = random_similarity(rng, rng.randint(2, 30), 0.3)
        if not sim:
            continue
        result = greedy_modularity(sim, terms=terms, seed=rng.randint(0, 100))
        history = result.pass_history
        assert history
        assert all(later >= earlier for earlier, later in zip(history, history[1:]))
        assert history[-1] == pytest.approx(result.modularity)


def test_reported_modularity_matches_partition():
    rng = random.Random(5)
    for _ in range(20):
        terms, sim = random_similarity(rng, rng.randint(2, 10), 0.4)
        result = greedy_modularity(sim, terms=terms)
        assert result.modularity == pytest.approx(modularity(sim, result.clusters, terms=terms))
        if sim:
            labels = [result.clusters[t] for t in terms]
            expected = nx.community.modularity(nx_graph(terms, sim), as_communities(terms, labels), weight="weight")
            assert result.modularity == pytest.approx(expected)


def test_clusters_partition_terms_with_contiguous_ids():
    rng = random.Random(9)
    for _ in range(30):
        terms, sim = random_similarity(rng, rng.randint(1, 12), rng.choice([0.1, 0.3, 0.7]))
        clusters = cluster_terms(sim, terms=terms, seed=rng.randint(0, 1000))
        assert set(clusters) == set(terms)
        ids = sorted(set(clusters.values()))
        assert ids == list(range(1, len(ids) + 1))
        sizes = [sum(1 for c in clusters.values() if c == cid) for cid in ids]
        assert sizes == sorted(sizes, reverse=True)


def test_clustering_is_deterministic_for_a_seed():
    terms, sim = random_similarity(random.Random(13), 10, 0.4)
    runs = [greedy_modularity(sim, seed=4, terms=terms) for _ in range(3)]
    assert all(r == runs[0] for r in runs)


def test_greedy_close_to_exhaustive_optimum():
    rng = random.Random(17)
    for _ in range(40):
        n = rng.randint(2, 8)
        terms, sim = random_similarity(rng, n, rng.choice([0.3, 0.5, 0.8]))
        g = nx_graph(terms, sim)
        if g.size(weight="weight") == 0:
            continue
        best = max(
            nx.community.modularity(g, as_communities(terms, labels), weight="weight")
            for labels in set_partitions(n)
        )
        found = greedy_modularity(sim, terms=terms).modularity
        assert found <= best + 1e-9
        assert found >= best - 0.1 * abs(best) - 1e-9


def test_higher_resolution_gives_no_fewer_clusters():
    terms, sim = two_cliques()
    coarse = greedy_modularity(sim, resolution=0.5, terms=terms)
    fine = greedy_modularity(sim, resolution=3.0, terms=terms)
    assert len(set(fine.clusters.values())) >= len(set(coarse.clusters.values()))


# ==================== TERM MAPS ====================

def test_term_map_files():
    result = build_term_map(BIOS, min_frequency=1, ngram_max=1)
    assert result.cluster_count == len(set(result.clusters.values()))
    data = result.to_dict()
    assert data["term_count"] == 4
    assert sorted(t for members in data["clusters"].values() for t in members) == ["a", "b", "c", "d"]

    positions = term_layout(result, LayoutParams(iterations=20, seed=1))
    assert set(positions) == {"a", "b", "c", "d"}
    lg = LayoutGraph.from_similarity([s.term for s in result.terms], result.similarity)
    assert positions == run_layout(lg, LayoutParams(iterations=20, seed=1, bh_theta=0.0)).positions
    lines = term_map_csv(result, positions).splitlines()
    assert lines[0] == "term,frequency,cluster,x,y"
    assert lines[1].startswith("b,3,")
    assert term_map_csv(result).splitlines()[0] == "term,frequency,cluster"

    sim_lines = similarity_csv(result.similarity).splitlines()
    assert sim_lines[0] == "term_a,term_b,strength"
    assert len(sim_lines) - 1 == len(result.similarity) // 2


def test_empty_term_map():
    result = build_term_map([], min_frequency=2)
    assert result.terms == [] and result.clusters == {}
    assert term_layout(result, LayoutParams(iterations=5)) == {}


def test_reference_sharer_term_map(reference_ds):
    cfg = PipelineConfig.default()
    items = [(u, reference_ds.profile(u).bio) for u in reference_ds.tweeter_ids
             if reference_ds.profile(u) is not None and reference_ds.profile(u).bio]
    result = build_term_map(tokenize_bios(items, cfg), min_frequency=2, seed=42)
    terms = {s.term for s in result.terms}
    assert {"esquerda", "obesidade", "família"} <= terms
    assert result.cluster_count >= 2
    again = build_term_map(tokenize_bios(items, cfg), min_frequency=2, seed=42)
    assert again.clusters == result.clusters
