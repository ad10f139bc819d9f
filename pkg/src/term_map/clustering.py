"""
Modularity clustering of the term similarity graph.

The first pass is networkx's greedy (Clauset-Newman-Moore) merging. Rounds
of seeded single-term moves follow, each closed by another greedy pass over
the graph of current clusters; a round is kept only if it raises modularity.
Cluster ids run 1..k, largest cluster first.

pass_history holds the modularity after the first pass and after each kept round.
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from config.settings import DEFAULT_RESOLUTION, DEFAULT_SEED

logger = logging.getLogger(__name__)

MIN_GAIN = 1e-12
MAX_SWEEPS = 100


@dataclass(frozen=True)
class Clustering:
    clusters: Dict[str, int]
    modularity: float
    pass_history: Tuple[float, ...] = field(default_factory=tuple)


def _terms_of(sim: Mapping[Tuple[str, str], float]) -> List[str]:
    return sorted({t for pair in sim for t in pair})


def similarity_graph(terms: Sequence[str], sim: Mapping[Tuple[str, str], float]) -> nx.Graph:
    """Undirected term graph in term order; association strength is the `weight`"""
    index = {t: i for i, t in enumerate(terms)}
    g = nx.Graph()
    g.add_nodes_from(terms)
    pairs = sorted(((index[a], index[b]), s) for (a, b), s in sim.items()
                   if a in index and b in index and index[a] < index[b] and s > 0)
    for (i, j), s in pairs:
        g.add_edge(terms[i], terms[j], weight=float(s))
    return g


def _labels(terms: Sequence[str], communities: Iterable[Iterable]) -> np.ndarray:
    index = {t: i for i, t in enumerate(terms)}
    labels = np.empty(len(terms), dtype=np.int64)
    for c, group in enumerate(communities):
        for t in group:
            labels[index[t]] = c
    return labels


def _communities(terms: Sequence[str], labels: np.ndarray) -> List[Set[str]]:
    groups: Dict[int, Set[str]] = {}
    for t, c in zip(terms, labels.tolist()):
        groups.setdefault(c, set()).add(t)
    return list(groups.values())


def _score(g: nx.Graph, terms: Sequence[str], labels: np.ndarray, resolution: float) -> float:
    if g.size(weight="weight") == 0:
        return 0.0
    return float(nx.community.modularity(g, _communities(terms, labels), weight="weight",
                                         resolution=resolution))


def modularity(sim: Mapping[Tuple[str, str], float], clusters: Mapping[str, int],
               resolution: float = DEFAULT_RESOLUTION, terms: Optional[Sequence[str]] = None) -> float:
    """Weighted modularity with a resolution parameter; 0 for an edgeless graph"""
    terms = list(terms) if terms is not None else sorted(clusters)
    labels = np.array([clusters[t] for t in terms])
    return _score(similarity_graph(terms, sim), terms, labels, resolution)


# ==================== GREEDY PASSES ====================

def _greedy_pass(g: nx.Graph, resolution: float) -> List[frozenset]:
    return list(nx.community.greedy_modularity_communities(g, weight="weight", resolution=resolution))


def _merge_clusters(g: nx.Graph, terms: Sequence[str], labels: np.ndarray, resolution: float) -> np.ndarray:
    """Greedy pass over the graph whose nodes are the current clusters; internal weight becomes a self-loop"""
    index = {t: i for i, t in enumerate(terms)}
    quotient = nx.Graph()
    quotient.add_nodes_from(sorted(set(labels.tolist())))
    for a, b, w in g.edges(data="weight"):
        ca, cb = int(labels[index[a]]), int(labels[index[b]])
        total = quotient.get_edge_data(ca, cb, default={}).get("weight", 0.0)
        quotient.add_edge(ca, cb, weight=total + w)
    merged = {}
    for c, group in enumerate(_greedy_pass(quotient, resolution)):
        for old in group:
            merged[old] = c
    return np.array([merged[c] for c in labels.tolist()], dtype=np.int64)


def _refine(w: np.ndarray, labels: np.ndarray, resolution: float, seed: int) -> np.ndarray:
    """Move single terms to a neighbouring cluster while that strictly raises modularity"""
    labels = labels.copy()
    n = len(w)
    strength = w.sum(axis=1)
    m = w.sum() / 2
    rng = random.Random(seed)
    order = list(range(n))

    for _ in range(MAX_SWEEPS):
        rng.shuffle(order)
        moved = False
        for i in order:
            k = int(labels.max()) + 1
            own = labels[i]
            to_cluster = np.bincount(labels, weights=w[i], minlength=k)
            totals = np.bincount(labels, weights=strength, minlength=k)
            rest_of_own = totals[own] - strength[i]
            gain = ((to_cluster - to_cluster[own]) / m
                    - resolution * strength[i] * (totals - rest_of_own) / (2 * m * m))
            gain[own] = -np.inf
            gain[to_cluster <= 0] = -np.inf
            best = int(np.argmax(gain))
            if gain[best] > MIN_GAIN:
                labels[i] = best
                moved = True
        if not moved:
            break
    return labels


def _numbered(terms: Sequence[str], labels: np.ndarray) -> Dict[str, int]:
    groups: Dict[int, List[int]] = {}
    for i, c in enumerate(labels.tolist()):
        groups.setdefault(c, []).append(i)
    ranked = sorted(groups.values(), key=lambda g: (-len(g), g[0]))
    clusters = {}
    for cid, group in enumerate(ranked, 1):
        for i in group:
            clusters[terms[i]] = cid
    return {t: clusters[t] for t in terms}


def greedy_modularity(sim: Mapping[Tuple[str, str], float], resolution: float = DEFAULT_RESOLUTION,
                      seed: int = DEFAULT_SEED, terms: Optional[Sequence[str]] = None) -> Clustering:
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    if any(s < 0 for s in sim.values()):
        raise ValueError("similarities must be non-negative")
    terms = list(terms) if terms is not None else _terms_of(sim)
    if not terms:
        return Clustering(clusters={}, modularity=0.0)
    g = similarity_graph(terms, sim)
    if g.size(weight="weight") == 0:
        return Clustering(clusters={t: i for i, t in enumerate(terms, 1)}, modularity=0.0)

    w = nx.to_numpy_array(g, nodelist=terms, weight="weight")
    best = _labels(terms, _greedy_pass(g, resolution))
    q = _score(g, terms, best, resolution)
    history = [q]
    for sweep in range(MAX_SWEEPS):
        candidate = _merge_clusters(g, terms, _refine(w, best, resolution, seed + sweep), resolution)
        q_candidate = _score(g, terms, candidate, resolution)
        if q_candidate <= q + MIN_GAIN:
            break
        best, q = candidate, q_candidate
        history.append(q)
    # Never settle below the connected-components split
    components = _labels(terms, nx.connected_components(g))
    q_components = _score(g, terms, components, resolution)
    if q_components > q + MIN_GAIN:
        best, q = components, q_components
        history.append(q)

    logger.debug("Clustered %d terms into %d clusters (Q=%.4f)", len(terms), len(np.unique(best)), q)
    return Clustering(clusters=_numbered(terms, best), modularity=q, pass_history=tuple(history))


def cluster_terms(sim: Mapping[Tuple[str, str], float], resolution: float = DEFAULT_RESOLUTION,
                  seed: int = DEFAULT_SEED, terms: Optional[Sequence[str]] = None) -> Dict[str, int]:
    """term -> cluster id (1..k); every term is assigned, singletons allowed"""
    return greedy_modularity(sim, resolution, seed, terms).clusters
