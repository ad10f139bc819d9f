"""
Term maps: extraction, association strength, clustering and placement in one call.

A run builds two maps, one from the sharers' bios and one from the bios of
the users they mention.
"""

import csv
import io
import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from config.settings import (
    DEFAULT_MIN_FREQUENCY,
    DEFAULT_NGRAM_MAX,
    DEFAULT_RESOLUTION,
    DEFAULT_SEED,
    TERM_LAYOUT_EXACT_MAX_NODES,
)
from src.layout_engine.forceatlas2 import LayoutGraph, LayoutParams, run_layout
from src.term_map.clustering import greedy_modularity
from src.term_map.terms import Similarity, TermStats, association_strength, cooccurrence_matrix, extract_terms
from src.text_engine.bio_pipeline import TokenizedBio

logger = logging.getLogger(__name__)

TERM_MAP_FIELDS = ["term", "frequency", "cluster"]


@dataclass(frozen=True)
class TermMapResult:
    terms: List[TermStats]
    clusters: Dict[str, int]
    similarity: Similarity
    modularity: float = 0.0

    @property
    def cluster_count(self) -> int:
        return len(set(self.clusters.values()))

    def members(self, cluster_id: int) -> List[str]:
        """Terms of one cluster, most frequent first"""
        return [s.term for s in self.terms if self.clusters[s.term] == cluster_id]

    def to_dict(self) -> Dict:
        return {
            "term_count": len(self.terms),
            "cluster_count": self.cluster_count,
            "modularity": self.modularity,
            "clusters": {str(c): self.members(c) for c in range(1, self.cluster_count + 1)},
        }


def build_term_map(bios: Sequence[TokenizedBio], min_frequency: int = DEFAULT_MIN_FREQUENCY,
                   ngram_max: int = DEFAULT_NGRAM_MAX, resolution: float = DEFAULT_RESOLUTION,
                   seed: int = DEFAULT_SEED) -> TermMapResult:
    terms = extract_terms(bios, min_frequency, ngram_max)
    names = [s.term for s in terms]
    sim = association_strength(cooccurrence_matrix(bios, terms, ngram_max), terms) if terms else {}
    clustering = greedy_modularity(sim, resolution, seed, terms=names)
    logger.info("Term map: %d terms from %d bios in %d clusters",
                len(terms), len(bios), len(set(clustering.clusters.values())))
    return TermMapResult(terms=terms, clusters=clustering.clusters, similarity=sim,
                         modularity=clustering.modularity)


def term_layout(result: TermMapResult, params: LayoutParams) -> Dict[str, Tuple[float, float]]:
    """Place terms with the layout engine; edge weight is association strength"""
    if not result.terms:
        return {}
    lg = LayoutGraph.from_similarity([s.term for s in result.terms], result.similarity)
    if len(lg) <= TERM_LAYOUT_EXACT_MAX_NODES:
        params = params.with_overrides(bh_theta=0.0)
    return run_layout(lg, params).positions


def term_map_csv(result: TermMapResult,
                 positions: Optional[Mapping[str, Tuple[float, float]]] = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TERM_MAP_FIELDS + (["x", "y"] if positions is not None else []))
    for s in result.terms:
        row = [s.term, s.frequency, result.clusters[s.term]]
        if positions is not None:
            x, y = positions[s.term]
            row += [repr(float(x)), repr(float(y))]
        writer.writerow(row)
    return buf.getvalue()


def similarity_csv(sim: Similarity) -> str:
    """One row per unordered pair (term_a < term_b)"""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["term_a", "term_b", "strength"])
    for (a, b), s in sorted(sim.items()):
        if a < b:
            writer.writerow([a, b, repr(float(s))])
    return buf.getvalue()
