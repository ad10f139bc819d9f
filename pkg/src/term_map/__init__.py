# Term Map - bio terms, association strength, modularity clusters
from src.term_map.terms import (
    CooccurrenceMatrix,
    Similarity,
    TermStats,
    association_strength,
    bio_terms,
    cooccurrence_matrix,
    extract_terms,
    strength,
)
from src.term_map.clustering import Clustering, cluster_terms, greedy_modularity, modularity
from src.term_map.mapping import TermMapResult, build_term_map, similarity_csv, term_layout, term_map_csv
