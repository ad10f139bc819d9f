"""
Term extraction and co-occurrence.

A term is a token or (optionally) an adjacent token pair from a preprocessed
bio. Frequencies and co-occurrences count bios, not occurrences.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Set, Tuple, Union

import numpy as np
from scipy import sparse

from config.settings import DEFAULT_MIN_FREQUENCY, DEFAULT_NGRAM_MAX
from src.text_engine.bio_pipeline import TokenizedBio

logger = logging.getLogger(__name__)

Similarity = Dict[Tuple[str, str], float]


@dataclass(frozen=True)
class TermStats:
    term: str
    frequency: int


def bio_terms(tokens: Sequence[str], ngram_max: int = DEFAULT_NGRAM_MAX) -> Set[str]:
    terms = set(tokens)
    if ngram_max >= 2:
        terms.update(f"{a} {b}" for a, b in zip(tokens, tokens[1:]))
    return terms


def extract_terms(bios: Sequence[TokenizedBio], min_frequency: int = DEFAULT_MIN_FREQUENCY,
                  ngram_max: int = DEFAULT_NGRAM_MAX) -> List[TermStats]:
    """Terms with document frequency >= min_frequency, most frequent first, ties by term"""
    if min_frequency < 1:
        raise ValueError("min_frequency must be >= 1")
    if ngram_max not in (1, 2):
        raise ValueError("ngram_max must be 1 or 2")
    counts: Dict[str, int] = {}
    for bio in bios:
        for term in bio_terms(bio.tokens, ngram_max):
            counts[term] = counts.get(term, 0) + 1
    kept = [TermStats(t, f) for t, f in counts.items() if f >= min_frequency]
    kept.sort(key=lambda s: (-s.frequency, s.term))
    logger.debug("Extracted %d of %d candidate terms", len(kept), len(counts))
    return kept


@dataclass(frozen=True, eq=False)
class CooccurrenceMatrix:
    terms: Tuple[str, ...]
    counts: sparse.csr_matrix

    def index(self, term: str) -> int:
        return self.terms.index(term)

    def count(self, a: str, b: str) -> int:
        return int(self.counts[self.index(a), self.index(b)])


def _term_names(terms: Sequence[Union[str, TermStats]]) -> Tuple[str, ...]:
    return tuple(t.term if isinstance(t, TermStats) else t for t in terms)


def incidence_matrix(bios: Sequence[TokenizedBio], terms: Sequence[str], ngram_max: int) -> sparse.csr_matrix:
    """Binary bios x terms matrix"""
    column = {t: j for j, t in enumerate(terms)}
    rows, cols = [], []
    for i, bio in enumerate(bios):
        for term in bio_terms(bio.tokens, ngram_max):
            j = column.get(term)
            if j is not None:
                rows.append(i)
                cols.append(j)
    data = np.ones(len(rows), dtype=np.int64)
    return sparse.csr_matrix((data, (rows, cols)), shape=(len(bios), len(terms)))


def cooccurrence_matrix(bios: Sequence[TokenizedBio], terms: Sequence[Union[str, TermStats]],
                        ngram_max: int = DEFAULT_NGRAM_MAX) -> CooccurrenceMatrix:
    """counts[i, j] = bios holding both terms; symmetric with a zero diagonal"""
    names = _term_names(terms)
    if not names:
        return CooccurrenceMatrix(terms=names, counts=sparse.csr_matrix((0, 0), dtype=np.int64))
    x = incidence_matrix(bios, names, ngram_max)
    counts = (x.T @ x).tocsr()
    counts = (counts - sparse.diags(counts.diagonal())).tocsr()
    counts.eliminate_zeros()
    return CooccurrenceMatrix(terms=names, counts=counts)


def association_strength(c: CooccurrenceMatrix, freqs: Union[Mapping[str, int], Sequence[TermStats]]) -> Similarity:
    """s(i, j) = c_ij / (f_i * f_j) for every co-occurring pair, both key orders"""
    if not isinstance(freqs, Mapping):
        freqs = {s.term: s.frequency for s in freqs}
    f = np.array([freqs[t] for t in c.terms], dtype=float)
    if (f <= 0).any():
        raise ValueError("term frequencies must be positive")
    coo = c.counts.tocoo()
    sim: Similarity = {}
    for i, j, v in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()):
        sim[(c.terms[i], c.terms[j])] = v / (f[i] * f[j])
    return dict(sorted(sim.items()))


def strength(sim: Similarity, a: str, b: str) -> float:
    return sim.get((a, b), 0.0)
