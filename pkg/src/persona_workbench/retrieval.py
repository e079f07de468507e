"""Lexical retrieval over corpus passages.

One passage is built per (record, theme) pair; queries are always restricted
to a single theme so grounding never leaks across contexts. Scoring is BM25
(k1=1.2, b=0.75) with idf = ln(1 + (N - df + 0.5) / (df + 0.5)). The index is
immutable after construction; rebuilds swap in a new instance.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .corpus import Corpus, Theme, iter_theme_texts
from .errors import RetrievalError

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"[^\W_]+")

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75


def tokenize(text: str) -> list[str]:
    """Lowercase and split on runs of non-alphanumeric characters."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class Passage:
    """A theme-scoped grounding passage derived from one story record."""

    passage_id: int
    record_id: str
    theme: Theme
    text: str
    tokens: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.text:
            raise RetrievalError("passage text must be non-empty")
        if self.passage_id < 0:
            raise RetrievalError("passage_id must be >= 0")
        expected = tuple(tokenize(self.text))
        if not self.tokens:
            object.__setattr__(self, "tokens", expected)
        elif self.tokens != expected:
            raise RetrievalError("tokens do not match tokenize(text)")


def passages_from_corpus(corpus: Corpus) -> list[Passage]:
    """One passage per (record, labeled theme), ids sequential in corpus order."""
    passages: list[Passage] = []
    for record in corpus.records:
        for theme, text in iter_theme_texts(record):
            passages.append(
                Passage(
                    passage_id=len(passages),
                    record_id=record.record_id,
                    theme=theme,
                    text=text,
                )
            )
    return passages


@dataclass(frozen=True)
class RetrievalIndex:
    """Immutable inverted index with BM25 parameters.

    ``postings`` maps each term to (passage_id, term frequency) pairs sorted
    by passage_id ascending.
    """

    postings: Mapping[str, tuple[tuple[int, int], ...]]
    doc_len: Mapping[int, int]
    avg_doc_len: float
    passage_count: int
    passages: Mapping[int, Passage]
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B
    _tf: Mapping[str, Mapping[int, int]] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        # O(1) (term, passage) frequency lookups for scoring
        tf = {term: dict(pairs) for term, pairs in self.postings.items()}
        object.__setattr__(self, "_tf", tf)


def build_index(
    passages: Sequence[Passage], k1: float = DEFAULT_K1, b: float = DEFAULT_B
) -> RetrievalIndex:
    """Build the inverted index; duplicate passage ids are an error."""
    postings_mut: dict[str, list[tuple[int, int]]] = {}
    doc_len: dict[int, int] = {}
    by_id: dict[int, Passage] = {}
    for passage in sorted(passages, key=lambda p: p.passage_id):
        if passage.passage_id in by_id:
            raise RetrievalError(f"duplicate passage_id {passage.passage_id}")
        by_id[passage.passage_id] = passage
        doc_len[passage.passage_id] = len(passage.tokens)
        counts: dict[str, int] = {}
        for term in passage.tokens:
            counts[term] = counts.get(term, 0) + 1
        for term, freq in counts.items():
            postings_mut.setdefault(term, []).append((passage.passage_id, freq))

    postings = {term: tuple(pairs) for term, pairs in postings_mut.items()}
    total = sum(doc_len.values())
    avg = total / len(doc_len) if doc_len else 0.0
    return RetrievalIndex(
        postings=postings,
        doc_len=doc_len,
        avg_doc_len=avg,
        passage_count=len(by_id),
        passages=by_id,
        k1=k1,
        b=b,
    )


def _idf(index: RetrievalIndex, term: str) -> float:
    df = len(index.postings.get(term, ()))
    n = index.passage_count
    return math.log(1.0 + (n - df + 0.5) / (df + 0.5))


def bm25_score(index: RetrievalIndex, query_terms: Sequence[str], passage_id: int) -> float:
    """BM25 score of one passage; repeated query terms contribute once each
    occurrence. Terms absent from the passage contribute 0.
    """
    if passage_id not in index.doc_len:
        raise RetrievalError(f"unknown passage_id {passage_id}")
    length = index.doc_len[passage_id]
    norm = index.k1 * (1.0 - index.b + index.b * length / index.avg_doc_len) if index.avg_doc_len else index.k1
    score = 0.0
    for term in query_terms:
        tf = index._tf.get(term, {}).get(passage_id, 0)
        if tf == 0:
            continue
        score += _idf(index, term) * (tf * (index.k1 + 1.0)) / (tf + norm)
    return score


def retrieve(
    index: RetrievalIndex, query: str, theme: Theme, k: int
) -> list[tuple[Passage, float]]:
    """Top-k theme-restricted passages by BM25 score.

    Sorted by score descending, ties broken by passage_id ascending;
    zero-score passages are excluded. An empty index yields an empty list so
    chat degrades to ungrounded persona voice.
    """
    if k < 1:
        raise RetrievalError(f"k must be >= 1, got {k}")
    if not isinstance(theme, Theme):
        raise RetrievalError(f"unknown theme {theme!r}")
    if index.passage_count == 0:
        logger.warning("retrieve() on empty index; responses will be ungrounded")
        return []
    query_terms = tokenize(query)
    scored: list[tuple[Passage, float]] = []
    for passage_id in sorted(index.passages):
        passage = index.passages[passage_id]
        if passage.theme is not theme:
            continue
        score = bm25_score(index, query_terms, passage_id)
        if score > 0.0:
            scored.append((passage, score))
    scored.sort(key=lambda item: (-item[1], item[0].passage_id))
    return scored[:k]
