"""Entity linking over literal texts and GloVe-style window counting.

Linking is deliberately rudimentary: exact token-sequence lookup against
normalized entity labels, greedy left to right, longest span first, ties
to the smallest term id. Tokens that match no label are interned into the
vocabulary as words.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .matrix import SparseMatrix
from .vocab import TermKind, Vocabulary, entity_label

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase and split on any run of non-alphanumeric characters."""
    return _TOKEN_RE.findall(text.lower())


class Weighting(enum.Enum):
    HARMONIC = "harmonic"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class TextCoocParams:
    window: int = 5
    weighting: Weighting = Weighting.HARMONIC
    min_word_count: int = 5

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.min_word_count < 0:
            raise ValueError("min_word_count must be >= 0")


@dataclass
class EntityMatcher:
    """Normalized label token sequences mapped to term ids."""

    patterns: dict[tuple[str, ...], int] = field(default_factory=dict)
    max_len: int = 0
    skipped_empty: int = 0
    collisions: int = 0


def build_matcher(v: Vocabulary, match_predicates: bool = False) -> EntityMatcher:
    """One pattern per entity with a non-empty normalized label.

    Label collisions keep the smallest term id. With ``match_predicates``
    the predicate labels participate too.
    """
    m = EntityMatcher()
    ids = v.ids_of_kind(TermKind.ENTITY)
    if match_predicates:
        ids = sorted(ids + v.ids_of_kind(TermKind.PREDICATE))
    for tid in ids:
        key = tuple(tokenize(entity_label(v, tid)))
        if not key:
            m.skipped_empty += 1
            continue
        old = m.patterns.get(key)
        if old is not None:
            m.collisions += 1
            m.patterns[key] = min(old, tid)
        else:
            m.patterns[key] = tid
            m.max_len = max(m.max_len, len(key))
    return m


def link_text(text: str, m: EntityMatcher, v: Vocabulary) -> list[int]:
    """Replace label matches with entity ids, intern the rest as words.

    Greedy left-to-right scan; at each position the longest matching span
    wins and the scan resumes after it, so every token lands in exactly
    one output element.
    """
    toks = tokenize(text)
    out: list[int] = []
    i = 0
    n = len(toks)
    while i < n:
        matched = False
        for span in range(min(m.max_len, n - i), 0, -1):
            tid = m.patterns.get(tuple(toks[i : i + span]))
            if tid is not None:
                out.append(tid)
                i += span
                matched = True
                break
        if not matched:
            out.append(v.intern(toks[i], TermKind.WORD))
            i += 1
    return out


def text_cooccurrence(
    docs: Sequence[Sequence[int]],
    params: TextCoocParams,
    vocab: Vocabulary,
) -> SparseMatrix:
    """Count symmetric sliding-window co-occurrences over linked documents.

    Every ordered pair at token distance d <= window adds 1/d (harmonic)
    or 1 (uniform) to both (a, b) and (b, a). Windows never cross document
    boundaries. Words occurring fewer than ``min_word_count`` times in the
    corpus are removed from the result afterwards; entities and predicates
    are never dropped.

    Accumulation is distance-major, which pins the exact float result.
    """
    dim = len(vocab)
    lens = [len(d) for d in docs]
    total = sum(lens)
    if total == 0:
        return SparseMatrix.empty(dim)

    toks = np.zeros(total, dtype=np.int64)
    doc_of = np.zeros(total, dtype=np.int64)
    pos = 0
    for k, d in enumerate(docs):
        toks[pos : pos + len(d)] = d
        doc_of[pos : pos + len(d)] = k
        pos += len(d)

    focus_parts = []
    context_parts = []
    weight_parts = []
    for dist in range(1, params.window + 1):
        if dist >= total:
            break
        same_doc = doc_of[:-dist] == doc_of[dist:]
        a = toks[:-dist][same_doc]
        b = toks[dist:][same_doc]
        if a.size == 0:
            continue
        wgt = 1.0 / dist if params.weighting is Weighting.HARMONIC else 1.0
        w = np.full(a.shape[0], wgt, dtype=np.float64)
        focus_parts.append(a)
        context_parts.append(b)
        weight_parts.append(w)
        focus_parts.append(b)
        context_parts.append(a)
        weight_parts.append(w)

    if not focus_parts:
        return SparseMatrix.empty(dim)
    m = SparseMatrix.from_coo(
        np.concatenate(focus_parts),
        np.concatenate(context_parts),
        np.concatenate(weight_parts),
        dim,
    )
    if params.min_word_count > 0:
        m = _drop_rare_words(m, docs, params.min_word_count, vocab)
    return m


def _drop_rare_words(
    m: SparseMatrix, docs: Sequence[Sequence[int]], min_count: int, vocab: Vocabulary
) -> SparseMatrix:
    freq = np.zeros(len(vocab), dtype=np.int64)
    for d in docs:
        if len(d):
            freq += np.bincount(np.asarray(d, dtype=np.int64), minlength=len(vocab))
    keep = np.ones(len(vocab), dtype=bool)
    for tid, kind in enumerate(vocab.kinds):
        if kind is TermKind.WORD and freq[tid] < min_count:
            keep[tid] = False
    mask = keep[m.focus] & keep[m.context]
    return SparseMatrix(
        dim=m.dim, focus=m.focus[mask], context=m.context[mask], weight=m.weight[mask]
    )


def write_linked_corpus(
    docs: Iterable[Sequence[int]], v: Vocabulary, out: IO[str]
) -> None:
    """Debug dump: one document per line, entities rendered as <IRI>."""
    for d in docs:
        rendered = []
        for tid in d:
            if v.kinds[tid] is TermKind.WORD:
                rendered.append(v.terms[tid])
            else:
                rendered.append(f"<{v.terms[tid]}>")
        out.write(" ".join(rendered) + "\n")
