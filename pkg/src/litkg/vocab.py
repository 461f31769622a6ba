"""Unified term vocabulary for entities, predicates, and words.

TermIds are dense non-negative ints, assigned in first-seen order and stable
for the lifetime of the vocabulary. A term's kind is fixed at first
insertion; labels may only be attached to entities and predicates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import TermKindError, UnknownTerm

TermId = int


class TermKind(enum.Enum):
    ENTITY = "entity"
    PREDICATE = "predicate"
    WORD = "word"


@dataclass
class Vocabulary:
    terms: list[str] = field(default_factory=list)
    kinds: list[TermKind] = field(default_factory=list)
    labels: list[str | None] = field(default_factory=list)
    _index: dict[str, TermId] = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self._index

    def intern(self, term: str, kind: TermKind) -> TermId:
        """Return the id of ``term``, inserting it if new.

        Raises TermKindError if the term already exists with another kind.
        """
        tid = self._index.get(term)
        if tid is not None:
            if self.kinds[tid] is not kind:
                raise TermKindError(
                    f"term {term!r} is {self.kinds[tid].value}, "
                    f"cannot re-intern as {kind.value}"
                )
            return tid
        tid = len(self.terms)
        self.terms.append(term)
        self.kinds.append(kind)
        self.labels.append(None)
        self._index[term] = tid
        return tid

    def id_of(self, term: str) -> TermId:
        tid = self._index.get(term)
        if tid is None:
            raise UnknownTerm(term)
        return tid

    def get(self, term: str) -> TermId | None:
        return self._index.get(term)

    def term(self, tid: TermId) -> str:
        self._check(tid)
        return self.terms[tid]

    def kind(self, tid: TermId) -> TermKind:
        self._check(tid)
        return self.kinds[tid]

    def set_label(self, tid: TermId, label: str) -> None:
        self._check(tid)
        if self.kinds[tid] is TermKind.WORD:
            raise TermKindError("labels attach only to entities and predicates")
        self.labels[tid] = label

    def ids_of_kind(self, kind: TermKind) -> list[TermId]:
        return [i for i, k in enumerate(self.kinds) if k is kind]

    def _check(self, tid: TermId) -> None:
        if not isinstance(tid, int) or tid < 0 or tid >= len(self.terms):
            raise UnknownTerm(tid)


def local_name(iri: str) -> str:
    """Fallback display name: text after the last '/' or '#', '_' as space."""
    cut = max(iri.rfind("/"), iri.rfind("#")) + 1
    return iri[cut:].replace("_", " ")


def entity_label(v: Vocabulary, tid: TermId) -> str:
    """Stored label of a term, or the fallback derived from its IRI."""
    v._check(tid)
    stored = v.labels[tid]
    if stored is not None:
        return stored
    return local_name(v.terms[tid])
