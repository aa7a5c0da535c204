"""
In-memory knowledge base with set semantics and conjunctive pattern matching.

Triples are indexed three ways (SPO, POS, OSP) so every combination of bound
positions is answered by at most two dictionary lookups. Matching is a
left-to-right backtracking join over the pattern list.

Reads never take the lock and never mutate the indexes, so any number of
threads may match concurrently as long as nobody inserts at the same time;
`insert` is exclusive.
"""

import threading
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from app.db.syntax import parse_document, serialize
from app.db.terms import (Binding, GraphPattern, Literal, Term, Triple,
                          TriplePattern, Variable, binding_sort_key,
                          canonical_order, resolve)
from app.models.Vocabulary import default_prefixes

Index = dict[Term, dict[Term, set[Term]]]


# region knowledge base
class KnowledgeBase:
    """A finite set of ground triples. There is no retraction."""

    def __init__(self, triples: Iterable[Triple] = ()):
        self._lock = threading.RLock()
        self._triples: set[Triple] = set()
        self._spo: Index = {}
        self._pos: Index = {}
        self._osp: Index = {}
        self.insert(triples)

    def insert(self, triples: Iterable[Triple]) -> int:
        """
        Add triples, ignoring the ones already present.

        :return: Number of triples that were new
        :rtype: int
        """
        added = 0
        with self._lock:
            for triple in triples:
                if triple in self._triples:
                    continue
                self._triples.add(triple)
                s, p, o = triple.subject, triple.predicate, triple.object
                self._spo.setdefault(s, {}).setdefault(p, set()).add(o)
                self._pos.setdefault(p, {}).setdefault(o, set()).add(s)
                self._osp.setdefault(o, {}).setdefault(s, set()).add(p)
                added += 1
        return added

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, triple: object) -> bool:
        return triple in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.triples())

    def triples(self) -> list[Triple]:
        """All triples in canonical order."""
        return canonical_order(self._triples)

    def terms(self) -> set[Term]:
        """Every term that occurs in some position."""
        found: set[Term] = set()
        for triple in self._triples:
            found.update((triple.subject, triple.predicate, triple.object))
        return found

    def snapshot(self) -> "KnowledgeBase":
        """An independent copy that later inserts do not affect."""
        with self._lock:
            return KnowledgeBase(self._triples)

    def diff(self, other: "KnowledgeBase") -> tuple[list[Triple], list[Triple]]:
        """
        Compare with another knowledge base.

        :return: (triples only in `other`, triples only in this one), both canonical
        """
        return (
            canonical_order(other._triples - self._triples),
            canonical_order(self._triples - other._triples),
        )

    def candidates(
        self, s: Term | None, p: Term | None, o: Term | None
    ) -> Iterator[tuple[Term, Term, Term]]:
        """Yield stored triples agreeing with the bound positions (None = free)."""
        if s is not None and p is not None:
            objects = self._spo.get(s, {}).get(p, set())
            if o is not None:
                if o in objects:
                    yield s, p, o
                return
            for obj in objects:
                yield s, p, obj
        elif s is not None and o is not None:
            for pred in self._osp.get(o, {}).get(s, set()):
                yield s, pred, o
        elif p is not None and o is not None:
            for subj in self._pos.get(p, {}).get(o, set()):
                yield subj, p, o
        elif s is not None:
            for pred, objects in self._spo.get(s, {}).items():
                for obj in objects:
                    yield s, pred, obj
        elif p is not None:
            for obj, subjects in self._pos.get(p, {}).items():
                for subj in subjects:
                    yield subj, p, obj
        elif o is not None:
            for subj, predicates in self._osp.get(o, {}).items():
                for pred in predicates:
                    yield subj, pred, o
        else:
            for triple in self._triples:
                yield triple.subject, triple.predicate, triple.object
# endregion


# region matching
def _unify(
    pattern: TriplePattern, values: tuple[Term, Term, Term], binding: Binding
) -> Binding | None:
    extended = dict(binding)
    for term, value in zip(pattern.terms(), values):
        if isinstance(term, Variable):
            bound = extended.get(term.name)
            if bound is None:
                extended[term.name] = value
            elif bound != value:
                return None
    return extended


def match_pattern(
    pattern: GraphPattern, kb: KnowledgeBase, seed: Mapping[str, Term] | None = None
) -> list[Binding]:
    """
    Find every binding of the pattern variables that makes all patterns hold.

    :param pattern: Conjunction of triple patterns
    :type pattern: GraphPattern
    :param kb: Knowledge base to match against
    :type kb: KnowledgeBase
    :param seed: Values fixed in advance; entries for variables the pattern
        does not mention are ignored
    :type seed: Mapping[str, Term] | None
    :return: Distinct bindings whose domain is exactly `pattern.vars`, sorted by
        the expanded form of their values in variable-name order. An empty
        pattern yields one empty binding.
    :rtype: list[Binding]
    """
    names = pattern.vars
    start: Binding = {
        name: value for name, value in (seed or {}).items() if name in names
    }
    patterns = pattern.patterns
    solutions: dict[tuple[str, ...], Binding] = {}

    def extend(index: int, binding: Binding) -> None:
        if index == len(patterns):
            solutions.setdefault(binding_sort_key(binding), binding)
            return
        current = patterns[index]
        s = resolve(current.subject, binding)
        p = resolve(current.predicate, binding)
        o = resolve(current.object, binding)
        if isinstance(s, Literal) or isinstance(p, Literal):
            return
        for values in list(kb.candidates(s, p, o)):
            extended = _unify(current, values, binding)
            if extended is not None:
                extend(index + 1, extended)

    extend(0, start)
    return [solutions[key] for key in sorted(solutions)]


def pattern_holds(
    pattern: GraphPattern, kb: KnowledgeBase, seed: Mapping[str, Term] | None = None
) -> bool:
    """True when the pattern has at least one solution."""
    return bool(match_pattern(pattern, kb, seed))
# endregion


# region files
def load_kb(path: Path, prefixes: Mapping[str, str] = default_prefixes) -> KnowledgeBase:
    """Read a knowledge base file (UTF-8, knowledge base text format)."""
    return KnowledgeBase(parse_document(path.read_text(encoding="utf-8"), prefixes))


def dump_kb(kb: KnowledgeBase, path: Path) -> None:
    """Write the canonical serialization of a knowledge base."""
    path.write_text(serialize(kb.triples()), encoding="utf-8")
# endregion
