"""
Value types of the knowledge base: terms, triples, patterns and bindings.

All types are frozen pydantic dataclasses, so they validate on construction,
hash by value and can be shared across threads.
"""

from decimal import Decimal
from typing import Iterable, Iterator

from pydantic.dataclasses import dataclass

from app.db.datatypes import IriString, VariableName
from app.helpers.validations import is_valid_lexical
from app.models.Datatype import Datatype

ESCAPES: dict[str, str] = {
    "\\": "\\\\",
    "\"": "\\\"",
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
}


def escape_lexical(lexical: str) -> str:
    """Escape a lexical form for use between double quotes."""
    return "".join(ESCAPES.get(char, char) for char in lexical)


# region terms
@dataclass(frozen=True)
class Iri:
    """An absolute IRI."""
    value: IriString

    def n3(self) -> str:
        return f"<{self.value}>"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Literal:
    """A literal with one of the four supported datatypes."""
    lexical: str
    datatype: Datatype = Datatype.STRING

    def __post_init__(self):
        if not is_valid_lexical(self.lexical, self.datatype):
            raise ValueError(
                f"{self.lexical!r} is not a valid {self.datatype} lexical form"
            )

    def n3(self) -> str:
        quoted = f"\"{escape_lexical(self.lexical)}\""
        if self.datatype == Datatype.STRING:
            return quoted
        return f"{quoted}^^{self.datatype}"

    def to_python(self) -> str | int | Decimal | bool:
        """Native value of the literal, numbers as int or Decimal."""
        match self.datatype:
            case Datatype.INTEGER:
                return int(self.lexical)
            case Datatype.DECIMAL:
                return Decimal(self.lexical)
            case Datatype.BOOLEAN:
                return self.lexical == "true"
        return self.lexical

    def __str__(self) -> str:
        return self.lexical


Term = Iri | Literal

Binding = dict[str, Term]
"""Solution mapping from variable name (without "?") to term."""


@dataclass(frozen=True)
class Variable:
    """A pattern variable, written `?name`."""
    name: VariableName

    def n3(self) -> str:
        return f"?{self.name}"
# endregion


# region triples
@dataclass(frozen=True)
class Triple:
    """A ground statement. Subject and predicate are always IRIs."""
    subject: Iri
    predicate: Iri
    object: Iri | Literal

    def n3(self) -> str:
        return f"{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} ."

    def sort_key(self) -> tuple[str, str, str]:
        return (self.subject.n3(), self.predicate.n3(), self.object.n3())


def canonical_order(triples: Iterable[Triple]) -> list[Triple]:
    """Distinct triples sorted by (subject, predicate, object) in expanded form."""
    return sorted(set(triples), key=Triple.sort_key)
# endregion


# region patterns
PatternTerm = Variable | Iri | Literal


def resolve(term: PatternTerm, binding: Binding) -> Term | None:
    """Ground a pattern term under a binding, None when it stays unbound."""
    if isinstance(term, Variable):
        return binding.get(term.name)
    return term


@dataclass(frozen=True)
class TriplePattern:
    """A triple whose positions may hold variables."""
    subject: Variable | Iri
    predicate: Variable | Iri
    object: Variable | Iri | Literal

    def terms(self) -> tuple[PatternTerm, PatternTerm, PatternTerm]:
        return (self.subject, self.predicate, self.object)

    def variables(self) -> list[str]:
        """Variable names in position order, repeats included."""
        return [term.name for term in self.terms() if isinstance(term, Variable)]

    def substitute(self, binding: Binding) -> Triple | None:
        """
        Instantiate the pattern.

        :return: The ground triple, or None when a variable is unbound or a
            literal lands in subject or predicate position.
        """
        subject = resolve(self.subject, binding)
        predicate = resolve(self.predicate, binding)
        object_ = resolve(self.object, binding)
        if not isinstance(subject, Iri) or not isinstance(predicate, Iri) or object_ is None:
            return None
        return Triple(subject, predicate, object_)

    def n3(self) -> str:
        return " ".join(term.n3() for term in self.terms()) + " ."


@dataclass(frozen=True)
class GraphPattern:
    """An ordered conjunction of triple patterns."""
    patterns: tuple[TriplePattern, ...] = ()

    @property
    def vars(self) -> frozenset[str]:
        """Names of all variables occurring in the patterns."""
        return frozenset(
            name for pattern in self.patterns for name in pattern.variables()
        )

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self) -> Iterator[TriplePattern]:
        return iter(self.patterns)

    def __add__(self, other: "GraphPattern") -> "GraphPattern":
        return GraphPattern(self.patterns + other.patterns)

    def instantiate(self, binding: Binding) -> list[Triple]:
        """Ground every pattern that the binding fully covers."""
        triples = (pattern.substitute(binding) for pattern in self.patterns)
        return [triple for triple in triples if triple is not None]

    def n3(self) -> str:
        """Pattern text with expanded IRIs, one pattern per line."""
        return "\n".join(pattern.n3() for pattern in self.patterns)
# endregion


# region bindings
def binding_to_text(binding: Binding, names: Iterable[str] | None = None) -> str:
    """
    Canonical serialization of a binding in variable-name order.

    :param names: Restrict to these variable names when given.
    """
    selected = sorted(binding if names is None else set(names) & set(binding))
    return "\n".join(f"?{name}={binding[name].n3()}" for name in selected)


def binding_sort_key(binding: Binding) -> tuple[str, ...]:
    return tuple(binding[name].n3() for name in sorted(binding))
# endregion
