"""
Smart rules: condition pattern, literal guards and an emit template.

A rule is evaluated against the request graph of a single invocation; when it
fires, its instantiated template is the response and the wrapped backend is
never called.
"""

import operator
from decimal import Decimal
from typing import Any, Callable

from pydantic.dataclasses import dataclass

from app.db.datatypes import VariableName
from app.db.terms import GraphPattern, Literal, Term, Triple, TriplePattern
from app.helpers.exceptions import GuardTypeError
from app.models.Comparator import Comparator
from app.models.Datatype import Datatype

comparisons: dict[Comparator, Callable[[Any, Any], bool]] = {
    Comparator.LT: operator.lt,
    Comparator.LE: operator.le,
    Comparator.GT: operator.gt,
    Comparator.GE: operator.ge,
    Comparator.EQ: operator.eq,
    Comparator.NE: operator.ne,
}


# region classes
@dataclass(frozen=True)
class Guard:
    """Comparison of a bound variable against a literal, e.g. `?v >= 20`."""
    left: VariableName
    comparator: Comparator
    right: Literal

    def holds(self, value: Term) -> bool:
        """
        Evaluate the guard for the value bound to `left`.

        Numbers compare numerically across integer and decimal; other
        datatypes only support == and != against the same datatype.

        :raises GuardTypeError: If the value cannot be compared with `right`
        """
        if not isinstance(value, Literal):
            raise GuardTypeError(f"?{self.left} is bound to an IRI, not a literal")

        compare = comparisons[self.comparator]
        if value.datatype.is_numeric and self.right.datatype.is_numeric:
            return compare(Decimal(value.lexical), Decimal(self.right.lexical))

        if self.comparator in (Comparator.EQ, Comparator.NE) and value.datatype == self.right.datatype:
            return compare(value.lexical, self.right.lexical)

        raise GuardTypeError(
            f"cannot compare {value.datatype} ?{self.left} with "
            f"{self.right.datatype} using {self.comparator.symbol}"
        )

    def to_text(self) -> str:
        match self.right.datatype:
            case Datatype.STRING:
                right = self.right.n3()
            case _:
                right = self.right.lexical
        return f"?{self.left} {self.comparator.symbol} {right}"


@dataclass(frozen=True)
class SmartRule:
    """
    Condition → action rule embedded in a service wrapper.

    Emit variables that the condition does not bind are fresh outputs and get
    minted IRIs when the rule fires.
    """
    name: str
    condition: GraphPattern
    guards: tuple[Guard, ...] = ()
    emit: tuple[TriplePattern, ...] = ()

    def __post_init__(self):
        if not self.name:
            raise ValueError("rule name cannot be empty")
        if not self.emit:
            raise ValueError(f"rule {self.name!r} must emit at least one triple")
        condition_vars = self.condition.vars
        for guard in self.guards:
            if guard.left not in condition_vars:
                raise ValueError(
                    f"rule {self.name!r}: guard variable ?{guard.left} does not occur in the condition"
                )

    @property
    def emit_pattern(self) -> GraphPattern:
        return GraphPattern(self.emit)

    @property
    def fresh_variables(self) -> frozenset[str]:
        """Emit variables the condition does not bind."""
        return self.emit_pattern.vars - self.condition.vars

    def to_block(self) -> dict[str, Any]:
        """The rule as it is written in a description file."""
        return {
            "name": self.name,
            "condition": self.condition.n3(),
            "guards": [guard.to_text() for guard in self.guards],
            "emit": self.emit_pattern.n3(),
        }


@dataclass(frozen=True)
class RuleOutcome:
    """Result of evaluating a rule list against one request."""
    fired: bool
    emitted: tuple[Triple, ...] = ()
    rule_name: str | None = None
# endregion
