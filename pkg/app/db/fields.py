"""
Pydantic field types that read and write knowledge base terms as plain strings.

Description documents carry IRIs as bare strings and variables as `?name`;
these annotations convert on the way in and back on the way out.
"""

from typing import Annotated, Any

from pydantic import BeforeValidator, PlainSerializer

from app.db.terms import Iri, Variable


def as_iri(value: Any) -> Any:
    if isinstance(value, str):
        return Iri(value)
    return value


def as_variable(value: Any) -> Any:
    if isinstance(value, str):
        return Variable(value.removeprefix("?"))
    return value


IriField = Annotated[
    Iri,
    BeforeValidator(as_iri),
    PlainSerializer(lambda iri: iri.value, return_type=str),
]

VariableField = Annotated[
    Variable,
    BeforeValidator(as_variable),
    PlainSerializer(lambda variable: variable.n3(), return_type=str),
]
