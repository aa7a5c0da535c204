from enum import StrEnum, auto


class Datatype(StrEnum):
    """
    Enum for literal datatypes.

    Represents the datatypes a literal can carry in the knowledge base.
    """
    STRING = auto()
    INTEGER = auto()
    DECIMAL = auto()
    BOOLEAN = auto()

    @property
    def is_numeric(self) -> bool:
        return self in (Datatype.INTEGER, Datatype.DECIMAL)
