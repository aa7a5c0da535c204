from enum import StrEnum, auto


class Outcome(StrEnum):
    """
    Enum for the outcome of one service invocation made by the engine.
    """
    OK = auto()
    RULE_SHORT_CIRCUIT = auto()
    HTTP_ERROR = auto()
    POSTCONDITION_VIOLATION = auto()

    @property
    def contributes(self) -> bool:
        """Whether triples from an invocation with this outcome are merged."""
        return self in (Outcome.OK, Outcome.RULE_SHORT_CIRCUIT)
