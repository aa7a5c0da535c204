from enum import StrEnum, auto


class TerminatedBy(StrEnum):
    """
    Enum for the reason an engine run stopped.
    """
    FIXPOINT = auto()
    MAX_ROUNDS = auto()
