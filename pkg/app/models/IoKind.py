from enum import StrEnum, auto


class IoKind(StrEnum):
    """
    Enum for the kind of a service input or output.

    Inputs and outputs are either resources of type file or resources of type parameter.
    """
    FILE = auto()
    PARAMETER = auto()
