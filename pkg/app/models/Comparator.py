"""
Defines the comparators a smart rule guard can use.
"""

from enum import StrEnum, auto


# region classes
class Comparator(StrEnum):
    """
    Enum for guard comparators.

    The value is the name used in reports, `symbol` is the spelling used in rule blocks.
    """
    LT = auto()
    LE = auto()
    GT = auto()
    GE = auto()
    EQ = auto()
    NE = auto()

    @property
    def symbol(self) -> str:
        return comparator_symbols[self]

    @classmethod
    def from_symbol(cls, symbol: str) -> "Comparator":
        """
        Get the comparator spelled by `symbol`.

        :raises ValueError: If the symbol is not one of < <= > >= == !=
        """
        for comparator, spelling in comparator_symbols.items():
            if spelling == symbol:
                return comparator
        raise ValueError(f"Unknown comparator {symbol!r}")
# endregion


# region variables
comparator_symbols: dict[Comparator, str] = {
    Comparator.LT: "<",
    Comparator.LE: "<=",
    Comparator.GT: ">",
    Comparator.GE: ">=",
    Comparator.EQ: "==",
    Comparator.NE: "!=",
}
# endregion
