import re

IRI_SCHEME_PATTERN = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
IRI_FORBIDDEN_PATTERN = re.compile(r"[\s<>\"{}|^`\\]")
VARIABLE_NAME_PATTERN = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

INTEGER_PATTERN = re.compile(r"^[+-]?\d+$")
DECIMAL_PATTERN = re.compile(r"^[+-]?(\d+\.\d*|\.\d+)$")
BOOLEAN_VALUES = frozenset({"true", "false"})


def is_absolute_iri(value: str) -> str:
    """
    Checks if the value is an absolute IRI.

    A valid IRI is non-empty, starts with a scheme followed by ":" and contains
    no whitespace, angle brackets or other characters forbidden in IRI references.

    :param value: IRI to be validated
    :type value: str
    :return: The validated IRI
    :rtype: str
    :raises ValueError: If the value is not an absolute IRI
    """
    if not value:
        raise ValueError("IRI cannot be empty.")

    if not IRI_SCHEME_PATTERN.match(value):
        raise ValueError(f"IRI must start with a scheme followed by ':': {value!r}")

    if IRI_FORBIDDEN_PATTERN.search(value):
        raise ValueError(f"IRI contains forbidden characters: {value!r}")

    return value


def is_http_iri(value: str) -> str:
    """
    Checks if the value is an absolute http(s) IRI.

    :param value: IRI to be validated
    :type value: str
    :return: The validated IRI
    :rtype: str
    :raises ValueError: If the IRI does not use the http or https scheme
    """
    value = is_absolute_iri(value)
    if not has_http_scheme(value):
        raise ValueError(f"IRI must use the http or https scheme: {value!r}")
    return value


def has_http_scheme(value: str) -> bool:
    """Return True when the IRI uses http or https."""
    return value.lower().startswith(("http://", "https://"))


def is_variable_name(name: str) -> str:
    """
    Checks if the name is a valid pattern variable name.

    :param name: Variable name without the leading "?"
    :type name: str
    :return: The validated name
    :rtype: str
    :raises ValueError: If the name is empty or contains invalid characters
    """
    if not VARIABLE_NAME_PATTERN.match(name):
        raise ValueError(f"Invalid variable name: {name!r}")
    return name


def is_valid_lexical(lexical: str, datatype: str) -> bool:
    """
    Checks if the lexical form parses under the given datatype.

    :param lexical: Lexical form of the literal
    :type lexical: str
    :param datatype: One of string, integer, decimal, boolean
    :type datatype: str
    :return: True if the lexical form is valid for the datatype
    :rtype: bool
    """
    match datatype:
        case "string":
            return True
        case "integer":
            return bool(INTEGER_PATTERN.match(lexical))
        case "decimal":
            return bool(DECIMAL_PATTERN.match(lexical))
        case "boolean":
            return lexical in BOOLEAN_VALUES
    return False


def is_unit_score(score: float) -> bool:
    """Checks if an evaluation score lies in [0, 1]."""
    return 0.0 <= score <= 1.0
