"""
Description files, their validation and the in-process service registry.

A description file is a UTF-8 JSON object. Graph patterns and rules are
embedded as strings in the knowledge base syntax, see
`app.models.Description.ServiceDescription` for the keys.
"""

import json
import threading
from pathlib import Path
from typing import Any, Iterator, Mapping

import logfire
from pydantic import ValidationError

from app.db.database import KnowledgeBase, match_pattern
from app.db.terms import Binding, Iri, Term, binding_sort_key
from app.helpers.exceptions import (DescriptionError,
                                    DescriptionValidationError)
from app.helpers.validations import has_http_scheme, is_unit_score
from app.models.Description import ServiceDescription


# region files
def _reject_duplicate_keys(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    document: dict[str, Any] = {}
    for key, value in pairs:
        if key in document:
            raise DescriptionError(f"Duplicate field {key!r}")
        document[key] = value
    return document


def _describe_errors(error: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(part) for part in detail['loc']) or '<root>'}: {detail['msg']}"
        for detail in error.errors()
    )


def parse_description(document: bytes | str, *, strict: bool = True) -> ServiceDescription:
    """
    Parse a description file.

    :param document: The JSON document
    :type document: bytes | str
    :param strict: Also enforce `validate_description`; lenient parsing is
        used where a description only needs to be readable (maturity)
    :type strict: bool
    :return: The parsed description
    :rtype: ServiceDescription
    :raises DescriptionError: On invalid JSON, duplicate, missing or unknown
        fields and pattern or rule syntax errors
    :raises DescriptionValidationError: In strict mode, when invariants fail
    """
    try:
        raw = json.loads(document, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as e:
        raise DescriptionError(
            f"Invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from e
    except UnicodeDecodeError as e:
        raise DescriptionError(f"Description is not UTF-8: {e}") from e

    if not isinstance(raw, dict):
        raise DescriptionError("Description must be a JSON object")

    try:
        description = ServiceDescription.model_validate(raw)
    except ValidationError as e:
        raise DescriptionError(_describe_errors(e)) from e

    if strict:
        violations = validate_description(description)
        if violations:
            raise DescriptionValidationError(description.name, violations)
    return description


def emit_description(description: ServiceDescription) -> str:
    """Write a description file that parses back to an equal description."""
    document = description.model_dump(mode="json", by_alias=True)
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def load_description(path: Path, *, strict: bool = True) -> ServiceDescription:
    """
    Read and parse a description file.

    :raises DescriptionError: As `parse_description`, noting the file path
    """
    try:
        return parse_description(path.read_bytes(), strict=strict)
    except DescriptionError as e:
        e.add_note(f"in {path}")
        raise
# endregion


# region validation
def validate_description(description: ServiceDescription) -> list[str]:
    """
    Check the invariants that span several fields.

    :return: One message per violation, `field: rule`; empty when valid
    :rtype: list[str]
    """
    violations: list[str] = []

    if not description.name.strip():
        violations.append("name: must not be empty")
    if not has_http_scheme(description.endpoint.value):
        violations.append(
            f"endpoint: {description.endpoint.value} is not an http(s) IRI"
        )
    for metric in description.evaluation_metrics:
        if not is_unit_score(metric.score):
            violations.append(
                f"evaluation_metrics: score out of [0,1] for {metric.metric_name!r} ({metric.score})"
            )

    if not description.precondition:
        violations.append("precondition: must contain at least one triple pattern")
    if not description.postcondition:
        violations.append("postcondition: must contain at least one triple pattern")

    precondition_vars = description.precondition.vars
    postcondition_vars = description.postcondition.vars
    output_vars = {io.variable.name for io in description.outputs}

    for io in description.inputs:
        if io.variable.name not in precondition_vars:
            violations.append(
                f"inputs: ?{io.variable.name} does not occur in the precondition"
            )
    for io in description.outputs:
        if io.variable.name not in postcondition_vars:
            violations.append(
                f"outputs: ?{io.variable.name} does not occur in the postcondition"
            )
    for name in sorted(postcondition_vars - output_vars - precondition_vars):
        violations.append(
            f"postcondition: ?{name} is neither an output nor a precondition variable"
        )
    for rule in description.rules:
        for name in sorted(rule.fresh_variables - output_vars):
            violations.append(
                f"rules: ?{name} in emit of {rule.name!r} is neither a condition variable nor an output"
            )
    return violations
# endregion


# region registry
class Registry:
    """
    Descriptions by name.

    Registration is exclusive, lookups read an immutable snapshot of the
    mapping and may run concurrently.
    """

    def __init__(self, descriptions: Mapping[str, ServiceDescription] | None = None):
        self._lock = threading.RLock()
        self._services: dict[str, ServiceDescription] = {}
        for description in (descriptions or {}).values():
            self.register(description)

    def register(self, description: ServiceDescription) -> "Registry":
        """
        Add a description, replacing any with the same name.

        :raises DescriptionValidationError: If the description is invalid; the
            registry is left unchanged
        """
        violations = validate_description(description)
        if violations:
            raise DescriptionValidationError(description.name, violations)

        with self._lock:
            replaced = description.name in self._services
            self._services = {**self._services, description.name: description}
        logfire.info(
            "Registered {name}",
            name=description.name,
            algorithm_class=description.algorithm_class.value,
            replaced=replaced,
        )
        return self

    def get(self, name: str) -> ServiceDescription | None:
        return self._services.get(name)

    def __len__(self) -> int:
        return len(self._services)

    def __contains__(self, name: object) -> bool:
        return name in self._services

    def __iter__(self) -> Iterator[ServiceDescription]:
        services = self._services
        return iter([services[name] for name in sorted(services)])

    def names(self) -> list[str]:
        return sorted(self._services)

    def find_by_class(self, algorithm_class: Iri | str) -> list[ServiceDescription]:
        """All descriptions of an algorithm class, sorted by name."""
        return [d for d in self if d.algorithm_class.value == str(algorithm_class)]

    def find_by_input_concept(self, concept: Iri | str) -> list[ServiceDescription]:
        """Descriptions with an input typed by `concept`, sorted by name."""
        return [
            d for d in self
            if any(io.concept.value == str(concept) for io in d.inputs)
        ]

    def find_by_output_concept(self, concept: Iri | str) -> list[ServiceDescription]:
        """Descriptions with an output typed by `concept`, sorted by name."""
        return [
            d for d in self
            if any(io.concept.value == str(concept) for io in d.outputs)
        ]


def load_registry(directory: Path, registry: Registry | None = None) -> Registry:
    """
    Register every `*.json` file directly inside `directory`.

    :raises DescriptionError: On the first file that does not parse or validate
    """
    registry = registry if registry is not None else Registry()
    for path in sorted(directory.glob("*.json")):
        registry.register(load_description(path))
    return registry
# endregion


# region eligibility
def precondition_bindings(
    description: ServiceDescription,
    kb: KnowledgeBase,
    seed: Mapping[str, Term] | None = None,
) -> list[Binding]:
    """
    Bindings under which the description's precondition holds.

    The mandatory core must match; each core binding is then extended with the
    first solution of the optional part, if there is one.

    :return: Bindings in canonical order
    :rtype: list[Binding]
    """
    core = match_pattern(description.mandatory_precondition, kb, seed)
    optional = description.optional_precondition
    if not optional:
        return core

    bindings: list[Binding] = []
    for binding in core:
        extensions = match_pattern(optional, kb, binding)
        bindings.append({**binding, **extensions[0]} if extensions else binding)
    return sorted(bindings, key=binding_sort_key)
# endregion
