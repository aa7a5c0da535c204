"""
Service description schema.

A description has non-functional properties (name, contributors, evaluation
metrics, endpoint, ...) and functional ones (typed inputs and outputs,
precondition and postcondition graph patterns, algorithm class). Patterns and
rules are written in the knowledge base syntax inside the JSON document and
are parsed with the document's `prefixes`.
"""

from typing import Any

from pydantic import (BaseModel, ConfigDict, Field, ValidationInfo,
                      field_serializer, field_validator)

from app.db.fields import IriField, VariableField
from app.db.syntax import parse_pattern
from app.db.terms import GraphPattern
from app.helpers.smartness import parse_rule
from app.models.IoKind import IoKind
from app.models.Rule import SmartRule
from app.models.Vocabulary import default_prefixes


# region classes
class IoSpec(BaseModel):
    """An input or output of a service."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    variable: VariableField = Field(
        title="Variable",
        description="Pattern variable standing for the resource, e.g. ?inputImage",
    )
    kind: IoKind = Field(
        title="Kind",
        description="Resource of type file or of type parameter",
    )
    datatype: str = Field(
        title="Datatype",
        description="Data type of the resource content",
        examples=["image", "integer"],
    )
    concept: IriField = Field(
        title="Concept",
        description="Concept IRI the resource is an instance of",
    )
    format: str = Field(
        title="Format",
        description="Physical format of the resource",
        examples=["image/nrrd", "image/mha"],
    )
    required: bool = Field(
        default=True,
        title="Required",
        description="Whether the resource must be present for the execution",
    )


class EvaluationMetric(BaseModel):
    """A static evaluation score, higher is better."""
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    metric_name: str = Field(
        alias="metric",
        title="Metric",
        description="Name of the metric",
        examples=["accuracy", "dice"],
    )
    score: float = Field(
        title="Score",
        description="Score in [0, 1]",
        examples=[0.9, 0.7],
    )


class ServiceDescription(BaseModel):
    """
    Formalized description of a SmartWS.

    Immutable once parsed. Use `validate_description` for the invariants that
    span several fields.
    """
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    prefixes: dict[str, str] = Field(
        default_factory=dict,
        title="Prefixes",
        description="Prefixes used when parsing embedded patterns and rules",
    )
    name: str = Field(
        title="Name",
        description="Unique name of the service within the registry",
    )
    contributors: list[str] = Field(
        default_factory=list,
        title="Contributors",
    )
    description: str = Field(
        default="",
        title="Description",
        description="High-level textual description of the functionality",
    )
    evaluation_metrics: list[EvaluationMetric] = Field(
        default_factory=list,
        alias="evaluationMetrics",
        title="Evaluation Metrics",
    )
    source_code: list[IriField] = Field(
        default_factory=list,
        alias="sourceCode",
        title="Source Code",
        description="Links to code repositories",
    )
    implementation_languages: list[str] = Field(
        default_factory=list,
        alias="implementationLanguages",
        title="Implementation Languages",
    )
    endpoint: IriField = Field(
        title="Endpoint",
        description="Base IRI of the hosted service",
        examples=["http://127.0.0.1:8081"],
    )
    example_requests: list[IriField] = Field(
        default_factory=list,
        alias="exampleRequests",
        title="Example Requests",
    )
    example_responses: list[IriField] = Field(
        default_factory=list,
        alias="exampleResponses",
        title="Example Responses",
    )
    inputs: list[IoSpec] = Field(
        title="Inputs",
    )
    outputs: list[IoSpec] = Field(
        title="Outputs",
    )
    precondition: GraphPattern = Field(
        title="Precondition",
        description="Pattern the knowledge base must satisfy before execution",
    )
    postcondition: GraphPattern = Field(
        title="Postcondition",
        description="Pattern the output satisfies after execution",
    )
    algorithm_class: IriField = Field(
        alias="algorithmClass",
        title="Algorithm Class",
        description="Class of the algorithm in the controlled taxonomy",
    )
    rules: list[SmartRule] = Field(
        default_factory=list,
        title="Rules",
        description="Smart rules evaluated before the wrapped backend is called",
    )
    declared_formats: list[str] = Field(
        default_factory=list,
        alias="declaredFormats",
        title="Declared Formats",
        description="Data exchange formats the service speaks",
        examples=[["application/n-triples", "application/json"]],
    )

    @field_validator("precondition", "postcondition", mode="before")
    @classmethod
    def parse_embedded_pattern(cls, value: Any, info: ValidationInfo) -> Any:
        if isinstance(value, str):
            return parse_pattern(value, {**default_prefixes, **info.data.get("prefixes", {})})
        return value

    @field_validator("rules", mode="before")
    @classmethod
    def parse_embedded_rules(cls, value: Any, info: ValidationInfo) -> Any:
        if not isinstance(value, list):
            return value
        prefixes = {**default_prefixes, **info.data.get("prefixes", {})}
        return [
            parse_rule(block, prefixes) if not isinstance(block, SmartRule) else block
            for block in value
        ]

    @field_serializer("precondition", "postcondition")
    def emit_pattern(self, pattern: GraphPattern) -> str:
        return pattern.n3()

    @field_serializer("rules")
    def emit_rules(self, rules: list[SmartRule]) -> list[dict[str, Any]]:
        return [rule.to_block() for rule in rules]

    @property
    def optional_variables(self) -> frozenset[str]:
        """Variables of inputs that are not required."""
        return frozenset(io.variable.name for io in self.inputs if not io.required)

    @property
    def mandatory_precondition(self) -> GraphPattern:
        """Precondition patterns that mention no optional input."""
        optional = self.optional_variables
        return GraphPattern(tuple(
            pattern for pattern in self.precondition
            if not optional.intersection(pattern.variables())
        ))

    @property
    def optional_precondition(self) -> GraphPattern:
        """Precondition patterns that mention an optional input."""
        optional = self.optional_variables
        return GraphPattern(tuple(
            pattern for pattern in self.precondition
            if optional.intersection(pattern.variables())
        ))

    def metric_score(self, metric: str) -> float:
        """Best score recorded for `metric`, 0 when the metric is missing."""
        return max(
            (m.score for m in self.evaluation_metrics if m.metric_name == metric),
            default=0.0,
        )
# endregion
