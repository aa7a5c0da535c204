"""
Run configuration of the execution engine.
"""

from pydantic import BaseModel, ConfigDict, Field

from app.db.terms import GraphPattern


# region classes
class EngineConfig(BaseModel):
    """
    Knobs of a single engine run.

    `scope_filter` and `allowed_services` restrict what is processed, for
    instance a single patient or a subset of the algorithms.
    """
    model_config = ConfigDict(frozen=True)

    max_rounds: int = Field(
        default=32,
        title="Max Rounds",
        description="Upper bound on the number of rounds",
        ge=1,
    )
    concurrency_width: int = Field(
        default=4,
        title="Concurrency Width",
        description="Invocations in flight at the same time within a round",
        ge=1,
    )
    scope_filter: GraphPattern | None = Field(
        default=None,
        title="Scope Filter",
        description="Conjunction that must still hold together with a precondition binding",
    )
    allowed_services: frozenset[str] | None = Field(
        default=None,
        title="Allowed Services",
        description="Only these service names are invoked when set",
    )
    selection_metric: str = Field(
        default="accuracy",
        title="Selection Metric",
        description="Evaluation metric used to rank competing services",
    )
# endregion
