"""
What the engine records about a run.
"""

import json

from pydantic import BaseModel, ConfigDict, Field

from app.models.Outcome import Outcome
from app.models.TerminatedBy import TerminatedBy


# region classes
class InvocationKey(BaseModel):
    """A service together with the fingerprint of the binding it ran with."""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    service_name: str = Field(alias="service", title="Service")
    fingerprint: str = Field(
        title="Binding Fingerprint",
        description="SHA-256 of the binding restricted to the precondition variables",
    )


class InvocationRecord(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    key: InvocationKey
    round: int = Field(ge=1, title="Round")
    outcome: Outcome = Field(title="Outcome")
    triples_added: int = Field(default=0, alias="triplesAdded", ge=0)
    duration_ms: float = Field(default=0.0, alias="durationMs", ge=0)
    detail: str | None = Field(
        default=None,
        title="Detail",
        description="Error message when the invocation did not contribute",
    )


class RunReport(BaseModel):
    """
    Immutable summary of an engine run.

    `kb_sizes` holds the size before the first round followed by the size
    after every round.
    """
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    rounds_executed: int = Field(alias="roundsExecuted", ge=0)
    records: list[InvocationRecord] = Field(default_factory=list)
    final_kb_size: int = Field(alias="finalKbSize", ge=0)
    terminated_by: TerminatedBy = Field(alias="terminatedBy")
    kb_sizes: list[int] = Field(default_factory=list, alias="kbSizes")

    def to_json(self, *, durations: bool = True) -> str:
        """
        JSON document of the report.

        :param durations: Leave out `durationMs` when False, which makes the
            document byte-identical across runs of the same fixtures
        """
        exclude = {"records": {"__all__": {"duration_ms"}}} if not durations else None
        document = self.model_dump(
            mode="json", by_alias=True, exclude=exclude, exclude_none=True
        )
        return json.dumps(document, indent=2) + "\n"

    def invoked_services(self) -> list[str]:
        """Service names in invocation order."""
        return [record.key.service_name for record in self.records]
# endregion
