"""
Maturity reports and live probe results.
"""

import json

from pydantic import BaseModel, ConfigDict, Field


# region classes
class CriterionResult(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    criterion_id: str = Field(
        alias="id",
        title="Criterion",
        description="Level-qualified criterion name",
        examples=["L1.http_endpoint", "L3.smartness_rules"],
    )
    passed: bool = Field(title="Passed")
    evidence: str = Field(
        title="Evidence",
        description="Why the criterion passed or failed",
        min_length=1,
    )

    @property
    def level(self) -> int:
        return int(self.criterion_id.split(".", 1)[0].removeprefix("L"))


class MaturityReport(BaseModel):
    """Level 0 to 3 plus the evidence of every criterion."""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    level: int = Field(ge=0, le=3, title="Level")
    probed: bool = Field(title="Probed", description="Whether live probe results were used")
    criteria: list[CriterionResult] = Field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json", by_alias=True), indent=2) + "\n"

    def passed(self, criterion_id: str) -> bool:
        return any(c.passed for c in self.criteria if c.criterion_id == criterion_id)


class ProbeCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    passed: bool
    evidence: str = Field(min_length=1)


class ProbeResult(BaseModel):
    """What three GET requests revealed about a running service."""
    model_config = ConfigDict(frozen=True)

    endpoint: str = Field(title="Endpoint")
    health: ProbeCheck = Field(title="GET /health")
    description: ProbeCheck = Field(title="GET /description")
    invoke: ProbeCheck = Field(title="GET /invoke")
# endregion
