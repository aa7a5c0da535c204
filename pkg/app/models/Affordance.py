"""
Machine-readable declaration of how `/invoke` is called.
"""

from pydantic import BaseModel, ConfigDict, Field


class InvokeAffordance(BaseModel):
    """Answer of `GET /invoke`: the method and media types `POST /invoke` expects."""
    model_config = ConfigDict(populate_by_name=True)

    method: str = Field(
        default="POST",
        title="Method",
    )
    content_type: str = Field(
        alias="contentType",
        title="Content Type",
        description="Media type of the request body",
        examples=["application/n-triples"],
    )
    accept: str = Field(
        title="Accept",
        description="Media type of the response body",
        examples=["application/n-triples"],
    )
    short_circuit_header: str = Field(
        alias="shortCircuitHeader",
        title="Short-Circuit Header",
        description="Response header set to `true` when a smart rule answered",
    )
