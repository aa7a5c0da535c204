"""
In-memory stand-in for the imagery archive the algorithms write to.

No image is ever produced: an artifact is a content hash computed from the
producing service and the IRIs it was derived from.
"""

import hashlib
import threading

from pydantic import BaseModel, ConfigDict, Field

from app.db.terms import Iri


# region classes
class MockArtifactContent(BaseModel):
    model_config = ConfigDict(frozen=True)

    service: str = Field(title="Service", description="Name of the producing service")
    lineage: tuple[str, ...] = Field(
        title="Lineage",
        description="IRIs of the inputs, sorted",
    )
    content_hash: str = Field(
        title="Content Hash",
        description="SHA-256 of the service name and the lineage",
    )

    @classmethod
    def derive(cls, service: str, lineage: list[Iri]) -> "MockArtifactContent":
        ordered = tuple(sorted(iri.value for iri in lineage))
        digest = hashlib.sha256("\n".join((service, *ordered)).encode("utf-8")).hexdigest()
        return cls(service=service, lineage=ordered, content_hash=digest)


class ArtifactStore:
    """Thread-safe map from artifact IRI to its mock content."""

    def __init__(self):
        self._lock = threading.Lock()
        self._artifacts: dict[str, MockArtifactContent] = {}

    def record(self, iri: Iri, service: str, lineage: list[Iri]) -> MockArtifactContent:
        content = MockArtifactContent.derive(service, lineage)
        with self._lock:
            self._artifacts[iri.value] = content
        return content

    def get(self, iri: Iri | str) -> MockArtifactContent | None:
        return self._artifacts.get(str(iri))

    def __len__(self) -> int:
        return len(self._artifacts)

    def __contains__(self, iri: object) -> bool:
        return str(iri) in self._artifacts
# endregion
