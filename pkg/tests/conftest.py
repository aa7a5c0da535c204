import os
from pathlib import Path
from typing import Callable, Iterator

import pytest
from faker import Faker
from faker.providers import BaseProvider
from fastapi.testclient import TestClient

from app.db.database import KnowledgeBase, load_kb
from app.db.terms import Iri, Literal, Triple
from app.helpers.descriptions import Registry, load_description, load_registry
from app.helpers.service import ServiceHandler
from app.main import create_app
from app.models.Datatype import Datatype
from app.models.Description import ServiceDescription
from app.scenario.fleet import LocalInvoker, ServiceFleet, scenario_handler_map
from app.scenario.handlers import brain_mask, temperature_device
from app.settings.config import configure_logging, update_settings

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


class KnowledgeBaseProvider(BaseProvider):
    """Random terms and triples over small pools, so patterns actually match."""

    def node(self, pool: int = 4) -> Iri:
        return Iri(f"http://example.org/node/{self.random_int(0, pool - 1)}")

    def predicate(self, pool: int = 2) -> Iri:
        return Iri(f"http://example.org/predicate/{self.random_int(0, pool - 1)}")

    def literal(self) -> Literal:
        match self.random_element(list(Datatype)):
            case Datatype.INTEGER:
                return Literal(str(self.random_int(-50, 50)), Datatype.INTEGER)
            case Datatype.DECIMAL:
                return Literal(f"{self.random_int(0, 99)}.{self.random_int(0, 9)}", Datatype.DECIMAL)
            case Datatype.BOOLEAN:
                return Literal(self.random_element(["true", "false"]), Datatype.BOOLEAN)
        return Literal(self.generator.word())

    def tricky_literal(self) -> Literal:
        """Strings that need escaping, plus non-ASCII text."""
        parts = [self.generator.word(), "\"", "\\", "\n", "\t", "\r", "ñandú", "# not a comment", " . "]
        return Literal("".join(self.random_elements(parts, length=self.random_int(1, 5))))

    def triple(self, nodes: int = 4, predicates: int = 2) -> Triple:
        if self.random_int(0, 2) == 0:
            obj: Iri | Literal = self.literal()
        else:
            obj = self.node(nodes)
        return Triple(self.node(nodes), self.predicate(predicates), obj)


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption(
        "--update-golden",
        action="store_true",
        default=False,
        help="Rewrite the golden files under fixtures/expected from the current run.",
    )


@pytest.fixture(autouse=True, scope="session")
def quiet_environment() -> Iterator[None]:
    """Default minting base and no log shipping, whatever the shell exports."""
    saved = {key: os.environ.pop(key) for key in ("SMARTWS_BASE_IRI", "SMARTWS_LOGS_TOKEN") if key in os.environ}
    update_settings()
    configure_logging(console=False)
    yield
    os.environ.update(saved)
    update_settings()


@pytest.fixture(name="faker")
def faker_fixture(request: pytest.FixtureRequest) -> Faker:
    fake = Faker()
    fake.add_provider(KnowledgeBaseProvider)
    fake.seed_instance(request.node.name)
    return fake


@pytest.fixture(name="golden")
def golden_fixture(request: pytest.FixtureRequest) -> Callable[[str, str], None]:
    """Compare text with `fixtures/expected/<name>` byte for byte."""
    update = request.config.getoption("--update-golden")

    def check(name: str, actual: str) -> None:
        path = FIXTURES / "expected" / name
        if update or not path.exists():
            path.write_text(actual, encoding="utf-8")
        assert actual == path.read_text(encoding="utf-8")

    return check


@pytest.fixture(name="fixtures_dir")
def fixtures_dir_fixture() -> Path:
    return FIXTURES


@pytest.fixture(name="seed_kb")
def seed_kb_fixture() -> KnowledgeBase:
    return load_kb(FIXTURES / "kb" / "seed.nt")


@pytest.fixture(name="tpm_registry")
def tpm_registry_fixture() -> Registry:
    return load_registry(FIXTURES / "descriptions")


@pytest.fixture(name="local_invoker")
def local_invoker_fixture(tpm_registry: Registry) -> LocalInvoker:
    return LocalInvoker(scenario_handler_map(tpm_registry))


@pytest.fixture(name="brain_mask_description")
def brain_mask_description_fixture() -> ServiceDescription:
    return load_description(FIXTURES / "descriptions" / "brain_mask_generation.json")


@pytest.fixture(name="temperature_description")
def temperature_description_fixture() -> ServiceDescription:
    return load_description(FIXTURES / "devices" / "temperature.json")


@pytest.fixture(name="brain_mask_handler")
def brain_mask_handler_fixture() -> ServiceHandler:
    return brain_mask("BrainMaskGeneration")


@pytest.fixture(name="temperature_handler")
def temperature_handler_fixture() -> ServiceHandler:
    return temperature_device("TemperatureControl")


@pytest.fixture(name="brain_mask_client")
def brain_mask_client_fixture(
    brain_mask_description: ServiceDescription, brain_mask_handler: ServiceHandler
) -> Iterator[TestClient]:
    document = (FIXTURES / "descriptions" / "brain_mask_generation.json").read_bytes()
    with TestClient(create_app(brain_mask_description, brain_mask_handler, document)) as client:
        yield client


@pytest.fixture(name="temperature_client")
def temperature_client_fixture(
    temperature_description: ServiceDescription, temperature_handler: ServiceHandler
) -> Iterator[TestClient]:
    document = (FIXTURES / "devices" / "temperature.json").read_bytes()
    with TestClient(create_app(temperature_description, temperature_handler, document)) as client:
        yield client


@pytest.fixture(name="tpm_fleet")
def tpm_fleet_fixture(tpm_registry: Registry) -> Iterator[ServiceFleet]:
    with ServiceFleet(tpm_registry, scenario_handler_map(tpm_registry)) as fleet:
        yield fleet
