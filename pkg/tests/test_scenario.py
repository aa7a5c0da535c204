from pathlib import Path

import pytest
import requests
from fastapi import status

from app.db.database import KnowledgeBase, load_kb, match_pattern
from app.db.syntax import parse_pattern
from app.db.terms import Iri, Literal, Triple
from app.helpers.client import InvocationRequest, decode_response
from app.helpers.descriptions import Registry, precondition_bindings
from app.helpers.engine import run_to_fixpoint
from app.helpers.service import handle_invoke
from app.models.Datatype import Datatype
from app.models.Description import ServiceDescription
from app.models.EngineConfig import EngineConfig
from app.models.Vocabulary import Concept, Predicate, default_prefixes
from app.scenario.artifacts import ArtifactStore, MockArtifactContent
from app.scenario.fleet import LocalInvoker, ServiceFleet, scenario_handler_map
from app.scenario.handlers import (brain_mask, handler_for, make_handler,
                                   temperature_device, temperature_reading)

HEADSCAN = Iri("http://smartws.example.org/patients/p1/headscan-1")
ATLAS_IMAGE = Iri("http://smartws.example.org/atlas/brain-atlas-image")
ATLAS_MASK = Iri("http://smartws.example.org/atlas/brain-atlas-mask")
FORMAT = Iri(Predicate.FORMAT)


def lineage_closure(kb: KnowledgeBase, start: Iri) -> set[Iri]:
    """Everything reachable from `start` over derivation links."""
    derived_from = Iri(Predicate.WAS_DERIVED_FROM)
    seen: set[Iri] = set()
    frontier = [start]
    while frontier:
        node = frontier.pop()
        for _, _, source in kb.candidates(node, derived_from, None):
            if source not in seen:
                seen.add(source)  # type: ignore[arg-type]
                frontier.append(source)  # type: ignore[arg-type]
    return seen


# region mocks
@pytest.mark.parametrize(
    "service",
    [
        "BrainMaskGeneration",
        "BatchedFolderRegistration",
        "RobustNormalization",
        "StandardNormalization",
        "TumorSegmentation",
        "MapGeneration",
    ],
)
def test_mock_output_satisfies_postcondition(tpm_registry: Registry, fixtures_dir: Path, service: str):
    """Every mock, fed the final pipeline state, answers with a graph its postcondition accepts."""
    description = tpm_registry.get(service)
    graph = load_kb(fixtures_dir / "expected" / "final_kb.nt")
    binding = precondition_bindings(description, graph)[0]
    handler = scenario_handler_map(tpm_registry)[service]

    result = handle_invoke(description, handler, InvocationRequest(tuple(graph.triples()), binding))

    assert result.status == status.HTTP_200_OK, result.body
    output = decode_response(result.body).graph
    assert match_pattern(description.postcondition, KnowledgeBase(output), binding)
    assert handler.backend_calls == 1


def test_brain_mask_is_deterministic(brain_mask_description: ServiceDescription, seed_kb: KnowledgeBase):
    request = InvocationRequest(tuple(seed_kb.triples()))

    first = handle_invoke(brain_mask_description, brain_mask(), request)
    second = handle_invoke(brain_mask_description, brain_mask(), request)

    assert first.status == status.HTTP_200_OK
    assert first.body == second.body


def test_swapped_atlas_formats_are_rejected(brain_mask_description: ServiceDescription, seed_kb: KnowledgeBase):
    """Atlases delivered as nrrd instead of mha do not satisfy the precondition."""
    graph = [
        Triple(t.subject, t.predicate, Literal("image/nrrd"))
        if t.predicate == FORMAT and t.subject in (ATLAS_IMAGE, ATLAS_MASK) else t
        for t in seed_kb.triples()
    ]
    handler = brain_mask()

    result = handle_invoke(brain_mask_description, handler, InvocationRequest(tuple(graph)))

    assert result.status == status.HTTP_422_UNPROCESSABLE_ENTITY
    assert handler.backend_calls == 0


def test_heater_backend_turns_on_when_cold(temperature_description: ServiceDescription):
    reading = Iri("http://smartws.example.org/home/livingroom/reading-1")

    result = handle_invoke(
        temperature_description, temperature_device(), InvocationRequest(tuple(temperature_reading(reading, 15)))
    )

    assert result.status == status.HTTP_200_OK
    assert not result.short_circuited
    assert Literal("on") in {t.object for t in decode_response(result.body).graph}


def test_heater_backend_rejects_text(temperature_description: ServiceDescription):
    reading = Iri("http://smartws.example.org/home/livingroom/reading-1")
    graph = temperature_reading(reading, "warm", Datatype.STRING)

    result = handle_invoke(temperature_description, temperature_device(), InvocationRequest(tuple(graph)))

    assert result.status == status.HTTP_500_INTERNAL_SERVER_ERROR
    assert result.body.startswith("ValueError: Temperature reading must be numeric")


def test_make_handler_unknown():
    with pytest.raises(ValueError, match="available: batched_folder_registration"):
        make_handler("segmentation_v2", "TumorSegmentation")


def test_handler_for_checks_the_algorithm_class(
    brain_mask_description: ServiceDescription, temperature_description: ServiceDescription
):
    assert handler_for("brain_mask", brain_mask_description) is not None
    assert handler_for("temperature_device", temperature_description) is not None

    with pytest.raises(ValueError, match="HeatingControl"):
        handler_for("brain_mask", temperature_description)


def test_scenario_handler_map_requires_known_services(brain_mask_description: ServiceDescription):
    registry = Registry().register(brain_mask_description.model_copy(update={"name": "SkullStripping"}))

    with pytest.raises(ValueError, match="SkullStripping"):
        scenario_handler_map(registry)
# endregion


# region pipeline
def test_pipeline_yields_one_progression_map(tpm_registry: Registry, seed_kb: KnowledgeBase):
    store = ArtifactStore()

    run_to_fixpoint(tpm_registry, seed_kb, invoker=LocalInvoker(scenario_handler_map(tpm_registry, store)))

    maps = match_pattern(parse_pattern("?map rdf:type sp:Category-3AProgressionMap .", default_prefixes), seed_kb)
    assert len(maps) == 1
    progression_map = maps[0]["map"]
    closure = lineage_closure(seed_kb, progression_map)
    assert HEADSCAN in closure
    assert ATLAS_IMAGE not in closure
    assert progression_map in store


def test_artifact_store_records_every_output(tpm_registry: Registry, seed_kb: KnowledgeBase):
    store = ArtifactStore()

    run_to_fixpoint(tpm_registry, seed_kb, invoker=LocalInvoker(scenario_handler_map(tpm_registry, store)))

    produced = [t.subject for t in seed_kb.triples() if t.predicate == Iri(Predicate.TYPE) and t.subject in store]
    assert len(store) == len(produced) == 6
    brain_image = match_pattern(parse_pattern("?b rdf:type sp:Category-3ABrainImage .", default_prefixes), seed_kb)[0]["b"]
    assert store.get(brain_image) == MockArtifactContent.derive("BrainMaskGeneration", [HEADSCAN])


def test_artifact_content_ignores_lineage_order():
    other = Iri("http://smartws.example.org/patients/p1/annotation-1")

    first = MockArtifactContent.derive("RobustNormalization", [HEADSCAN, other])
    second = MockArtifactContent.derive("RobustNormalization", [other, HEADSCAN])

    assert first == second
    assert first.lineage == (other.value, HEADSCAN.value)
    assert first != MockArtifactContent.derive("StandardNormalization", [HEADSCAN, other])


def test_segmentation_needs_a_normalized_image(tpm_registry: Registry, seed_kb: KnowledgeBase):
    """With both normalizations left out, the chain stops after registration."""
    config = EngineConfig(allowed_services=frozenset({
        "BrainMaskGeneration", "BatchedFolderRegistration", "TumorSegmentation", "MapGeneration",
    }))

    result = run_to_fixpoint(tpm_registry, seed_kb, config, invoker=LocalInvoker(scenario_handler_map(tpm_registry)))

    assert [r.key.service_name for r in result.records] == ["BrainMaskGeneration", "BatchedFolderRegistration"]
    assert not match_pattern(
        parse_pattern("?s rdf:type sp:Category-3ATumorSegmentation .", default_prefixes), seed_kb
    )
    assert not list(seed_kb.candidates(None, Iri(Predicate.TYPE), Iri(Concept.NORMALIZED_IMAGE)))
# endregion


# region fleet
def test_fleet_hosts_every_service(tpm_fleet: ServiceFleet):
    endpoints = [description.endpoint.value for description in tpm_fleet.registry]

    assert sorted(tpm_fleet.registry.names()) == sorted(tpm_fleet.source.names())
    assert len(set(endpoints)) == 6
    for endpoint in endpoints:
        assert requests.get(f"{endpoint}/health", timeout=5).status_code == status.HTTP_200_OK


def test_fleet_stop_releases_the_hosts(tpm_registry: Registry):
    fleet = ServiceFleet(tpm_registry, scenario_handler_map(tpm_registry)).start()
    endpoint = next(iter(fleet.registry)).endpoint.value

    fleet.stop()

    assert fleet.hosts == {}
    with pytest.raises(requests.ConnectionError):
        requests.get(f"{endpoint}/health", timeout=2)
# endregion
