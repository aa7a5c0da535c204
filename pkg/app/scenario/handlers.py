"""
Mock backends and the catalog the `serve` command binds them from.

Every mock names its outputs with `mint_output_iri` over the fingerprint of the
binding it receives, so the same inputs always produce the same graph.
"""

from decimal import Decimal
from typing import Callable

from app.db.terms import Binding, Iri, Literal, Triple
from app.helpers.minting import binding_fingerprint, mint_output_iri
from app.helpers.service import BackendFunction, ServiceHandler
from app.models.Datatype import Datatype
from app.models.Description import ServiceDescription
from app.models.Vocabulary import AlgorithmClass, Concept, Predicate
from app.scenario.artifacts import ArtifactStore

NRRD = "image/nrrd"
HEATING_THRESHOLD = Decimal(20)

HandlerFactory = Callable[[str, ArtifactStore | None], ServiceHandler]


def _iri(value: str) -> Iri:
    return Iri(str(value))


# region imaging
def artifact_mock(
    service_name: str,
    outputs: dict[str, Concept],
    lineage: list[str],
    store: ArtifactStore | None = None,
    extra: Callable[[Iri], list[Triple]] | None = None,
) -> BackendFunction:
    """
    Build a mock image-processing backend.

    :param service_name: Name the outputs are minted under
    :param outputs: Output variable → concept of the produced resource
    :param lineage: Input variables the outputs are derived from, in order;
        unbound ones are skipped
    :param store: Receives the mock content of every produced artifact
    :param extra: Additional triples about each output
    """

    def run(graph: list[Triple], binding: Binding) -> list[Triple]:
        fingerprint = binding_fingerprint(binding)
        sources = [binding[name] for name in lineage if isinstance(binding.get(name), Iri)]
        triples: list[Triple] = []
        for variable, concept in outputs.items():
            output = mint_output_iri(service_name, fingerprint, variable)
            triples.append(Triple(output, _iri(Predicate.TYPE), _iri(concept)))
            triples.append(Triple(output, _iri(Predicate.FORMAT), Literal(NRRD)))
            triples.extend(
                Triple(output, _iri(Predicate.WAS_DERIVED_FROM), source)  # type: ignore[arg-type]
                for source in sources
            )
            if extra is not None:
                triples.extend(extra(output))
            if store is not None:
                store.record(output, service_name, sources)  # type: ignore[arg-type]
        return triples

    return run


def brain_mask(service_name: str = "BrainMaskGeneration", store: ArtifactStore | None = None) -> ServiceHandler:
    return ServiceHandler(
        artifact_mock(
            service_name,
            {"brainImage": Concept.BRAIN_IMAGE, "brainMask": Concept.BRAIN_MASK},
            ["inputImage"],
            store,
        ),
        name="brain_mask",
    )


def batched_folder_registration(
    service_name: str = "BatchedFolderRegistration", store: ArtifactStore | None = None
) -> ServiceHandler:
    return ServiceHandler(
        artifact_mock(
            service_name,
            {"registeredImage": Concept.REGISTERED_IMAGE},
            ["brainImage", "brainMask"],
            store,
        ),
        name="batched_folder_registration",
    )


def _normalization(method: str) -> Callable[[Iri], list[Triple]]:
    def tag(output: Iri) -> list[Triple]:
        return [Triple(output, _iri(Predicate.NORMALIZATION_METHOD), Literal(method))]
    return tag


def robust_normalization(
    service_name: str = "RobustNormalization", store: ArtifactStore | None = None
) -> ServiceHandler:
    return ServiceHandler(
        artifact_mock(
            service_name,
            {"normalizedImage": Concept.NORMALIZED_IMAGE},
            ["registeredImage", "annotation"],
            store,
            _normalization("robust"),
        ),
        name="robust_normalization",
    )


def standard_normalization(
    service_name: str = "StandardNormalization", store: ArtifactStore | None = None
) -> ServiceHandler:
    return ServiceHandler(
        artifact_mock(
            service_name,
            {"normalizedImage": Concept.NORMALIZED_IMAGE},
            ["registeredImage"],
            store,
            _normalization("standard"),
        ),
        name="standard_normalization",
    )


def tumor_segmentation(
    service_name: str = "TumorSegmentation", store: ArtifactStore | None = None
) -> ServiceHandler:
    return ServiceHandler(
        artifact_mock(
            service_name,
            {"tumorSegmentation": Concept.TUMOR_SEGMENTATION},
            ["normalizedImage"],
            store,
        ),
        name="tumor_segmentation",
    )


def map_generation(
    service_name: str = "MapGeneration", store: ArtifactStore | None = None
) -> ServiceHandler:
    return ServiceHandler(
        artifact_mock(
            service_name,
            {"progressionMap": Concept.PROGRESSION_MAP},
            ["tumorSegmentation", "normalizedImage"],
            store,
        ),
        name="map_generation",
    )
# endregion


# region devices
def heater_backend(service_name: str) -> BackendFunction:
    """
    Heater controller behind the temperature service.

    Turns the heater on below the threshold and off otherwise.

    :raises ValueError: If the reading is not a number
    """

    def run(graph: list[Triple], binding: Binding) -> list[Triple]:
        reading, value = binding["reading"], binding["value"]
        if not isinstance(value, Literal) or not value.datatype.is_numeric:
            raise ValueError(f"Temperature reading must be numeric, got {value.n3()}")
        state = "on" if Decimal(value.lexical) < HEATING_THRESHOLD else "off"
        heater = mint_output_iri(service_name, binding_fingerprint(binding), "heater")
        return [
            Triple(heater, _iri(Predicate.TYPE), _iri(Concept.HEATER)),
            Triple(heater, _iri(Predicate.HAS_STATE), Literal(state)),
            Triple(heater, _iri(Predicate.CONTROLS), reading),  # type: ignore[arg-type]
        ]

    return run


def temperature_device(
    service_name: str = "TemperatureControl", store: ArtifactStore | None = None
) -> ServiceHandler:
    """Heater controller; the description's rules answer readings of 20 and above."""
    return ServiceHandler(heater_backend(service_name), name="temperature_device")


def temperature_reading(reading: Iri, value: int | str, datatype: Datatype = Datatype.INTEGER) -> list[Triple]:
    """Request graph of one temperature reading."""
    return [
        Triple(reading, _iri(Predicate.TYPE), _iri(Concept.TEMPERATURE)),
        Triple(reading, _iri(Predicate.HAS_VALUE), Literal(str(value), datatype)),
    ]
# endregion


# region catalog
handler_catalog: dict[str, HandlerFactory] = {
    "brain_mask": brain_mask,
    "batched_folder_registration": batched_folder_registration,
    "robust_normalization": robust_normalization,
    "standard_normalization": standard_normalization,
    "tumor_segmentation": tumor_segmentation,
    "map_generation": map_generation,
    "temperature_device": temperature_device,
}

scenario_handlers: dict[str, str] = {
    "BrainMaskGeneration": "brain_mask",
    "BatchedFolderRegistration": "batched_folder_registration",
    "RobustNormalization": "robust_normalization",
    "StandardNormalization": "standard_normalization",
    "TumorSegmentation": "tumor_segmentation",
    "MapGeneration": "map_generation",
    "TemperatureControl": "temperature_device",
}
"""Fixture service name → catalog handler name."""


handler_classes: dict[str, AlgorithmClass] = {
    "brain_mask": AlgorithmClass.BRAIN_MASK_GENERATION,
    "batched_folder_registration": AlgorithmClass.REGISTRATION,
    "robust_normalization": AlgorithmClass.NORMALIZATION,
    "standard_normalization": AlgorithmClass.NORMALIZATION,
    "tumor_segmentation": AlgorithmClass.SEGMENTATION,
    "map_generation": AlgorithmClass.MAP_GENERATION,
    "temperature_device": AlgorithmClass.HEATING_CONTROL,
}
"""Catalog handler name → algorithm class its backend implements."""


def make_handler(handler_name: str, service_name: str, store: ArtifactStore | None = None) -> ServiceHandler:
    """
    Instantiate a catalog handler for a service.

    :raises ValueError: If the handler name is not in the catalog, listing the
        available ones
    """
    factory = handler_catalog.get(handler_name)
    if factory is None:
        raise ValueError(
            f"Unknown handler {handler_name!r}, available: {', '.join(sorted(handler_catalog))}"
        )
    return factory(service_name, store)


def handler_for(handler_name: str, description: ServiceDescription, store: ArtifactStore | None = None) -> ServiceHandler:
    """
    Instantiate a catalog handler for a description of the same algorithm class.

    :raises ValueError: If the handler is unknown or implements another class
    """
    handler = make_handler(handler_name, description.name, store)
    implemented = handler_classes[handler_name]
    if description.algorithm_class.value != implemented.value:
        raise ValueError(
            f"Handler {handler_name!r} implements {implemented.value}, "
            f"not {description.algorithm_class.value}"
        )
    return handler
# endregion
