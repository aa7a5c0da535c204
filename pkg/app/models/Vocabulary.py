"""
Namespaces and terms shared by the knowledge base, the fixtures and the mocks.

The `rdf:`, `dc:` and `sp:` namespaces and the five brain-mask concepts are the
ones used by the surgical wiki annotations; the TPM concepts after Brain Mask
Generation follow the same `Category-3A...` naming.
"""

from enum import StrEnum

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
DC = "http://purl.org/dc/elements/1.1/"
SP = "http://surgipedia.sfb25.de/wiki/Special:URIResolver/"
PROV = "http://www.w3.org/ns/prov#"
TPM = "http://smartws.example.org/tpm#"
HOME = "http://smartws.example.org/home#"
SMARTWS = "urn:smartws:"


# region classes
class Concept(StrEnum):
    """Concept IRIs typing the resources that flow through the pipelines."""
    HEADSCAN = SP + "Category-3AHeadscan"
    BRAIN_ATLAS_IMAGE = SP + "Category-3ABrainAtlasImage"
    BRAIN_ATLAS_MASK = SP + "Category-3ABrainAtlasMask"
    BRAIN_IMAGE = SP + "Category-3ABrainImage"
    BRAIN_MASK = SP + "Category-3ABrainMask"
    REGISTERED_IMAGE = SP + "Category-3ARegisteredImage"
    NORMALIZED_IMAGE = SP + "Category-3ANormalizedImage"
    TUMOR_SEGMENTATION = SP + "Category-3ATumorSegmentation"
    PROGRESSION_MAP = SP + "Category-3AProgressionMap"
    ANNOTATION = SP + "Category-3AAnnotation"
    TEMPERATURE = HOME + "Temperature"
    HEATER = HOME + "Heater"


class AlgorithmClass(StrEnum):
    """Algorithm classes of the controlled algorithm taxonomy."""
    BRAIN_MASK_GENERATION = SP + "Category-3ABrainMaskGeneration"
    REGISTRATION = SP + "Category-3ARegistration"
    NORMALIZATION = SP + "Category-3ANormalization"
    SEGMENTATION = SP + "Category-3ASegmentation"
    MAP_GENERATION = SP + "Category-3AMapGeneration"
    HEATING_CONTROL = HOME + "HeatingControl"


class Predicate(StrEnum):
    """Predicates used by fixtures, mocks and the wire format."""
    TYPE = RDF + "type"
    FORMAT = DC + "format"
    WAS_DERIVED_FROM = PROV + "wasDerivedFrom"
    NORMALIZATION_METHOD = TPM + "normalizationMethod"
    PATIENT = TPM + "patient"
    HAS_VALUE = HOME + "hasValue"
    HAS_STATE = HOME + "hasState"
    CONTROLS = HOME + "controls"
    BINDS = SMARTWS + "binds"
# endregion


# region variables
BINDING_VARIABLE_PREFIX = SMARTWS + "var:"

default_prefixes: dict[str, str] = {
    "rdf": RDF,
    "dc": DC,
    "sp": SP,
    "prov": PROV,
    "tpm": TPM,
    "home": HOME,
}
# endregion
