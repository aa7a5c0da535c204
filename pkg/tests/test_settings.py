from typing import Iterator

import pytest
from pydantic import ValidationError

from app.db.terms import Iri, Literal
from app.helpers.minting import binding_fingerprint, mint_output_iri
from app.settings.config import settings, update_settings

HEADSCAN = Iri("http://smartws.example.org/patients/p1/headscan-1")


@pytest.fixture(name="environment")
def environment_fixture(monkeypatch: pytest.MonkeyPatch) -> Iterator[pytest.MonkeyPatch]:
    """Environment overrides that are reloaded into the settings and undone afterwards."""
    yield monkeypatch
    monkeypatch.delenv("SMARTWS_BASE_IRI", raising=False)
    monkeypatch.delenv("SMARTWS_INVOKE_TIMEOUT_SECONDS", raising=False)
    update_settings()


def test_defaults():
    assert settings.BASE_IRI == "http://localhost:8000/smartws"
    assert settings.LOGS_TOKEN is None
    assert not settings.LOG_CONSOLE


def test_minted_iri_layout():
    fingerprint = binding_fingerprint({"inputImage": HEADSCAN})

    iri = mint_output_iri("BrainMaskGeneration", fingerprint, "brainMask")

    assert len(fingerprint) == 64
    assert iri == Iri(f"http://localhost:8000/smartws/BrainMaskGeneration/{fingerprint[:12]}/brainMask")
    assert mint_output_iri("BrainMaskGeneration", fingerprint, "?brainMask") == iri


def test_fingerprint_ignores_insertion_order():
    value = Literal("7")

    assert binding_fingerprint({"a": HEADSCAN, "b": value}) == binding_fingerprint({"b": value, "a": HEADSCAN})
    assert binding_fingerprint({"a": HEADSCAN, "b": value}, ["a"]) == binding_fingerprint({"a": HEADSCAN})
    assert binding_fingerprint({"a": HEADSCAN}) != binding_fingerprint({"b": HEADSCAN})


def test_service_names_are_escaped():
    iri = mint_output_iri("Map Generation/v2", "0" * 64, "map", base="https://tpm.example.org/res/")

    assert iri.value == "https://tpm.example.org/res/Map%20Generation%2Fv2/000000000000/map"


def test_base_iri_from_environment(environment: pytest.MonkeyPatch):
    environment.setenv("SMARTWS_BASE_IRI", "https://tpm.example.org/res")
    environment.setenv("SMARTWS_INVOKE_TIMEOUT_SECONDS", "2.5")

    update_settings()

    assert settings.INVOKE_TIMEOUT_SECONDS == 2.5
    assert mint_output_iri("TumorSegmentation", "f" * 64, "tumorSegmentation").value.startswith(
        "https://tpm.example.org/res/TumorSegmentation/"
    )


@pytest.mark.parametrize(
    "variable, value",
    [
        ("SMARTWS_BASE_IRI", "ftp://files.example.org/res"),
        ("SMARTWS_INVOKE_TIMEOUT_SECONDS", "0"),
    ],
)
def test_invalid_environment_is_rejected(environment: pytest.MonkeyPatch, variable: str, value: str):
    environment.setenv(variable, value)

    with pytest.raises(ValidationError):
        update_settings()
