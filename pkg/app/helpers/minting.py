"""
Deterministic naming of the resources that services produce.

The same service, input binding and output variable always mint the same IRI,
which keeps repeated runs idempotent and lets a rule answer with exactly the
IRIs the wrapped backend would have produced.
"""

import hashlib
from typing import Iterable
from urllib.parse import quote

from app.db.terms import Binding, Iri, binding_to_text
from app.settings.config import settings

FINGERPRINT_PREFIX_LENGTH = 12


def binding_fingerprint(binding: Binding, names: Iterable[str] | None = None) -> str:
    """
    SHA-256 hex digest of the canonical serialization of a binding.

    :param binding: The binding to fingerprint
    :type binding: Binding
    :param names: Restrict the binding to these variables first
    :type names: Iterable[str] | None
    :return: 64 hex characters
    :rtype: str
    """
    return hashlib.sha256(binding_to_text(binding, names).encode("utf-8")).hexdigest()


def mint_output_iri(
    service_name: str,
    binding_fingerprint: str,
    output_variable: str,
    base: str | None = None,
) -> Iri:
    """
    Name an output resource.

    The IRI is `<base>/<service_name>/<first 12 hex of fingerprint>/<variable>`,
    where base defaults to the `SMARTWS_BASE_IRI` setting.

    :return: The minted IRI
    :rtype: Iri
    """
    root = (base or settings.BASE_IRI).rstrip("/")
    return Iri(
        f"{root}/{quote(service_name, safe='')}"
        f"/{binding_fingerprint[:FINGERPRINT_PREFIX_LENGTH]}"
        f"/{output_variable.removeprefix('?')}"
    )
