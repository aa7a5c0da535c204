"""
Maturity classification of a SmartWS.

Level 1 is technical (http resources, standard formats, a REST contract),
level 2 semantic (RDF in and out, pre- and postconditions, a machine-readable
description), level 3 smart (at least one smart rule). Levels are cumulative;
all criteria are evaluated and reported even above a failed level.
"""

import requests
from fastapi import status

from app.helpers.client import N_TRIPLES
from app.helpers.descriptions import parse_description
from app.helpers.exceptions import DescriptionError
from app.helpers.validations import has_http_scheme
from app.models.Description import ServiceDescription
from app.models.Maturity import (CriterionResult, MaturityReport, ProbeCheck,
                                 ProbeResult)
from app.settings.config import settings

RDF_FORMATS = frozenset({
    "application/n-triples",
    "application/n-quads",
    "application/rdf+xml",
    "application/ld+json",
    "application/trig",
    "text/turtle",
    "text/n3",
})

STANDARD_FORMATS = RDF_FORMATS | {"application/json", "application/xml", "text/xml"}

MAX_LEVEL = 3


# region formats
def _media_type(declared: str) -> str:
    return declared.split(";", 1)[0].strip().lower()


def is_standard_format(declared: str) -> bool:
    """XML, JSON or an RDF serialization, including `+xml`/`+json` suffixes."""
    media_type = _media_type(declared)
    return media_type in STANDARD_FORMATS or media_type.endswith(("+xml", "+json"))


def is_rdf_format(declared: str) -> bool:
    return _media_type(declared) in RDF_FORMATS
# endregion


# region probing
def _get(url: str, timeout: float) -> requests.Response | str:
    try:
        return requests.get(url, timeout=timeout)
    except requests.ConnectionError as e:
        return f"connection refused: {e}"
    except requests.RequestException as e:
        return f"request failed: {e}"


def probe_endpoint(endpoint: str, timeout: float | None = None) -> ProbeResult:
    """
    Check a running service with GET requests only.

    Unreachable endpoints are recorded as failed checks, never raised.

    :param endpoint: Base IRI of the service
    :type endpoint: str
    :param timeout: Seconds per request, defaults to `SMARTWS_PROBE_TIMEOUT_SECONDS`
    :type timeout: float | None
    :rtype: ProbeResult
    """
    base = endpoint.rstrip("/")
    timeout = timeout or settings.PROBE_TIMEOUT_SECONDS

    response = _get(f"{base}/health", timeout)
    if isinstance(response, str):
        health = ProbeCheck(passed=False, evidence=response)
    elif response.status_code == status.HTTP_200_OK and response.text.strip() == "ok":
        health = ProbeCheck(passed=True, evidence="GET /health answered 200 ok")
    else:
        health = ProbeCheck(passed=False, evidence=f"GET /health answered {response.status_code}")

    response = _get(f"{base}/description", timeout)
    if isinstance(response, str):
        description = ProbeCheck(passed=False, evidence=response)
    elif response.status_code != status.HTTP_200_OK:
        description = ProbeCheck(
            passed=False, evidence=f"GET /description answered {response.status_code}"
        )
    else:
        try:
            parsed = parse_description(response.content, strict=False)
            description = ProbeCheck(
                passed=True, evidence=f"GET /description returned a parseable description of {parsed.name}"
            )
        except DescriptionError as e:
            description = ProbeCheck(
                passed=False, evidence=f"GET /description returned an unparseable document: {e}"
            )

    response = _get(f"{base}/invoke", timeout)
    if isinstance(response, str):
        invoke = ProbeCheck(passed=False, evidence=response)
    elif response.status_code != status.HTTP_200_OK:
        invoke = ProbeCheck(passed=False, evidence=f"GET /invoke answered {response.status_code}")
    else:
        try:
            affordance = response.json()
        except ValueError:
            affordance = None
        if (
            isinstance(affordance, dict)
            and affordance.get("method") == "POST"
            and affordance.get("contentType") == N_TRIPLES
        ):
            invoke = ProbeCheck(passed=True, evidence=f"/invoke declares POST with {N_TRIPLES}")
        else:
            invoke = ProbeCheck(
                passed=False, evidence=f"/invoke does not declare POST with {N_TRIPLES}"
            )

    return ProbeResult(endpoint=base, health=health, description=description, invoke=invoke)
# endregion


# region classification
def _level_one(description: ServiceDescription, probe: ProbeResult | None) -> list[CriterionResult]:
    endpoint = description.endpoint.value
    http = has_http_scheme(endpoint)
    criteria = [
        CriterionResult(
            criterion_id="L1.http_endpoint",
            passed=http,
            evidence=(
                f"endpoint {endpoint} is an http(s) IRI" if http
                else f"endpoint {endpoint} does not use http or https"
            ),
        )
    ]

    standard = sorted(f for f in description.declared_formats if is_standard_format(f))
    criteria.append(CriterionResult(
        criterion_id="L1.standard_format",
        passed=bool(standard),
        evidence=(
            f"declares standard formats: {', '.join(standard)}" if standard
            else "no XML, JSON or RDF format declared"
            + (f" (declared: {', '.join(description.declared_formats)})" if description.declared_formats else "")
        ),
    ))

    if probe is None:
        criteria.append(CriterionResult(
            criterion_id="L1.rest_interface",
            passed=http,
            evidence=(
                "resources /invoke (POST), /description and /health (GET) under an http(s) endpoint"
                if http else "no http(s) resource IRIs to attach the REST contract to"
            ),
        ))
    else:
        passed = http and probe.health.passed and probe.invoke.passed
        criteria.append(CriterionResult(
            criterion_id="L1.rest_interface",
            passed=passed,
            evidence=f"{probe.health.evidence}; {probe.invoke.evidence}",
        ))
    return criteria


def _level_two(description: ServiceDescription, probe: ProbeResult | None) -> list[CriterionResult]:
    rdf = sorted(f for f in description.declared_formats if is_rdf_format(f))
    criteria = [
        CriterionResult(
            criterion_id="L2.rdf_io",
            passed=bool(rdf),
            evidence=f"RDF formats: {', '.join(rdf)}" if rdf else "no RDF serialization declared",
        )
    ]

    pre, post = len(description.precondition), len(description.postcondition)
    criteria.append(CriterionResult(
        criterion_id="L2.pre_post_conditions",
        passed=pre > 0 and post > 0,
        evidence=f"precondition has {pre} triple patterns, postcondition has {post}",
    ))

    if probe is None:
        criteria.append(CriterionResult(
            criterion_id="L2.machine_readable_description",
            passed=True,
            evidence="description document parses",
        ))
    else:
        criteria.append(CriterionResult(
            criterion_id="L2.machine_readable_description",
            passed=probe.description.passed,
            evidence=probe.description.evidence,
        ))
    return criteria


def _level_three(description: ServiceDescription) -> list[CriterionResult]:
    names = [rule.name for rule in description.rules]
    return [
        CriterionResult(
            criterion_id="L3.smartness_rules",
            passed=bool(names),
            evidence=f"smart rules: {', '.join(names)}" if names else "no smart rules attached",
        )
    ]


def classify(description: ServiceDescription, probe: ProbeResult | None = None) -> MaturityReport:
    """
    Assign a maturity level.

    :param description: A parsed description, it does not need to be valid
    :type description: ServiceDescription
    :param probe: Live probe results; without them the classification only
        depends on the description
    :type probe: ProbeResult | None
    :return: The highest level whose criteria and all lower ones pass
    :rtype: MaturityReport
    """
    criteria = [
        *_level_one(description, probe),
        *_level_two(description, probe),
        *_level_three(description),
    ]
    level = 0
    for candidate in range(1, MAX_LEVEL + 1):
        if not all(c.passed for c in criteria if c.level == candidate):
            break
        level = candidate
    return MaturityReport(level=level, probed=probe is not None, criteria=criteria)
# endregion
