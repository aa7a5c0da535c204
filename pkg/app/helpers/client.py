"""
Wire format and HTTP client for invoking a SmartWS.

Request and response bodies are canonical knowledge base documents
(`application/n-triples`). A request also carries the binding of the
precondition variables as reserved triples:

    <urn:smartws:var:NAME> <urn:smartws:binds> term .
"""

import requests
from fastapi import status
from pydantic.dataclasses import dataclass

from app.db.syntax import parse_document, serialize
from app.db.terms import Binding, Iri, Term, Triple
from app.helpers.exceptions import (BodyParseError, ConnectionFailure,
                                    HttpStatusError, KbSyntaxError,
                                    PreconditionRejected, TransportError)
from app.helpers.validations import is_variable_name
from app.models.Vocabulary import BINDING_VARIABLE_PREFIX, Predicate
from app.settings.config import settings

N_TRIPLES = "application/n-triples"
SHORT_CIRCUIT_HEADER = "X-SmartWS-Short-Circuit"


# region classes
@dataclass(frozen=True)
class InvocationRequest:
    """Input graph plus the roles its resources play."""
    graph: tuple[Triple, ...]
    binding: dict[str, Term] | None = None

    @property
    def roles(self) -> Binding:
        return dict(self.binding or {})


@dataclass(frozen=True)
class InvocationResponse:
    graph: tuple[Triple, ...]
    short_circuited: bool = False
# endregion


# region wire format
def encode_binding(binding: Binding) -> list[Triple]:
    binds = Iri(str(Predicate.BINDS))
    return [
        Triple(Iri(BINDING_VARIABLE_PREFIX + name), binds, value)  # type: ignore[arg-type]
        for name, value in binding.items()
    ]


def encode_request(request: InvocationRequest) -> str:
    """Serialize a request: its graph and its binding triples, canonically sorted."""
    return serialize([*request.graph, *encode_binding(request.roles)])


def decode_request(body: str) -> InvocationRequest:
    """
    Split a request body into its graph and its binding.

    :raises KbSyntaxError: If the body is not a valid document
    :raises ValueError: If a binding triple names an invalid variable or
        binds the same variable twice
    """
    graph: list[Triple] = []
    binding: Binding = {}
    for triple in parse_document(body):
        subject = triple.subject.value
        if triple.predicate.value == Predicate.BINDS and subject.startswith(BINDING_VARIABLE_PREFIX):
            name = is_variable_name(subject.removeprefix(BINDING_VARIABLE_PREFIX))
            if name in binding and binding[name] != triple.object:
                raise ValueError(f"Variable ?{name} is bound twice")
            binding[name] = triple.object
        else:
            graph.append(triple)
    return InvocationRequest(graph=tuple(graph), binding=binding)


def encode_graph(graph: list[Triple] | tuple[Triple, ...]) -> str:
    return serialize(graph)


def decode_response(body: str, short_circuited: bool = False) -> InvocationResponse:
    """
    Parse a 200 response body.

    :raises BodyParseError: If the body is not a valid document
    """
    try:
        triples = parse_document(body)
    except KbSyntaxError as e:
        raise BodyParseError(f"Response body is not a valid graph: {e}") from e
    return InvocationResponse(graph=tuple(triples), short_circuited=short_circuited)
# endregion


# region client
def error_message(response: requests.Response) -> str:
    """The `detail` of a JSON error body, or the raw body."""
    try:
        detail = response.json().get("detail")
    except (ValueError, AttributeError):
        return response.text
    return detail if isinstance(detail, str) else response.text


def invoke(endpoint: Iri | str, request: InvocationRequest, timeout: float | None = None) -> InvocationResponse:
    """
    POST a request to `<endpoint>/invoke`.

    :param endpoint: Base IRI of the service
    :type endpoint: Iri | str
    :param request: Graph and binding to send
    :type request: InvocationRequest
    :param timeout: Seconds, defaults to `SMARTWS_INVOKE_TIMEOUT_SECONDS`
    :type timeout: float | None
    :return: The output graph and whether a rule produced it
    :rtype: InvocationResponse
    :raises ConnectionFailure: If the endpoint cannot be reached
    :raises PreconditionRejected: On 422, carrying the server message
    :raises HttpStatusError: On any other non-200 status
    :raises BodyParseError: If a 200 body does not parse
    :raises TransportError: On other request failures such as read timeouts
    """
    url = f"{str(endpoint).rstrip('/')}/invoke"
    try:
        response = requests.post(
            url,
            data=encode_request(request).encode("utf-8"),
            headers={"Content-Type": N_TRIPLES, "Accept": N_TRIPLES},
            timeout=timeout or settings.INVOKE_TIMEOUT_SECONDS,
        )
    except requests.ConnectionError as e:
        raise ConnectionFailure(f"Could not connect to {url}: {e}") from e
    except requests.RequestException as e:
        raise TransportError(f"Request to {url} failed: {e}") from e

    if response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY:
        raise PreconditionRejected(response.status_code, error_message(response))
    if response.status_code != status.HTTP_200_OK:
        raise HttpStatusError(response.status_code, error_message(response))

    short_circuited = response.headers.get(SHORT_CIRCUIT_HEADER, "").lower() == "true"
    try:
        body = response.content.decode("utf-8")
    except UnicodeDecodeError as e:
        raise BodyParseError(f"Response body is not UTF-8: {e}") from e
    return decode_response(body, short_circuited)
# endregion
