"""
Running the scenario services, either in process or as live HTTP hosts.
"""

from typing import Mapping, Self

from fastapi import status

from app.db.terms import Iri
from app.helpers.client import (InvocationRequest, InvocationResponse,
                                decode_request, decode_response,
                                encode_request)
from app.helpers.descriptions import Registry
from app.helpers.exceptions import (ConnectionFailure, HttpStatusError,
                                    PreconditionRejected)
from app.helpers.service import ServiceHandler, handle_invoke
from app.main import ServiceHost, host_service
from app.models.Description import ServiceDescription
from app.scenario.artifacts import ArtifactStore
from app.scenario.handlers import make_handler, scenario_handlers


def scenario_handler_map(
    registry: Registry, store: ArtifactStore | None = None
) -> dict[str, ServiceHandler]:
    """
    A fresh handler for every registered fixture service.

    :raises ValueError: If a registered service has no scenario handler
    """
    handlers: dict[str, ServiceHandler] = {}
    for description in registry:
        handler_name = scenario_handlers.get(description.name)
        if handler_name is None:
            raise ValueError(f"No scenario handler for service {description.name!r}")
        handlers[description.name] = make_handler(handler_name, description.name, store)
    return handlers


class LocalInvoker:
    """
    Engine invoker that runs `handle_invoke` in process.

    Requests and responses still go through the wire encoding, and statuses
    map to the same errors the HTTP client raises.
    """

    def __init__(self, handlers: Mapping[str, ServiceHandler]):
        self.handlers = dict(handlers)

    def __call__(self, description: ServiceDescription, request: InvocationRequest) -> InvocationResponse:
        handler = self.handlers.get(description.name)
        if handler is None:
            raise ConnectionFailure(f"No local handler for {description.name}")

        result = handle_invoke(description, handler, decode_request(encode_request(request)))
        if result.status == status.HTTP_422_UNPROCESSABLE_ENTITY:
            raise PreconditionRejected(result.status, result.body)
        if result.status != status.HTTP_200_OK:
            raise HttpStatusError(result.status, result.body)
        return decode_response(result.body, result.short_circuited)


class ServiceFleet:
    """
    One live host per registered service, on ephemeral ports.

    `registry` holds the same descriptions with endpoints pointing at the
    hosts, ready to be handed to the engine.
    """

    def __init__(self, registry: Registry, handlers: Mapping[str, ServiceHandler]):
        self.source = registry
        self.handlers = dict(handlers)
        self.hosts: dict[str, ServiceHost] = {}
        self.registry = Registry()

    def start(self) -> Self:
        try:
            for description in self.source:
                host = host_service(description, self.handlers[description.name])
                self.hosts[description.name] = host
                self.registry.register(
                    description.model_copy(update={"endpoint": Iri(host.endpoint)})
                )
        except Exception:
            self.stop()
            raise
        return self

    def stop(self) -> None:
        for host in self.hosts.values():
            host.stop()
        self.hosts.clear()

    def __enter__(self) -> Self:
        return self.start()

    def __exit__(self, *exc_info: object) -> None:
        self.stop()
