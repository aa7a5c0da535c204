"""
Wrapping a local function as a SmartWS.

`handle_invoke` is the whole request pipeline of a hosted service, independent
of HTTP: precondition check, smart rules, then the wrapped backend.
"""

import threading
from dataclasses import dataclass
from typing import Callable, NamedTuple

import logfire
from fastapi import status

from app.db.database import KnowledgeBase
from app.db.syntax import serialize
from app.db.terms import Binding, Triple
from app.helpers.client import InvocationRequest
from app.helpers.descriptions import precondition_bindings
from app.helpers.smartness import evaluate_rules
from app.models.Description import ServiceDescription
from app.models.Rule import SmartRule

BackendFunction = Callable[[list[Triple], Binding], list[Triple]]
"""Wrapped source: (input graph, binding) → output graph."""


# region classes
class ServiceHandler:
    """
    A wrapped backend plus the rules evaluated in front of it.

    `backend_calls` counts executions of the wrapped function; rule answers
    never touch it.
    """

    def __init__(
        self,
        function: BackendFunction,
        rules: list[SmartRule] | None = None,
        name: str | None = None,
    ):
        self.function = function
        self.rules = rules
        self.name = name or getattr(function, "__name__", "handler")
        self._lock = threading.Lock()
        self._backend_calls = 0

    @property
    def backend_calls(self) -> int:
        return self._backend_calls

    def rules_for(self, description: ServiceDescription) -> list[SmartRule]:
        """Attached rules, falling back to the ones the description declares."""
        return list(description.rules) if self.rules is None else list(self.rules)

    def execute(self, graph: list[Triple], binding: Binding) -> list[Triple]:
        with self._lock:
            self._backend_calls += 1
        return self.function(graph, binding)


class InvokeResult(NamedTuple):
    status: int
    body: str
    short_circuited: bool = False
# endregion


# region functions
def handle_invoke(
    description: ServiceDescription,
    handler: ServiceHandler,
    request: InvocationRequest,
) -> InvokeResult:
    """
    Answer one invocation.

    1. The request graph must satisfy the precondition under the provided
       binding, otherwise 422.
    2. The first smart rule that fires answers the request and the backend
       is not called.
    3. Otherwise the wrapped function produces the output graph; an exception
       it raises becomes a 500 with its message as body.

    :return: Status, body (a canonical graph document or an error message) and
        whether a rule answered
    :rtype: InvokeResult
    """
    graph = list(request.graph)
    bindings = precondition_bindings(description, KnowledgeBase(graph), request.roles)
    if not bindings:
        logfire.info(
            "Rejected request to {service}: precondition not satisfied",
            service=description.name,
        )
        return InvokeResult(
            status.HTTP_422_UNPROCESSABLE_ENTITY,
            f"Request graph does not satisfy the precondition of {description.name}",
        )
    binding = {**request.roles, **bindings[0]}

    outcome = evaluate_rules(
        handler.rules_for(description), graph, binding, service_name=description.name
    )
    if outcome.fired:
        return InvokeResult(status.HTTP_200_OK, serialize(outcome.emitted), True)

    try:
        output = handler.execute(graph, binding)
    except Exception as e:
        logfire.exception("Handler {handler} failed", handler=handler.name)
        return InvokeResult(status.HTTP_500_INTERNAL_SERVER_ERROR, f"{type(e).__name__}: {e}")
    return InvokeResult(status.HTTP_200_OK, serialize(output))
# endregion


# region hosting
@dataclass(frozen=True)
class HostedService:
    """What a hosted app serves: the description, its file and the handler."""
    description: ServiceDescription
    handler: ServiceHandler
    document: bytes
# endregion
