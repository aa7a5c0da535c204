"""
This module builds and runs the FastAPI application that hosts one SmartWS.

This module contains the following things:

- create_app: Builds a FastAPI application serving one description and handler.
- middlewares: Middleware that adds the processing time header to every response.
- ServiceHost: Runs an application with uvicorn, in a background thread or blocking.
- host_service: Validates a description, builds its app and starts a host.
"""
import threading
import time
from typing import Any, Callable, Self

import logfire
import uvicorn
from fastapi import FastAPI, Request

from app.helpers.descriptions import emit_description, validate_description
from app.helpers.exceptions import DescriptionValidationError, HostStartupError
from app.helpers.service import HostedService, ServiceHandler
from app.models.Description import ServiceDescription
from app.models.Tags import tags_metadata
from app.routers import smartws

DEFAULT_HOST = "127.0.0.1"
STARTUP_TIMEOUT_SECONDS = 10.0


# region FastAPI Configuration
def create_app(
    description: ServiceDescription,
    handler: ServiceHandler,
    document: bytes | None = None,
) -> FastAPI:
    """Build the application that hosts a service.

    :param description: The description served at `/description` and enforced on `/invoke`.
    :type description: ServiceDescription

    :param handler: The wrapped backend and its rules.
    :type handler: ServiceHandler

    :param document: Bytes returned by `/description`, the emitted description when omitted.
    :type document: bytes | None

    :return: The configured application.
    :rtype: FastAPI
    """
    app = FastAPI(
        title=f"SmartWS - {description.name}",
        summary=description.description or None,
        description=f"""
# {description.name}

Hosted SmartWS of class `{description.algorithm_class.value}`.

* `POST /invoke` runs the service on an `application/n-triples` graph.
* `GET /description` returns the service description.
* `GET /health` answers `ok`.
""",
        version="0.1.0",
        openapi_tags=tags_metadata,  # type: ignore
    )
    app.state.hosted = HostedService(
        description=description,
        handler=handler,
        document=document if document is not None else emit_description(description).encode("utf-8"),
    )

    # region Routers
    app.include_router(smartws.router)
    # endregion

    # region Middleware
    @app.middleware("http")
    async def add_process_time_header(
        request: Request,
        call_next: Callable[[Request], Any]
    ):
        """Middleware that adds the processing time of a request as a header.

        :param request: The incoming HTTP request.
        :type request: Request

        :param call_next: A function that processes the request and returns a response.
        :type call_next: Callable[[Request], Any]

        :return: The HTTP response with added headers.
        :rtype: Any
        """
        start_time = time.perf_counter()
        response = await call_next(request)
        process_time = time.perf_counter() - start_time
        response.headers["X-Process-Time"] = str(process_time)
        return response
    # endregion

    logfire.instrument_fastapi(app, capture_headers=True)
    return app
# endregion


# region Hosting
class ServiceHost:
    """
    A uvicorn server for one application.

    `start()` serves from a daemon thread and returns once the socket is bound,
    `serve()` blocks the calling thread. Port 0 binds an ephemeral port, read it
    back from `port` after starting.
    """

    def __init__(self, app: FastAPI, port: int = 0, host: str = DEFAULT_HOST):
        self.app = app
        self.host = host
        self.requested_port = port
        self.server = uvicorn.Server(
            uvicorn.Config(app, host=host, port=port, log_level="warning", access_log=False)
        )
        self._thread: threading.Thread | None = None

    @property
    def started(self) -> bool:
        return self.server.started

    @property
    def port(self) -> int:
        """Bound port, available once started."""
        if not self.server.started or not self.server.servers:
            raise HostStartupError("Host is not running")
        return self.server.servers[0].sockets[0].getsockname()[1]

    @property
    def endpoint(self) -> str:
        return f"http://{self.host}:{self.port}"

    def start(self, timeout: float = STARTUP_TIMEOUT_SECONDS) -> Self:
        """
        Serve in a background thread.

        :raises HostStartupError: If the server does not come up, e.g. the
            port is in use
        """
        self._thread = threading.Thread(
            target=self._run, name=f"smartws-host-{self.requested_port}", daemon=True
        )
        self._thread.start()

        deadline = time.monotonic() + timeout
        while not self.server.started:
            if not self._thread.is_alive():
                raise HostStartupError(
                    f"Could not serve on {self.host}:{self.requested_port}"
                )
            if time.monotonic() > deadline:
                self.stop()
                raise HostStartupError(
                    f"Server on {self.host}:{self.requested_port} did not start within {timeout}s"
                )
            time.sleep(0.01)

        logfire.info("Serving {title} at {endpoint}", title=self.app.title, endpoint=self.endpoint)
        return self

    def _run(self) -> None:
        try:
            self.server.run()
        except SystemExit:
            # uvicorn exits when it cannot bind; start() reports it
            pass

    def wait(self) -> None:
        """Block until the background server stops."""
        while self._thread is not None and self._thread.is_alive():
            self._thread.join(timeout=0.5)

    def serve(self) -> None:
        """
        Serve in the calling thread until interrupted.

        :raises HostStartupError: If the server could not bind
        """
        try:
            self.server.run()
        except SystemExit as e:
            raise HostStartupError(
                f"Could not serve on {self.host}:{self.requested_port}"
            ) from e

    def stop(self, timeout: float = 5.0) -> None:
        self.server.should_exit = True
        if self._thread is not None:
            self._thread.join(timeout=timeout)
            self._thread = None

    def __enter__(self) -> Self:
        if not self.server.started:
            self.start()
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.stop()


def host_service(
    description: ServiceDescription,
    handler: ServiceHandler,
    port: int = 0,
    *,
    host: str = DEFAULT_HOST,
    document: bytes | None = None,
) -> ServiceHost:
    """Serve a description and handler from a background thread.

    :param description: The service to host.
    :type description: ServiceDescription

    :param handler: The wrapped backend.
    :type handler: ServiceHandler

    :param port: Port to bind, 0 for an ephemeral one.
    :type port: int

    :param document: Description file bytes to serve unchanged.
    :type document: bytes | None

    :return: The running host.
    :rtype: ServiceHost

    :raises DescriptionValidationError: If the description is invalid.
    :raises HostStartupError: If the port is in use.
    """
    violations = validate_description(description)
    if violations:
        raise DescriptionValidationError(description.name, violations)
    return ServiceHost(create_app(description, handler, document), port=port, host=host).start()
# endregion
