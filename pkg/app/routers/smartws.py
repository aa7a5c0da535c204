from typing import Annotated

from fastapi import APIRouter, Depends, HTTPException, Request, status
from fastapi.concurrency import run_in_threadpool
from fastapi.responses import PlainTextResponse, Response

from app.helpers.client import (N_TRIPLES, SHORT_CIRCUIT_HEADER,
                                decode_request)
from app.helpers.service import HostedService, handle_invoke
from app.models.Affordance import InvokeAffordance
from app.models.Tags import Tags

router = APIRouter()


def get_hosted_service(request: Request) -> HostedService:
    """Dependency returning the service the running app hosts."""
    return request.app.state.hosted


HostedServiceDependency = Annotated[HostedService, Depends(get_hosted_service)]


# region Endpoints
@router.post(
    "/invoke",
    tags=[Tags.invocation],
    response_class=Response,
    responses={
        status.HTTP_200_OK: {
            "content": {N_TRIPLES: {}},
            "description": "Output graph of the service",
        },
        status.HTTP_400_BAD_REQUEST: {"description": "The body is not a valid graph"},
        status.HTTP_422_UNPROCESSABLE_ENTITY: {"description": "The precondition does not hold"},
        status.HTTP_500_INTERNAL_SERVER_ERROR: {"description": "The wrapped backend failed"},
    },

    summary="Invoke the service",
    response_description="The output graph in application/n-triples",
)
async def invoke_service(
    request: Request,
    hosted: HostedServiceDependency,
) -> Response:
    """
    Run the service on the posted graph.

    The body is a graph in application/n-triples carrying the binding of the
    precondition variables as `<urn:smartws:var:NAME> <urn:smartws:binds> term`
    triples. When a smart rule answers, the response carries
    `X-SmartWS-Short-Circuit: true` and the backend is not called.

    \f

    :param request: The incoming request, read as raw body.
    :type request: Request

    :param hosted: The hosted service.
    :type hosted: HostedServiceDependency

    :return: The output graph.
    :rtype: Response
    """
    body = await request.body()
    try:
        invocation = decode_request(body.decode("utf-8"))
    except (UnicodeDecodeError, ValueError) as e:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=f"Invalid request graph: {e}",
        ) from e

    result = await run_in_threadpool(
        handle_invoke, hosted.description, hosted.handler, invocation
    )
    if result.status != status.HTTP_200_OK:
        raise HTTPException(status_code=result.status, detail=result.body)

    headers = {SHORT_CIRCUIT_HEADER: "true"} if result.short_circuited else None
    return Response(content=result.body, media_type=N_TRIPLES, headers=headers)


@router.get(
    "/invoke",
    tags=[Tags.invocation],
    response_model=InvokeAffordance,
    response_model_by_alias=True,

    summary="Describe how to invoke the service",
    response_description="Method and media types accepted by POST /invoke",
)
async def invoke_affordance() -> InvokeAffordance:
    """
    Declare how `POST /invoke` is called, without calling it.
    """
    return InvokeAffordance(
        content_type=N_TRIPLES,
        accept=N_TRIPLES,
        short_circuit_header=SHORT_CIRCUIT_HEADER,
    )


@router.get(
    "/description",
    tags=[Tags.metadata],
    response_class=Response,
    responses={status.HTTP_200_OK: {"content": {"application/json": {}}}},

    summary="Get the service description",
    response_description="The description file, byte for byte",
)
async def read_description(hosted: HostedServiceDependency) -> Response:
    """
    Return the description file the service was started with.

    \f

    :param hosted: The hosted service.
    :type hosted: HostedServiceDependency
    """
    return Response(content=hosted.document, media_type="application/json")


@router.get(
    "/health",
    tags=[Tags.metadata],
    response_class=PlainTextResponse,

    summary="Health check",
)
async def health() -> str:
    return "ok"
# endregion
