"""
This module defines the application's settings using Pydantic's BaseSettings

It centralizes configuration parameters, loading them from environment variables
with the help of `pydantic-settings`. Every variable is read with the
`SMARTWS_` prefix, so `BASE_IRI` is configured through `SMARTWS_BASE_IRI`.
These settings drive:

- **Minting:** The base IRI under which produced resources are named.
- **Logging:** Whether logs are shipped to Logfire and/or mirrored to stderr.
- **Transport:** Timeouts used by the HTTP client and the maturity probe.

No configuration file is read; the environment is the only source.
"""

import sys
from functools import lru_cache
from typing import Annotated

import logfire
from pydantic import AfterValidator, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from app.helpers.validations import is_http_iri


# region classes
class Settings(BaseSettings):
    """
    Settings for the application.

    Settings for the application that are loaded from the environment variables.
    """
    BASE_IRI: Annotated[str, AfterValidator(is_http_iri)] = Field(
        default="http://localhost:8000/smartws",
        title="Base IRI",
        description="Base under which output resources are minted (no trailing slash)",
        examples=["http://localhost:8000/smartws", "https://tpm.example.org/res"],
    )
    ENVIRONMENT: str = Field(
        default="development",
        title="Environment",
        description="Environment in which the application is running",
        examples=["development", "production", "testing"],
    )
    LOGS_TOKEN: str | None = Field(
        default=None,
        title="Logs Token",
        description="Logfire write token, logs stay local when it is not set",
        examples=["xxxx_xx_xx_xxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxx"],
    )
    LOG_CONSOLE: bool = Field(
        default=False,
        title="Log Console",
        description="Mirror log records to standard error",
    )
    INVOKE_TIMEOUT_SECONDS: float = Field(
        default=30.0,
        title="Invoke Timeout",
        description="Timeout in seconds for POST /invoke requests",
        examples=[30.0],

        gt=0,
    )
    PROBE_TIMEOUT_SECONDS: float = Field(
        default=5.0,
        title="Probe Timeout",
        description="Timeout in seconds for every GET issued by the maturity probe",
        examples=[5.0],

        gt=0,
    )

    model_config = SettingsConfigDict(
        env_prefix="SMARTWS_",
    )
# endregion


# region functions
@lru_cache
def get_settings() -> Settings:
    """Returns the settings for the application.
    This function uses the `lru_cache` decorator to cache the settings object,
    so that it is only loaded once and reused for subsequent calls.

    :return: Settings object containing the application settings.
    :rtype: Settings
    """
    return Settings()


def update_settings() -> None:
    """Reload the cached settings from the current environment."""
    settings = get_settings()
    settings.__init__()  # type: ignore


def configure_logging(console: bool | None = None) -> None:
    """Configure Logfire for the current process.

    Records are only sent to Logfire when a token is configured. The console
    exporter, when enabled, writes to stderr so stdout stays free for results.

    :param console: Overrides `LOG_CONSOLE` when given.
    :type console: bool | None
    """
    show_console = settings.LOG_CONSOLE if console is None else console
    logfire.configure(
        send_to_logfire="if-token-present",
        token=settings.LOGS_TOKEN,
        service_name="smartws",
        environment=settings.ENVIRONMENT,
        console=logfire.ConsoleOptions(output=sys.stderr) if show_console else False,
    )
# endregion


# region variables
settings: Settings = get_settings()
# endregion
