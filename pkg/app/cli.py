"""
Command-line entrypoint: `python -m app.cli <command>`.

Results go to standard output, diagnostics to standard error. Exit codes are
0 on success, 1 on a domain error (or a run that hit `--max-rounds`) and 2 on
usage errors and unreadable input.
"""

from pathlib import Path
from typing import Annotated

import typer

from app.db.database import KnowledgeBase, load_kb, match_pattern
from app.db.syntax import parse_pattern, serialize
from app.db.terms import GraphPattern
from app.helpers.descriptions import load_description, load_registry
from app.helpers.engine import http_invoker, run_to_fixpoint
from app.helpers.exceptions import (DescriptionError, HostStartupError,
                                    KbSyntaxError)
from app.helpers.maturity import classify as classify_description
from app.helpers.maturity import probe_endpoint
from app.main import ServiceHost, create_app
from app.models.EngineConfig import EngineConfig
from app.models.TerminatedBy import TerminatedBy
from app.models.Vocabulary import default_prefixes
from app.scenario.fleet import LocalInvoker, scenario_handler_map
from app.scenario.handlers import handler_for
from app.settings.config import configure_logging

EXIT_DOMAIN_ERROR = 1
EXIT_USAGE_ERROR = 2

cli = typer.Typer(
    name="smartws",
    help="Host SmartWS, run the data-driven engine and inspect knowledge bases.",
    no_args_is_help=True,
    pretty_exceptions_enable=False,
)


def fail(message: str, code: int) -> typer.Exit:
    typer.echo(message, err=True)
    return typer.Exit(code)


def read_kb(path: Path) -> KnowledgeBase:
    try:
        return load_kb(path)
    except (OSError, UnicodeDecodeError) as e:
        raise fail(f"Cannot read knowledge base {path}: {e}", EXIT_USAGE_ERROR) from e
    except KbSyntaxError as e:
        raise fail(f"{path}: {e}", EXIT_USAGE_ERROR) from e


def read_pattern(pattern: str) -> GraphPattern:
    """A pattern given inline or as the path of a file holding it."""
    path = Path(pattern)
    try:
        text = path.read_text(encoding="utf-8") if path.is_file() else pattern
    except (OSError, UnicodeDecodeError) as e:
        raise fail(f"Cannot read pattern {path}: {e}", EXIT_USAGE_ERROR) from e
    try:
        return parse_pattern(text, default_prefixes)
    except KbSyntaxError as e:
        raise fail(f"Invalid pattern: {e}", EXIT_USAGE_ERROR) from e


# region callbacks
@cli.callback()
def main(
    verbose: Annotated[
        bool,
        typer.Option("--verbose", "-v", help="Mirror log records to standard error."),
    ] = False,
) -> None:
    configure_logging(console=verbose or None)
# endregion


# region commands
@cli.command()
def serve(
    desc: Annotated[Path, typer.Option(help="Description file of the service.")],
    handler: Annotated[str, typer.Option(help="Name of the scenario handler to wrap.")],
    port: Annotated[int, typer.Option(help="Port to bind, 0 for an ephemeral one.", min=0, max=65535)] = 8000,
    host: Annotated[str, typer.Option(help="Interface to bind.")] = "127.0.0.1",
) -> None:
    """
    Host a description and a scenario handler until interrupted.
    """
    try:
        document = desc.read_bytes()
    except OSError as e:
        raise fail(f"Cannot read description {desc}: {e}", EXIT_DOMAIN_ERROR) from e
    try:
        description = load_description(desc)
        service_handler = handler_for(handler, description)
    except (DescriptionError, ValueError) as e:
        raise fail(f"{desc}: {e}", EXIT_DOMAIN_ERROR) from e

    service_host = ServiceHost(create_app(description, service_handler, document), port=port, host=host)
    try:
        service_host.start()
    except HostStartupError as e:
        raise fail(str(e), EXIT_DOMAIN_ERROR) from e

    typer.echo(f"Serving {description.name} at {service_host.endpoint} (port {service_host.port})")
    try:
        service_host.wait()
    except KeyboardInterrupt:
        pass
    finally:
        service_host.stop()


@cli.command()
def run(
    kb: Annotated[Path, typer.Option(help="Seed knowledge base.")],
    registry: Annotated[Path, typer.Option(help="Directory of description files.")],
    report: Annotated[Path, typer.Option(help="Where to write the run report (JSON).")],
    max_rounds: Annotated[int, typer.Option(min=1, help="Upper bound on rounds.")] = 32,
    final_kb: Annotated[Path | None, typer.Option(help="Where to write the final knowledge base.")] = None,
    scope: Annotated[str | None, typer.Option(help="Scope pattern, inline or a file.")] = None,
    only: Annotated[
        list[str] | None,
        typer.Option(help="Only invoke these services (repeat or comma-separate)."),
    ] = None,
    concurrency: Annotated[int, typer.Option(min=1, help="Invocations in flight per round.")] = 4,
    in_process: Annotated[
        bool,
        typer.Option(help="Call the scenario handlers in process instead of the endpoints."),
    ] = False,
) -> None:
    """
    Run the engine to a fixpoint. Exits 1 when `--max-rounds` was reached first.
    """
    seed = read_kb(kb)
    if not registry.is_dir():
        raise fail(f"Registry {registry} is not a directory", EXIT_USAGE_ERROR)
    try:
        services = load_registry(registry)
    except (OSError, DescriptionError) as e:
        raise fail(f"Cannot load registry {registry}: {e}", EXIT_USAGE_ERROR) from e

    allowed = None
    if only:
        allowed = frozenset(name.strip() for value in only for name in value.split(",") if name.strip())
    config = EngineConfig(
        max_rounds=max_rounds,
        concurrency_width=concurrency,
        scope_filter=read_pattern(scope) if scope is not None else None,
        allowed_services=allowed,
    )

    if in_process:
        try:
            invoker = LocalInvoker(scenario_handler_map(services))
        except ValueError as e:
            raise fail(str(e), EXIT_USAGE_ERROR) from e
    else:
        invoker = http_invoker

    result = run_to_fixpoint(services, seed, config, invoker=invoker)

    report.write_text(result.to_json(), encoding="utf-8")
    if final_kb is not None:
        final_kb.write_text(serialize(seed.triples()), encoding="utf-8")

    typer.echo(
        f"{result.terminated_by} after {result.rounds_executed} rounds: "
        f"{len(result.records)} invocations, {result.final_kb_size} triples"
    )
    for record in result.records:
        typer.echo(
            f"  round {record.round}: {record.key.service_name} {record.outcome} "
            f"(+{record.triples_added})"
        )
    if result.terminated_by == TerminatedBy.MAX_ROUNDS:
        raise typer.Exit(EXIT_DOMAIN_ERROR)


@cli.command()
def match(
    kb: Annotated[Path, typer.Option(help="Knowledge base to match against.")],
    pattern: Annotated[str, typer.Option(help="Graph pattern, inline or a file.")],
) -> None:
    """
    Print the bindings of a pattern as a tab-separated table.
    """
    graph = read_kb(kb)
    parsed = read_pattern(pattern)
    names = sorted(parsed.vars)
    typer.echo("\t".join(f"?{name}" for name in names))
    for binding in match_pattern(parsed, graph):
        typer.echo("\t".join(binding[name].n3() for name in names))


@cli.command()
def classify(
    desc: Annotated[Path, typer.Option(help="Description file.")],
    probe: Annotated[bool, typer.Option(help="Also probe the live endpoint.")] = False,
) -> None:
    """
    Print the maturity report of a description.
    """
    try:
        description = load_description(desc, strict=False)
    except OSError as e:
        raise fail(f"Cannot read description {desc}: {e}", EXIT_USAGE_ERROR) from e
    except DescriptionError as e:
        raise fail(f"{desc}: {e}", EXIT_USAGE_ERROR) from e

    probe_result = probe_endpoint(description.endpoint.value) if probe else None
    typer.echo(classify_description(description, probe_result).to_json(), nl=False)


@cli.command("kb-dump")
def kb_dump(
    kb: Annotated[Path, typer.Option(help="Knowledge base file.")],
) -> None:
    """
    Print the canonical serialization of a knowledge base.
    """
    typer.echo(serialize(read_kb(kb).triples()), nl=False)


@cli.command("kb-diff")
def kb_diff(
    left: Annotated[Path, typer.Option(help="Knowledge base before.")],
    right: Annotated[Path, typer.Option(help="Knowledge base after.")],
    check: Annotated[bool, typer.Option(help="Exit 1 when the bases differ.")] = False,
) -> None:
    """
    Print triples only in RIGHT with `+` and triples only in LEFT with `-`.
    """
    added, removed = read_kb(left).diff(read_kb(right))
    for triple in removed:
        typer.echo(f"- {triple.n3()}")
    for triple in added:
        typer.echo(f"+ {triple.n3()}")
    if check and (added or removed):
        raise typer.Exit(EXIT_DOMAIN_ERROR)
# endregion


if __name__ == "__main__":
    cli()
