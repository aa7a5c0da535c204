"""
Data-driven execution engine.

There is no workflow: every round matches each registered precondition against
the knowledge base, picks the best of competing services, invokes the
survivors and merges what they return. Merges happen only between rounds,
so a round always works on a frozen snapshot and the result does not depend
on the order in which concurrent invocations finish.

Every (service, binding fingerprint) pair is invoked at most once per run.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import logfire

from app.db.database import KnowledgeBase, match_pattern, pattern_holds
from app.db.terms import Binding, Triple, canonical_order
from app.helpers.client import (InvocationRequest, InvocationResponse,
                                invoke)
from app.helpers.descriptions import (Registry, precondition_bindings,
                                      validate_description)
from app.helpers.exceptions import (DescriptionValidationError,
                                    TransportError)
from app.helpers.minting import binding_fingerprint, mint_output_iri
from app.models.Description import ServiceDescription
from app.models.EngineConfig import EngineConfig
from app.models.Outcome import Outcome
from app.models.Report import InvocationKey, InvocationRecord, RunReport
from app.models.TerminatedBy import TerminatedBy

__all__ = [
    "Candidate",
    "Invoker",
    "Scorer",
    "eligible_invocations",
    "http_invoker",
    "invocation_key",
    "metric_scorer",
    "mint_output_iri",
    "run_round",
    "run_to_fixpoint",
    "select_among_competitors",
]

Candidate = tuple[ServiceDescription, Binding]

Invoker = Callable[[ServiceDescription, InvocationRequest], InvocationResponse]
"""Sends a request to a service; raises `TransportError` on failure."""

Scorer = Callable[[ServiceDescription, str], float]
"""Ranks a service on a metric; higher wins."""


# region defaults
def http_invoker(description: ServiceDescription, request: InvocationRequest) -> InvocationResponse:
    """Invoke the service at its description's endpoint."""
    return invoke(description.endpoint, request)


def metric_scorer(description: ServiceDescription, metric: str) -> float:
    """Static evaluation score, 0 when the metric is missing."""
    return description.metric_score(metric)
# endregion


# region eligibility
def invocation_key(description: ServiceDescription, binding: Binding) -> InvocationKey:
    """Key of an invocation: the binding is restricted to the precondition variables."""
    return InvocationKey(
        service_name=description.name,
        fingerprint=binding_fingerprint(binding, description.precondition.vars),
    )


def eligible_invocations(
    registry: Registry,
    kb: KnowledgeBase,
    config: EngineConfig,
    history: set[InvocationKey],
) -> list[Candidate]:
    """
    Every (service, binding) pair the engine could invoke now.

    A pair qualifies when the service is allowed, the binding satisfies its
    precondition, the precondition joined with the scope filter still holds
    under the binding, and the pair has not been invoked yet.

    :return: Candidates ordered by service name, then fingerprint
    :rtype: list[Candidate]
    """
    candidates: list[tuple[str, str, Candidate]] = []
    for description in registry:
        if config.allowed_services is not None and description.name not in config.allowed_services:
            continue
        for binding in precondition_bindings(description, kb):
            if config.scope_filter is not None and not pattern_holds(
                description.mandatory_precondition + config.scope_filter, kb, binding
            ):
                continue
            key = invocation_key(description, binding)
            if key in history:
                continue
            candidates.append((description.name, key.fingerprint, (description, binding)))
    candidates.sort(key=lambda item: (item[0], item[1]))
    return [candidate for _, _, candidate in candidates]


def select_among_competitors(
    candidates: list[Candidate],
    metric: str,
    scorer: Scorer = metric_scorer,
) -> list[Candidate]:
    """
    Keep the best service of every competitor group.

    Candidates compete when they share the algorithm class and bind the same
    values to the precondition variables all services of that class have in
    common. Within a group the highest score on `metric` wins and ties go to
    the lexicographically smaller name. When the services of a class share no
    variable, nothing competes.

    :return: The surviving candidates in input order
    :rtype: list[Candidate]
    """
    shared_vars: dict[str, frozenset[str]] = {}
    for description, _ in candidates:
        variables = description.precondition.vars
        algorithm_class = description.algorithm_class.value
        shared_vars[algorithm_class] = shared_vars.get(algorithm_class, variables) & variables

    groups: dict[tuple[str, ...], list[int]] = {}
    for index, (description, binding) in enumerate(candidates):
        algorithm_class = description.algorithm_class.value
        shared = shared_vars[algorithm_class]
        if shared:
            group = (algorithm_class, binding_fingerprint(binding, shared))
        else:
            group = (algorithm_class, description.name, binding_fingerprint(binding))
        groups.setdefault(group, []).append(index)

    survivors: set[int] = set()
    for members in groups.values():
        winner = min(
            (candidates[i][0] for i in members),
            key=lambda description: (-scorer(description, metric), description.name),
        ).name
        survivors.update(i for i in members if candidates[i][0].name == winner)
    return [candidate for index, candidate in enumerate(candidates) if index in survivors]
# endregion


# region execution
def _invoke_one(
    description: ServiceDescription,
    binding: Binding,
    round_number: int,
    invoker: Invoker,
) -> tuple[InvocationRecord, list[Triple]]:
    key = invocation_key(description, binding)
    request = InvocationRequest(
        graph=tuple(description.precondition.instantiate(binding)),
        binding=binding,
    )
    start = time.perf_counter()
    outcome: Outcome
    detail: str | None = None
    triples: list[Triple] = []
    try:
        response = invoker(description, request)
    except TransportError as e:
        outcome, detail = Outcome.HTTP_ERROR, str(e)
    else:
        produced = KnowledgeBase([*response.graph, *request.graph])
        if match_pattern(description.postcondition, produced, binding):
            outcome = Outcome.RULE_SHORT_CIRCUIT if response.short_circuited else Outcome.OK
            triples = list(response.graph)
        else:
            outcome = Outcome.POSTCONDITION_VIOLATION
            detail = "Response graph does not satisfy the postcondition"
    duration_ms = (time.perf_counter() - start) * 1000

    log = logfire.info if outcome.contributes else logfire.warn
    log(
        "Invoked {service}: {outcome}",
        service=description.name,
        fingerprint=key.fingerprint,
        outcome=outcome.value,
        duration_ms=duration_ms,
        detail=detail,
    )
    record = InvocationRecord(
        key=key, round=round_number, outcome=outcome, duration_ms=duration_ms, detail=detail
    )
    return record, triples


def run_round(
    registry: Registry,
    kb: KnowledgeBase,
    config: EngineConfig,
    history: set[InvocationKey],
    *,
    round_number: int = 1,
    invoker: Invoker = http_invoker,
    scorer: Scorer = metric_scorer,
) -> tuple[list[InvocationRecord], list[Triple]]:
    """
    One round: match, select, invoke and stage.

    The knowledge base is not modified; the caller merges the staged triples.
    Both the invoked services and the competitors they beat are added to
    `history`, so a beaten service does not run later for the same binding.

    :return: The round's records in invocation order and the triples to merge,
        canonically sorted and absent from `kb`
    :rtype: tuple[list[InvocationRecord], list[Triple]]
    """
    snapshot = kb.snapshot()
    eligible = eligible_invocations(registry, snapshot, config, history)
    if not eligible:
        return [], []

    selected = select_among_competitors(eligible, config.selection_metric, scorer)
    for description, binding in eligible:
        history.add(invocation_key(description, binding))

    with ThreadPoolExecutor(max_workers=config.concurrency_width) as executor:
        results = list(executor.map(
            lambda candidate: _invoke_one(candidate[0], candidate[1], round_number, invoker),
            selected,
        ))

    records: list[InvocationRecord] = []
    staged: set[Triple] = set()
    for record, triples in results:
        fresh = {triple for triple in triples if triple not in snapshot and triple not in staged}
        staged.update(fresh)
        records.append(record.model_copy(update={"triples_added": len(fresh)}))
    return records, canonical_order(staged)


def run_to_fixpoint(
    registry: Registry,
    kb: KnowledgeBase,
    config: EngineConfig | None = None,
    *,
    invoker: Invoker = http_invoker,
    scorer: Scorer = metric_scorer,
) -> RunReport:
    """
    Run rounds until nothing is invoked and nothing is added, or `max_rounds`.

    The knowledge base is enriched in place.

    :param registry: Services to consider
    :type registry: Registry
    :param kb: Knowledge base to match against and enrich
    :type kb: KnowledgeBase
    :param config: Run configuration, defaults to `EngineConfig()`
    :type config: EngineConfig | None
    :param invoker: How services are called, HTTP by default
    :type invoker: Invoker
    :param scorer: How competing services are ranked
    :type scorer: Scorer
    :return: Every invocation in order and why the run stopped
    :rtype: RunReport
    :raises DescriptionValidationError: If a registered description is invalid
    """
    config = config or EngineConfig()
    for description in registry:
        violations = validate_description(description)
        if violations:
            raise DescriptionValidationError(description.name, violations)

    history: set[InvocationKey] = set()
    records: list[InvocationRecord] = []
    kb_sizes = [len(kb)]
    terminated_by = TerminatedBy.MAX_ROUNDS
    rounds_executed = 0

    with logfire.span("engine run", services=len(registry), kb_size=len(kb)):
        for round_number in range(1, config.max_rounds + 1):
            with logfire.span("engine round {round}", round=round_number):
                round_records, triples = run_round(
                    registry, kb, config, history,
                    round_number=round_number, invoker=invoker, scorer=scorer,
                )
                added = kb.insert(triples)
            records.extend(round_records)
            kb_sizes.append(len(kb))
            rounds_executed = round_number
            if not round_records and added == 0:
                terminated_by = TerminatedBy.FIXPOINT
                break

    logfire.info(
        "Engine stopped by {terminated_by} after {rounds} rounds",
        terminated_by=terminated_by.value,
        rounds=rounds_executed,
        invocations=len(records),
        kb_size=len(kb),
    )
    return RunReport(
        rounds_executed=rounds_executed,
        records=records,
        final_kb_size=len(kb),
        terminated_by=terminated_by,
        kb_sizes=kb_sizes,
    )
# endregion
