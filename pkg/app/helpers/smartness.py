"""
Parsing and evaluation of smart rules.

Rules are tried in list order and the first one that fires answers the
request. A rule whose guard compares incompatible datatypes is skipped, not
treated as an error.
"""

import json
import re
from typing import Any, Mapping

import logfire

from app.db.database import KnowledgeBase, match_pattern
from app.db.syntax import parse_pattern
from app.db.terms import Binding, Literal, Triple
from app.helpers.exceptions import (GuardTypeError, KbSyntaxError,
                                    RuleSyntaxError)
from app.helpers.minting import binding_fingerprint, mint_output_iri
from app.models.Comparator import Comparator
from app.models.Datatype import Datatype
from app.models.Rule import Guard, RuleOutcome, SmartRule

GUARD_PATTERN = re.compile(
    r"^\s*\?(?P<left>[A-Za-z_][A-Za-z0-9_]*)\s*(?P<op><=|>=|==|!=|<|>)\s*(?P<right>.+?)\s*$"
)
NUMBER_PATTERN = re.compile(r"^[+-]?(\d+\.\d*|\.\d+|\d+)$")

RULE_KEYS = frozenset({"name", "condition", "guards", "emit"})


# region parsing
def parse_guard(text: str) -> Guard:
    """
    Parse a guard such as `?v >= 20`.

    Numbers without a dot are integers, with a dot decimals; `true`/`false`
    are booleans and double-quoted text is a string.

    :raises RuleSyntaxError: If the guard is malformed
    """
    match = GUARD_PATTERN.match(text)
    if not match:
        raise RuleSyntaxError(f"Malformed guard {text!r}")

    right_text = match["right"]
    if NUMBER_PATTERN.match(right_text):
        right = Literal(
            right_text, Datatype.DECIMAL if "." in right_text else Datatype.INTEGER
        )
    elif right_text in ("true", "false"):
        right = Literal(right_text, Datatype.BOOLEAN)
    elif len(right_text) >= 2 and right_text[0] == right_text[-1] == "\"":
        right = Literal(json.loads(right_text), Datatype.STRING)
    else:
        raise RuleSyntaxError(f"Malformed guard operand {right_text!r} in {text!r}")

    return Guard(match["left"], Comparator.from_symbol(match["op"]), right)


def parse_rule(block: Mapping[str, Any] | str, prefixes: Mapping[str, str] | None = None) -> SmartRule:
    """
    Parse a rule block as written under the `rules` key of a description.

    :param block: `{"name", "condition", "guards", "emit"}` as a mapping or JSON text
    :type block: Mapping[str, Any] | str
    :param prefixes: Prefixes used by the condition and emit patterns
    :type prefixes: Mapping[str, str] | None
    :return: A structurally valid rule
    :rtype: SmartRule
    :raises RuleSyntaxError: On malformed blocks, patterns or guards, a guard
        over a variable the condition does not bind, or an empty emit
    """
    if isinstance(block, str):
        try:
            block = json.loads(block)
        except json.JSONDecodeError as e:
            raise RuleSyntaxError(f"Rule block is not valid JSON: {e}") from e
    if not isinstance(block, Mapping):
        raise RuleSyntaxError("Rule block must be a JSON object")

    unknown = set(block) - RULE_KEYS
    if unknown:
        raise RuleSyntaxError(f"Unknown rule keys: {', '.join(sorted(unknown))}")
    for key in ("name", "condition", "emit"):
        if not isinstance(block.get(key), str):
            raise RuleSyntaxError(f"Rule key {key!r} is required and must be a string")
    guards = block.get("guards", [])
    if not isinstance(guards, list) or not all(isinstance(g, str) for g in guards):
        raise RuleSyntaxError("Rule key 'guards' must be a list of strings")

    name = block["name"]
    try:
        condition = parse_pattern(block["condition"], prefixes)
        emit = parse_pattern(block["emit"], prefixes)
    except KbSyntaxError as e:
        raise RuleSyntaxError(f"Rule {name!r}: {e}") from e

    try:
        return SmartRule(
            name=name,
            condition=condition,
            guards=tuple(parse_guard(guard) for guard in guards),
            emit=emit.patterns,
        )
    except RuleSyntaxError:
        raise
    except ValueError as e:
        raise RuleSyntaxError(str(e)) from e
# endregion


# region evaluation
def _instantiate(rule: SmartRule, binding: Binding, service_name: str) -> list[Triple] | None:
    fingerprint = binding_fingerprint(binding)
    extended = dict(binding)
    for name in sorted(rule.fresh_variables):
        extended[name] = mint_output_iri(service_name, fingerprint, name)
    triples = rule.emit_pattern.instantiate(extended)
    if len(triples) != len(rule.emit):
        return None
    return triples


def evaluate_rules(
    rules: list[SmartRule] | tuple[SmartRule, ...],
    request_graph: list[Triple],
    binding: Binding | None = None,
    *,
    service_name: str = "smartness",
) -> RuleOutcome:
    """
    Try the rules in order and return the first one that fires.

    A rule fires when its condition matches the request graph (seeded with the
    provided binding where variables coincide) and every guard holds for that
    match. Fresh emit variables are minted under `service_name`.

    :param rules: Rules in priority order
    :param request_graph: Triples of the incoming request
    :param binding: Roles already assigned to request resources
    :param service_name: Name used when minting fresh outputs
    :return: The outcome, `fired=False` with nothing emitted when no rule fires
    :rtype: RuleOutcome
    """
    graph = KnowledgeBase(request_graph)
    for rule in rules:
        try:
            for match in match_pattern(rule.condition, graph, binding):
                if all(guard.holds(match[guard.left]) for guard in rule.guards):
                    emitted = _instantiate(rule, match, service_name)
                    if emitted is None:
                        logfire.warn(
                            "Rule {rule} matched but its template put a literal in subject position",
                            rule=rule.name,
                        )
                        break
                    logfire.info("Rule {rule} fired", rule=rule.name, service=service_name)
                    return RuleOutcome(fired=True, emitted=tuple(emitted), rule_name=rule.name)
        except GuardTypeError as e:
            logfire.info("Rule {rule} skipped: {reason}", rule=rule.name, reason=str(e))
            continue
    return RuleOutcome(fired=False)
# endregion
