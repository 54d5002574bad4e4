"""Scenario files and result documents (JSON), plus the per-agent CSV table.

Floats are written with ``repr`` so every value reads back bit-for-bit.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any

from .engine import EngineConfig, Outcome, RoundLog
from .model import Agent, DimensionError, ValidationError, as_percent
from .oracle import WelfareReport
from .scenarios import ScenarioSpec
from .strategies import GreedyTopK, StrategyKind, strategy_from_name

SCENARIO_SCHEMA = "barter-scenario/1"
RESULT_SCHEMA = "barter-result/1"

_TOP_KEYS = {"schema", "name", "dimension", "engine", "agents", "expected", "params"}
_ENGINE_KEYS = {"seed", "max_rounds", "strategy"}
_STRATEGY_KEYS = {"name", "k"}
_AGENT_KEYS = {"id", "label", "demand", "offer", "alpha", "beta", "gamma"}


class ScenarioFormatError(ValidationError):
    """Malformed scenario file; ``where`` names the line or field."""


def _reject_unknown(obj: dict, allowed: set, where: str) -> None:
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ScenarioFormatError(f"unknown field(s) {extra}", where)


def strategy_to_dict(kind: StrategyKind) -> dict:
    if isinstance(kind, GreedyTopK):
        return {"name": kind.name, "k": kind.k}
    return {"name": kind.name}


def strategy_from_dict(obj: Any, where: str = "engine.strategy") -> StrategyKind:
    if not isinstance(obj, dict):
        raise ScenarioFormatError("must be an object", where)
    _reject_unknown(obj, _STRATEGY_KEYS, where)
    try:
        return strategy_from_name(obj.get("name", "greedy_top_k"), obj.get("k"))
    except ValidationError as exc:
        raise ScenarioFormatError(str(exc), where) from None


def config_to_dict(config: EngineConfig) -> dict:
    return {
        "seed": config.seed,
        "max_rounds": config.max_rounds,
        "strategy": strategy_to_dict(config.default_strategy),
    }


def config_from_dict(obj: Any) -> EngineConfig:
    if not isinstance(obj, dict):
        raise ScenarioFormatError("must be an object", "engine")
    _reject_unknown(obj, _ENGINE_KEYS, "engine")
    kwargs: dict = {}
    if "seed" in obj:
        kwargs["seed"] = obj["seed"]
    if "max_rounds" in obj:
        kwargs["max_rounds"] = obj["max_rounds"]
    if "strategy" in obj:
        kwargs["default_strategy"] = strategy_from_dict(obj["strategy"])
    try:
        return EngineConfig(**kwargs)
    except ValidationError as exc:
        raise ScenarioFormatError(str(exc), "engine") from None


def scenario_to_dict(spec: ScenarioSpec, config: EngineConfig | None = None) -> dict:
    doc: dict = {
        "schema": SCENARIO_SCHEMA,
        "name": spec.name,
        "dimension": spec.dimension if spec.agents else 1,
        "engine": config_to_dict(config or EngineConfig()),
        "agents": [],
    }
    for a in spec.agents:
        rec: dict = {"id": a.id}
        if a.id in spec.labels:
            rec["label"] = spec.labels[a.id]
        rec.update(
            demand=list(a.demand), offer=list(a.offer), alpha=a.alpha, beta=a.beta, gamma=a.gamma
        )
        doc["agents"].append(rec)
    if spec.expected:
        doc["expected"] = spec.expected
    if spec.params:
        doc["params"] = spec.params
    return doc


def dumps_scenario(spec: ScenarioSpec, config: EngineConfig | None = None) -> str:
    return json.dumps(scenario_to_dict(spec, config), indent=2) + "\n"


def parse_scenario(data: bytes | str) -> tuple[ScenarioSpec, EngineConfig]:
    """Parse and validate a scenario file.

    Every error is a :class:`ScenarioFormatError` (or subclass of
    ValidationError) whose ``where`` points at the line or field.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ScenarioFormatError(f"not UTF-8 ({exc.reason})", f"byte {exc.start}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise ScenarioFormatError("top level must be an object", "line 1")
    _reject_unknown(doc, _TOP_KEYS, "top level")
    if doc.get("schema", SCENARIO_SCHEMA) != SCENARIO_SCHEMA:
        raise ScenarioFormatError(f"unsupported schema {doc['schema']!r}", "schema")

    dim = doc.get("dimension")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ScenarioFormatError("dimension must be a positive integer", "dimension")
    config = config_from_dict(doc.get("engine", {}))

    records = doc.get("agents")
    if not isinstance(records, list):
        raise ScenarioFormatError("agents must be a list", "agents")
    agents: list[Agent] = []
    labels: dict[int, str] = {}
    seen: set = set()
    for k, rec in enumerate(records):
        where = f"agents[{k}]"
        if not isinstance(rec, dict):
            raise ScenarioFormatError("must be an object", where)
        _reject_unknown(rec, _AGENT_KEYS, where)
        missing = sorted({"id", "demand", "offer", "alpha", "beta", "gamma"} - set(rec))
        if missing:
            raise ScenarioFormatError(f"missing field(s) {missing}", where)
        if rec["id"] in seen:
            raise ScenarioFormatError(f"duplicate id {rec['id']}", where)
        seen.add(rec["id"])
        where = f"{where} (agent {rec['id']})"
        for key in ("demand", "offer"):
            if not isinstance(rec[key], list):
                raise ScenarioFormatError(f"{key} must be a list of numbers", where)
            if len(rec[key]) != dim:
                raise DimensionError(
                    f"{key} has dimension {len(rec[key])}, file declares {dim}", where
                )
        try:
            agent = Agent(rec["id"], rec["demand"], rec["offer"], rec["alpha"], rec["beta"], rec["gamma"])
        except ValidationError as exc:
            raise type(exc)(str(exc), where) from None
        agents.append(agent)
        if "label" in rec:
            labels[agent.id] = str(rec["label"])

    expected = doc.get("expected", {})
    params = doc.get("params", {})
    for key, value in (("expected", expected), ("params", params)):
        if not isinstance(value, dict):
            raise ScenarioFormatError("must be an object", key)
    spec = ScenarioSpec(
        name=str(doc.get("name", "scenario")), agents=agents, expected=expected, params=params, labels=labels
    )
    return spec, config


def load_scenario(path) -> tuple[ScenarioSpec, EngineConfig]:
    with open(path, "rb") as fh:
        return parse_scenario(fh.read())


# -- results ---------------------------------------------------------------


def _pairs(items) -> list[list[int]]:
    return [list(p) for p in items]


def round_to_dict(log: RoundLog) -> dict:
    return {
        "round": log.round_index,
        "allures": _pairs(log.allures),
        "accepts": _pairs(log.accepts),
        "confirms": _pairs(log.confirms),
        "defects": _pairs(log.defects),
        "matches": _pairs(log.matches),
        "frustration": [[i, n] for i, n in sorted(log.frustration.items())],
    }


def round_from_dict(obj: dict) -> RoundLog:
    tup = lambda xs: [tuple(x) for x in xs]  # noqa: E731
    return RoundLog(
        round_index=obj["round"],
        allures=tup(obj["allures"]),
        accepts=tup(obj["accepts"]),
        confirms=tup(obj["confirms"]),
        defects=tup(obj["defects"]),
        matches=tup(obj["matches"]),
        frustration={i: n for i, n in obj["frustration"]},
    )


def outcome_to_dict(outcome: Outcome, labels: dict[int, str] | None = None) -> dict:
    labels = labels or {}
    agents = []
    for i, s in outcome.satisfaction.items():
        rec = {"id": i}
        if i in labels:
            rec["label"] = labels[i]
        rec.update(partner=outcome.partner[i], satisfaction=s, m=outcome.frustration[i])
        if i in outcome.reservation_at_match:
            rec["reservation_at_match"] = outcome.reservation_at_match[i]
        agents.append(rec)
    return {
        "termination": outcome.termination,
        "rounds_executed": outcome.rounds_executed,
        "matching": _pairs(outcome.matching),
        "total_welfare": outcome.total_welfare,
        "agents": agents,
        "rounds": [round_to_dict(r) for r in outcome.rounds],
    }


def outcome_from_dict(obj: dict) -> Outcome:
    return Outcome(
        matching=[tuple(p) for p in obj["matching"]],
        satisfaction={a["id"]: a["satisfaction"] for a in obj["agents"]},
        frustration={a["id"]: a["m"] for a in obj["agents"]},
        partner={a["id"]: a["partner"] for a in obj["agents"]},
        rounds=[round_from_dict(r) for r in obj["rounds"]],
        rounds_executed=obj["rounds_executed"],
        termination=obj["termination"],
        reservation_at_match={
            a["id"]: a["reservation_at_match"] for a in obj["agents"] if "reservation_at_match" in a
        },
    )


def welfare_to_dict(report: WelfareReport) -> dict:
    return {
        "objective": report.objective,
        "matching": _pairs(report.matching),
        "total": report.total,
        "minimum": report.minimum,
        "satisfaction": [[i, s] for i, s in report.satisfaction.items()],
    }


def welfare_from_dict(obj: dict) -> WelfareReport:
    return WelfareReport(
        matching=tuple(tuple(p) for p in obj["matching"]),
        total=obj["total"],
        minimum=obj["minimum"],
        satisfaction={i: s for i, s in obj["satisfaction"]},
        objective=obj["objective"],
    )


def result_document(
    spec: ScenarioSpec, config: EngineConfig, outcome: Outcome, oracle: dict | None = None
) -> dict:
    doc = {
        "schema": RESULT_SCHEMA,
        "scenario": spec.name,
        "config": config_to_dict(config),
        "outcome": outcome_to_dict(outcome, spec.labels),
    }
    if oracle is not None:
        doc["oracle"] = oracle
    return doc


def dumps_result(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def outcome_csv(outcome: Outcome, labels: dict[int, str] | None = None) -> str:
    labels = labels or {}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "label", "partner", "satisfaction", "satisfaction_pct", "m"])
    for i, s in outcome.satisfaction.items():
        p = outcome.partner[i]
        w.writerow([i, labels.get(i, ""), "" if p is None else p, repr(s), f"{as_percent(s):.4f}", outcome.frustration[i]])
    return buf.getvalue()
