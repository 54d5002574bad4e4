"""Round-based barter double auction.

Every round runs three synchronous phases over the unmatched pool:

1. allure: each agent solicits acceptable partners that would also accept it;
2. accept: each allured agent accepts at most one allurer;
3. confirm: each allurer confirms at most one of the accepts it received.

Confirmed pairs leave the pool. Failed allures and defected accepts raise
an agent's frustration count, lowering its stand-alone level beta * gamma**m.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .model import (
    Agent,
    FrustrationState,
    ValidationError,
    acceptable,
    check_population,
    reservation,
    satisfaction,
)
from .strategies import (
    GreedyTopK,
    StrategyKind,
    select_accept,
    select_allure_targets,
    select_confirm,
)

logger = logging.getLogger(__name__)

ALL_MATCHED = "all_matched"
QUIESCENT = "quiescent"
MAX_ROUNDS = "max_rounds"

Pair = tuple[int, int]


class EngineError(RuntimeError):
    """Engine used against its contract (e.g. stepping a finished run)."""


def pair(a: int, b: int) -> Pair:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class EngineConfig:
    seed: int = 0
    max_rounds: int = 1000
    default_strategy: StrategyKind = field(default_factory=GreedyTopK)

    def __post_init__(self):
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if isinstance(self.max_rounds, bool) or not isinstance(self.max_rounds, int) or self.max_rounds < 1:
            raise ValidationError(f"max_rounds must be a positive integer, got {self.max_rounds!r}")


@dataclass
class RoundLog:
    round_index: int
    allures: list[tuple[int, int]] = field(default_factory=list)
    accepts: list[tuple[int, int]] = field(default_factory=list)
    confirms: list[tuple[int, int]] = field(default_factory=list)
    defects: list[tuple[int, int]] = field(default_factory=list)
    matches: list[Pair] = field(default_factory=list)
    frustration: dict[int, int] = field(default_factory=dict)


@dataclass
class EngineState:
    agents: dict[int, Agent]
    config: EngineConfig
    strategies: dict[int, StrategyKind]
    rngs: dict[int, np.random.Generator]
    frustration: dict[int, FrustrationState]
    pool: list[int]
    partner: dict[int, int] = field(default_factory=dict)
    # reservation level each matched agent had when its match was confirmed
    reservation_at_match: dict[int, float] = field(default_factory=dict)
    round_index: int = 0
    logs: list[RoundLog] = field(default_factory=list)
    terminated: str | None = None

    @property
    def matching(self) -> list[Pair]:
        return sorted({pair(a, b) for a, b in self.partner.items()})


@dataclass
class Outcome:
    matching: list[Pair]
    satisfaction: dict[int, float]
    frustration: dict[int, int]
    partner: dict[int, int | None]
    rounds: list[RoundLog]
    rounds_executed: int
    termination: str
    reservation_at_match: dict[int, float] = field(default_factory=dict)

    @property
    def total_welfare(self) -> float:
        return math.fsum(self.satisfaction.values())

    @property
    def unmatched(self) -> list[int]:
        return [i for i, p in self.partner.items() if p is None]


def agent_rng(seed: int, agent_id: int) -> np.random.Generator:
    """Independent per-agent stream derived from the run seed and the agent id."""
    return np.random.default_rng(np.random.SeedSequence([seed, agent_id & (2**64 - 1)]))


def init_state(
    population: Sequence[Agent],
    config: EngineConfig | None = None,
    strategies: Mapping[int, StrategyKind] | None = None,
) -> EngineState:
    config = config or EngineConfig()
    check_population(population)
    agents = {a.id: a for a in population}
    strategies = dict(strategies or {})
    unknown = set(strategies) - set(agents)
    if unknown:
        raise ValidationError(f"strategy given for unknown agents {sorted(unknown)}")
    ids = sorted(agents)
    state = EngineState(
        agents=agents,
        config=config,
        strategies={i: strategies.get(i, config.default_strategy) for i in ids},
        rngs={i: agent_rng(config.seed, i) for i in ids},
        frustration={i: FrustrationState(i) for i in ids},
        pool=ids,
    )
    if not ids:
        state.terminated = QUIESCENT
    return state


def _resolve(confirms: dict[int, int], strength: dict[Pair, float]) -> list[Pair]:
    # An agent can be confirmed by the allurer it accepted while itself
    # confirming someone else. Every agent has at most one outgoing and one
    # incoming confirm, so candidate pairs form paths and cycles; a greedy
    # pass in a fixed order picks a maximal set of disjoint pairs.
    candidates = sorted({pair(i, j) for i, j in confirms.items()}, key=lambda p: (-strength[p], p))
    taken: set[int] = set()
    matched = []
    for a, b in candidates:
        if a in taken or b in taken:
            continue
        taken.update((a, b))
        matched.append((a, b))
    return sorted(matched)


def run_round(state: EngineState) -> tuple[EngineState, RoundLog]:
    """Advance one round in place; returns the (same) state and the round's log."""
    if state.terminated is not None:
        raise EngineError(f"run already terminated ({state.terminated})")

    agents, frus = state.agents, state.frustration
    pool = list(state.pool)
    log = RoundLog(round_index=state.round_index)

    allures: dict[int, list[int]] = {}
    for i in pool:
        me = agents[i]
        # Alluring someone who will ignore you only costs gamma, so the pool
        # offered to the strategy is restricted to agents that would accept.
        receptive = [
            agents[j] for j in pool if j != i and acceptable(agents[j], me.offer, frus[j])
        ]
        targets = select_allure_targets(me, receptive, frus[i], state.strategies[i], state.rngs[i])
        if targets:
            allures[i] = targets
            log.allures.extend((i, t) for t in targets)

    if not allures:
        state.round_index += 1
        state.terminated = QUIESCENT
        log.frustration = {i: 0 for i in pool}
        state.logs.append(log)
        return state, log

    allured_by: dict[int, list[int]] = {}
    for i, targets in allures.items():
        for t in targets:
            allured_by.setdefault(t, []).append(i)

    accepted: dict[int, int] = {}
    for j in pool:
        suitors = allured_by.get(j)
        if not suitors:
            continue
        choice = select_accept(
            agents[j], [agents[i] for i in sorted(suitors)], frus[j], state.rngs[j], state.strategies[j]
        )
        if choice is not None:
            accepted[j] = choice
            log.accepts.append((j, choice))

    accepts_received: dict[int, list[int]] = {}
    for j, i in accepted.items():
        accepts_received.setdefault(i, []).append(j)

    confirms: dict[int, int] = {}
    for i in pool:
        got = accepts_received.get(i)
        if not got:
            continue
        choice = select_confirm(
            agents[i], [agents[j] for j in sorted(got)], frus[i], state.rngs[i], state.strategies[i]
        )
        if choice is not None:
            confirms[i] = choice
            log.confirms.append((i, choice))
        log.defects.extend((i, j) for j in sorted(got) if j != choice)

    strength = {}
    for i, j in confirms.items():
        strength[pair(i, j)] = satisfaction(agents[i], agents[j].offer) + satisfaction(
            agents[j], agents[i].offer
        )
    matches = _resolve(confirms, strength)
    partner_now = {}
    for a, b in matches:
        partner_now[a], partner_now[b] = b, a
    for i, j in confirms.items():
        if partner_now.get(i) != j:
            # the confirmed agent went elsewhere (or its confirmer did)
            quitter = j if j in partner_now else i
            log.defects.append((quitter, i if quitter == j else j))

    for a, b in matches:
        state.reservation_at_match[a] = reservation(agents[a], frus[a])
        state.reservation_at_match[b] = reservation(agents[b], frus[b])

    for i in pool:
        mine = partner_now.get(i)
        failed = sum(1 for t in allures.get(i, ()) if t != mine)
        if i in accepted and accepted[i] != mine:
            failed += 1
        frus[i].fail(failed)
        log.frustration[i] = failed

    state.partner.update(partner_now)
    log.matches = matches
    state.pool = [i for i in pool if i not in partner_now]
    state.round_index += 1
    state.logs.append(log)
    logger.debug("round %d: %d allures, %d matches", log.round_index, len(log.allures), len(matches))

    if not state.pool:
        state.terminated = ALL_MATCHED
    elif state.round_index >= state.config.max_rounds:
        state.terminated = MAX_ROUNDS
    return state, log


def outcome_of(state: EngineState) -> Outcome:
    sat: dict[int, float] = {}
    partner: dict[int, int | None] = {}
    for i in sorted(state.agents):
        me = state.agents[i]
        p = state.partner.get(i)
        partner[i] = p
        if p is None:
            sat[i] = reservation(me, state.frustration[i])
        else:
            sat[i] = satisfaction(me, state.agents[p].offer)
    return Outcome(
        matching=state.matching,
        satisfaction=sat,
        frustration={i: state.frustration[i].m for i in sorted(state.agents)},
        partner=partner,
        rounds=list(state.logs),
        rounds_executed=state.round_index,
        termination=state.terminated or MAX_ROUNDS,
        reservation_at_match=dict(sorted(state.reservation_at_match.items())),
    )


def run_to_completion(
    population: Sequence[Agent],
    config: EngineConfig | None = None,
    strategies: Mapping[int, StrategyKind] | None = None,
) -> Outcome:
    state = init_state(population, config, strategies)
    while state.terminated is None:
        run_round(state)
    return outcome_of(state)


def final_satisfaction(outcome: Outcome, agent_id: int) -> float:
    try:
        return outcome.satisfaction[agent_id]
    except KeyError:
        raise LookupError(f"agent {agent_id} is not part of this outcome") from None
