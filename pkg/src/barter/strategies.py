"""Decision rules for the allure, accept and confirm phases."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

from .model import Agent, FrustrationState, ValidationError, acceptable, satisfaction


@dataclass(frozen=True)
class GreedyTopK:
    """Allure the k best acceptable offers; ``k=None`` means no limit."""

    k: int | None = None

    def __post_init__(self):
        if self.k is not None and (isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1):
            raise ValidationError(f"k must be a positive integer, got {self.k!r}")

    @property
    def name(self) -> str:
        return "greedy_top_k"


@dataclass(frozen=True)
class RandomAmongBest:
    """Pick uniformly among the candidates tied for the best offer."""

    @property
    def name(self) -> str:
        return "random_among_best"


StrategyKind = Union[GreedyTopK, RandomAmongBest]


def strategy_from_name(name: str, k: int | None = None) -> StrategyKind:
    if name == "greedy_top_k":
        return GreedyTopK(k)
    if name == "random_among_best":
        if k is not None:
            raise ValidationError("random_among_best takes no k")
        return RandomAmongBest()
    raise ValidationError(f"unknown strategy {name!r}")


class RankedCandidate(NamedTuple):
    target_id: int
    satisfaction: float


# Satisfactions closer than this count as tied; symmetric constructions built
# with cos/sin differ by a few ulps where the geometry says they are equal.
TIE_TOLERANCE = 1e-12


def rank_candidates(
    agent: Agent, candidates: Sequence[Agent], frustration: FrustrationState
) -> list[RankedCandidate]:
    """Acceptable candidates by descending satisfaction, ties by ascending id."""
    ranked = [
        RankedCandidate(other.id, satisfaction(agent, other.offer))
        for other in candidates
        if acceptable(agent, other.offer, frustration)
    ]
    ranked.sort(key=lambda c: (-c.satisfaction, c.target_id))
    out: list[RankedCandidate] = []
    for group in _tie_groups(ranked):
        out.extend(sorted(group, key=lambda c: c.target_id))
    return out


def _tie_groups(ranked: list[RankedCandidate]) -> list[list[RankedCandidate]]:
    groups: list[list[RankedCandidate]] = []
    for c in ranked:
        if groups and groups[-1][0].satisfaction - c.satisfaction <= TIE_TOLERANCE:
            groups[-1].append(c)
        else:
            groups.append([c])
    return groups


def _pick_best(ranked: list[RankedCandidate], kind: StrategyKind | None, rng) -> int | None:
    if not ranked:
        return None
    if isinstance(kind, RandomAmongBest):
        top = _tie_groups(ranked)[0]
        if len(top) > 1:
            return top[int(rng.integers(len(top)))].target_id
    return ranked[0].target_id


def select_allure_targets(
    agent: Agent,
    pool: Sequence[Agent],
    frustration: FrustrationState,
    kind: StrategyKind,
    rng: np.random.Generator | None = None,
) -> list[int]:
    ranked = rank_candidates(agent, [a for a in pool if a.id != agent.id], frustration)
    if isinstance(kind, GreedyTopK):
        chosen = ranked if kind.k is None else ranked[: kind.k]
        return [c.target_id for c in chosen]
    best = _pick_best(ranked, kind, rng)
    return [] if best is None else [best]


def select_accept(
    agent: Agent,
    allurers: Sequence[Agent],
    frustration: FrustrationState,
    rng: np.random.Generator | None = None,
    kind: StrategyKind | None = None,
) -> int | None:
    """Accept the allurer with the best acceptable offer, or nobody."""
    return _pick_best(rank_candidates(agent, allurers, frustration), kind, rng)


def select_confirm(
    agent: Agent,
    accepts: Sequence[Agent],
    frustration: FrustrationState,
    rng: np.random.Generator | None = None,
    kind: StrategyKind | None = None,
) -> int | None:
    """Confirm the best acceptable accept; the others are defected."""
    return _pick_best(rank_candidates(agent, accepts, frustration), kind, rng)
