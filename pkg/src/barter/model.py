"""Agents, points and the closed-form satisfaction functions.

Satisfaction is stored on [0, 1]; percentages are a presentation concern.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

Point = tuple[float, ...]


class ValidationError(ValueError):
    """Raised for inputs that violate a model invariant."""

    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


class DimensionError(ValidationError):
    pass


def as_point(coords: Iterable[float], where: str | None = None) -> Point:
    try:
        point = tuple(float(c) for c in coords)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"coordinates must be real numbers ({exc})", where) from None
    if not point:
        raise DimensionError("a point needs at least one coordinate", where)
    if not all(math.isfinite(c) for c in point):
        raise ValidationError("coordinates must be finite", where)
    return point


@dataclass(frozen=True)
class Agent:
    """A market participant: what it wants (demand) and what it gives (offer).

    alpha is the sensitivity of satisfaction to mismatch, beta the
    satisfaction of staying alone and gamma the multiplicative penalty per
    failed allure.
    """

    id: int
    demand: Point
    offer: Point
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        where = f"agent {self.id}"
        if isinstance(self.id, bool) or not isinstance(self.id, int):
            raise ValidationError("id must be an integer", where)
        object.__setattr__(self, "demand", as_point(self.demand, f"{where} demand"))
        object.__setattr__(self, "offer", as_point(self.offer, f"{where} offer"))
        if len(self.demand) != len(self.offer):
            raise DimensionError(
                f"demand has dimension {len(self.demand)} but offer has {len(self.offer)}", where
            )
        for name in ("alpha", "beta", "gamma"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(f"{name} must be a real number", where)
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite", where)
            object.__setattr__(self, name, float(value))
        if not self.alpha > 0:
            raise ValidationError(f"alpha must be > 0, got {self.alpha}", where)
        if not 0 < self.beta < 1:
            raise ValidationError(f"beta must lie in (0, 1), got {self.beta}", where)
        if not 0 < self.gamma < 1:
            raise ValidationError(f"gamma must lie in (0, 1), got {self.gamma}", where)

    @property
    def dimension(self) -> int:
        return len(self.demand)


@dataclass
class FrustrationState:
    """Number of failed allures an agent has accumulated."""

    agent_id: int
    m: int = 0

    def __post_init__(self):
        if self.m < 0:
            raise ValidationError("frustration count cannot be negative", f"agent {self.agent_id}")

    def fail(self, times: int = 1) -> None:
        if times < 0:
            raise ValueError("frustration never decreases")
        self.m += times


def check_population(agents: Sequence[Agent]) -> int | None:
    """Validate ids and the shared dimension; return the dimension (None if empty)."""
    seen: set[int] = set()
    dim = None
    for agent in agents:
        if not isinstance(agent, Agent):
            raise ValidationError(f"expected an Agent, got {type(agent).__name__}")
        if agent.id in seen:
            raise ValidationError("duplicate id", f"agent {agent.id}")
        seen.add(agent.id)
        if dim is None:
            dim = agent.dimension
        elif agent.dimension != dim:
            raise DimensionError(
                f"dimension {agent.dimension} differs from population dimension {dim}",
                f"agent {agent.id}",
            )
    return dim


def distance(a: Sequence[float], b: Sequence[float]) -> float:
    if len(a) != len(b):
        raise DimensionError(f"cannot compare points of dimension {len(a)} and {len(b)}")
    return math.dist(a, b)


def satisfaction(agent: Agent, offered: Sequence[float]) -> float:
    """exp(-alpha * |demand - offered|^2), in (0, 1]."""
    d = distance(agent.demand, offered)
    return math.exp(-agent.alpha * d * d)


def _check_owner(agent: Agent, frustration: FrustrationState) -> None:
    if frustration.agent_id != agent.id:
        raise ValidationError(
            f"frustration state belongs to agent {frustration.agent_id}", f"agent {agent.id}"
        )


def reservation_level(beta: float, gamma: float, m: int) -> float:
    # Repeated multiplication keeps level(m + 1) == gamma * level(m) bit-for-bit.
    level = beta
    for _ in range(m):
        level *= gamma
    return level


def reservation(agent: Agent, frustration: FrustrationState) -> float:
    """Satisfaction of staying alone after m failed allures: beta * gamma**m."""
    _check_owner(agent, frustration)
    return reservation_level(agent.beta, agent.gamma, frustration.m)


def reservation_radius(agent: Agent, frustration: FrustrationState) -> float:
    """Distance at which an offer is worth exactly the reservation level."""
    level = reservation(agent, frustration)
    if level == 0.0:
        # beta * gamma**m underflowed: every representable offer is acceptable.
        return math.inf
    return math.sqrt(-math.log(level) / agent.alpha)


def acceptable(agent: Agent, offered: Sequence[float], frustration: FrustrationState) -> bool:
    """True iff the offer strictly beats staying alone; ties go to non-cooperation."""
    return satisfaction(agent, offered) > reservation(agent, frustration)


def as_percent(value: float) -> float:
    return 100.0 * value
