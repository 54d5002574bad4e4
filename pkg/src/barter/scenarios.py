"""Built-in populations: seesaws, the cycling ring, bipartite markets, random fuzz."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .model import Agent, ValidationError, check_population

# Exactly representable quarter turns; cos/sin would leave 1e-16 residue.
_QUARTER_TURNS = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]

BIPARTITE_CASES = ("match", "dismatch", "popular", "boredom")


@dataclass
class ScenarioSpec:
    """A named population plus optional expected-outcome annotations.

    ``expected`` and ``params`` hold plain JSON values (lists, not tuples)
    so a spec survives export and re-import unchanged.
    """

    name: str
    agents: list[Agent]
    expected: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    labels: dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        check_population(self.agents)

    @property
    def dimension(self) -> int | None:
        return self.agents[0].dimension if self.agents else None

    def agent(self, agent_id: int) -> Agent:
        for a in self.agents:
            if a.id == agent_id:
                return a
        raise LookupError(f"no agent {agent_id} in scenario {self.name!r}")

    def id_of(self, label: str) -> int:
        for i, name in self.labels.items():
            if name == label:
                return i
        raise LookupError(f"no agent labelled {label!r}")


def seesaw_uniform(n: int, weight: float = 1.0, alpha: float = 1.0, beta: float = 0.1, gamma: float = 0.5) -> ScenarioSpec:
    """n children of identical weight; demand equals offer for everyone."""
    if n < 0:
        raise ValidationError(f"n must be >= 0, got {n}")
    agents = [Agent(i, (weight,), (weight,), alpha, beta, gamma) for i in range(1, n + 1)]
    return ScenarioSpec(
        name="seesaw_uniform",
        agents=agents,
        expected={"matches": n // 2, "unmatched": n % 2, "matched_satisfaction": 1.0},
        params={"n": n, "weight": weight, "alpha": alpha, "beta": beta, "gamma": gamma},
    )


def seesaw_line(
    positions: Sequence[float] = (0.0, 7.0, 11.0, 18.0),
    alpha: float = 0.04,
    beta: float = 0.001,
    gamma: float = 0.1,
) -> ScenarioSpec:
    """One seesaw type per position on a line; agent k sits at positions[k-1]."""
    positions = [float(p) for p in positions]
    if len(set(positions)) != len(positions):
        raise ValidationError("seesaw positions must be distinct")
    agents = [Agent(i, (p,), (p,), alpha, beta, gamma) for i, p in enumerate(positions, start=1)]
    return ScenarioSpec(
        name="seesaw_line",
        agents=agents,
        params={"positions": positions, "alpha": alpha, "beta": beta, "gamma": gamma},
    )


def cycling_ring(alpha: float = 1.0, beta: float = 0.01, gamma: float = 0.5) -> ScenarioSpec:
    """Four agents A-D whose demands sit on the unit circle 90 degrees apart.

    Each offer is the demand rotated a further quarter turn, so D offers
    exactly what A wants, C is A's middle option and B its worst.
    """
    agents = []
    for k in range(4):
        demand = _QUARTER_TURNS[k]
        offer = _QUARTER_TURNS[(k + 1) % 4]
        agents.append(Agent(k + 1, demand, offer, alpha, beta, gamma))
    return ScenarioSpec(
        name="cycling_ring",
        agents=agents,
        expected={
            "strategy": {"name": "greedy_top_k", "k": 2},
            "matching": [[1, 3], [2, 4]],
            "satisfaction": math.exp(-2 * alpha),
        },
        params={"alpha": alpha, "beta": beta, "gamma": gamma},
        labels={1: "A", 2: "B", 3: "C", 4: "D"},
    )


def bipartite_case(
    case: str,
    sizes: Sequence[int] = (3, 3),
    alpha: float = 1.0,
    beta: float = 0.1,
    gamma: float = 0.5,
    separation: float | None = None,
) -> ScenarioSpec:
    """Two categories of agents, each offering one kind and wanting the other.

    Side one gets ids 1..n1, side two n1+1..n1+n2. Offers of side one live
    near x = +10, those of side two near x = -10; what each side demands
    depends on the case. In 'popular' and 'boredom' agent 1 is the red agent.
    """
    if case not in BIPARTITE_CASES:
        raise ValidationError(f"unknown bipartite case {case!r}; choose from {BIPARTITE_CASES}")
    n1, n2 = (int(s) for s in sizes)
    if n1 < 1 or n2 < 1:
        raise ValidationError("each side needs at least one agent")
    side1 = list(range(1, n1 + 1))
    side2 = list(range(n1 + 1, n1 + n2 + 1))
    step = 3.0
    params = {"case": case, "sizes": [n1, n2], "alpha": alpha, "beta": beta, "gamma": gamma}
    expected: dict = {}
    agents: list[Agent] = []

    def mk(i, demand, offer):
        agents.append(Agent(i, demand, offer, alpha, beta, gamma))

    if case == "match":
        if n1 != n2:
            raise ValidationError("'match' needs equal side sizes")
        for k in range(n1):
            y = step * k
            mk(side1[k], (-10.0, y), (10.0, y))
            mk(side2[k], (10.0, y), (-10.0, y))
        expected = {"matching": [[side1[k], side2[k]] for k in range(n1)], "satisfaction": 1.0}

    elif case == "dismatch":
        radius = math.sqrt(math.log(1 / beta) / alpha)
        spread = step * max(n1, n2)
        if separation is None:
            separation = max(100.0, 10 * radius + 2 * spread)
        params["separation"] = separation
        # Offers stay near the origin; every demand is pushed far away.
        for k, i in enumerate(side1):
            mk(i, (separation, step * k), (0.5, step * k))
        for k, i in enumerate(side2):
            mk(i, (-separation, step * k), (-0.5, step * k))
        expected = {"matching": []}

    elif case == "popular":
        red_offer = (10.0, 0.0)
        mk(side1[0], (-10.0, 0.0), red_offer)
        for k, i in enumerate(side1[1:], start=1):
            # rivals offer the right category, but off target
            mk(i, (-10.0, step * k), (10.0, 0.5 * k))
        for k, i in enumerate(side2):
            # side two all want exactly what red offers
            mk(i, red_offer, (-10.0, 0.25 * (k + 1)))
        expected = {"red": side1[0]}

    else:  # boredom
        centre = (-10.0, 0.0)
        ring = _equidistant(n2)
        mk(side1[0], centre, (10.0, 0.0))
        for k, i in enumerate(side1[1:], start=1):
            mk(i, (-10.0, step * (k + 1)), (10.0, step * k))
        for k, i in enumerate(side2):
            dx, dy = ring[k]
            mk(i, (10.0, 0.0), (centre[0] + dx, centre[1] + dy))
        expected = {"red": side1[0], "partner": side2[0]}

    spec = ScenarioSpec(name=f"bipartite_{case}", agents=agents, expected=expected, params=params)
    spec.labels = {side1[0]: "red"} if case in ("popular", "boredom") else {}
    return spec


def _equidistant(n: int) -> list[tuple[float, float]]:
    """n unit vectors summing to zero (exactly, for n <= 4)."""
    if n == 1:
        return [(0.0, 0.0)]
    if n == 2:
        return [(1.0, 0.0), (-1.0, 0.0)]
    if n == 4:
        return list(_QUARTER_TURNS)
    return [(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)) for k in range(n)]


def _check_range(name: str, lo: float, hi: float, low_bound: float, high_bound: float | None) -> None:
    if not lo <= hi:
        raise ValidationError(f"{name} range is empty: [{lo}, {hi}]")
    if not lo > low_bound or (high_bound is not None and not hi < high_bound):
        upper = "inf" if high_bound is None else high_bound
        raise ValidationError(f"{name} range [{lo}, {hi}] must lie inside ({low_bound}, {upper})")


def random_population(
    n: int,
    d: int = 2,
    seed: int = 0,
    coords: tuple[float, float] = (-3.0, 3.0),
    alpha: tuple[float, float] = (0.05, 2.0),
    beta: tuple[float, float] = (0.01, 0.5),
    gamma: tuple[float, float] = (0.1, 0.9),
) -> ScenarioSpec:
    """Uniform draws for every coordinate and parameter, fully determined by seed."""
    if n < 0:
        raise ValidationError(f"n must be >= 0, got {n}")
    if d < 1:
        raise ValidationError(f"d must be >= 1, got {d}")
    if not coords[0] <= coords[1]:
        raise ValidationError(f"coordinate range is empty: {coords}")
    _check_range("alpha", *alpha, 0.0, None)
    _check_range("beta", *beta, 0.0, 1.0)
    _check_range("gamma", *gamma, 0.0, 1.0)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(coords[0], coords[1], size=(n, 2, d))
    a = rng.uniform(*alpha, size=n)
    b = rng.uniform(*beta, size=n)
    g = rng.uniform(*gamma, size=n)
    agents = [
        Agent(i + 1, tuple(pts[i, 0].tolist()), tuple(pts[i, 1].tolist()), float(a[i]), float(b[i]), float(g[i]))
        for i in range(n)
    ]
    return ScenarioSpec(
        name="random_population",
        agents=agents,
        params={
            "n": n, "d": d, "seed": seed,
            "coords": list(coords), "alpha": list(alpha), "beta": list(beta), "gamma": list(gamma),
        },
    )


BUILTINS = {
    "seesaw_uniform": seesaw_uniform,
    "seesaw_line": seesaw_line,
    "cycling_ring": cycling_ring,
    "bipartite": bipartite_case,
    "random": random_population,
}
