"""Exhaustive ground truth for small populations.

Welfare here is static: unmatched agents count their plain beta (no
frustration), which keeps "optimal" well defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .model import Agent, ValidationError, check_population, satisfaction

MAX_ORACLE_AGENTS = 12

UTILITARIAN = "utilitarian_sum"
EGALITARIAN = "egalitarian_min"
OBJECTIVES = (UTILITARIAN, EGALITARIAN)

Matching = tuple[tuple[int, int], ...]


class OracleSizeError(ValueError):
    """Population too large for exhaustive enumeration."""


@dataclass(frozen=True)
class WelfareReport:
    matching: Matching
    total: float
    minimum: float
    satisfaction: dict[int, float]
    objective: str | None = None

    @property
    def value(self) -> float:
        return self.minimum if self.objective == EGALITARIAN else self.total


def _guard(population: Sequence[Agent]) -> None:
    if len(population) > MAX_ORACLE_AGENTS:
        raise OracleSizeError(
            f"exhaustive search is limited to {MAX_ORACLE_AGENTS} agents, got {len(population)}"
        )


def enumerate_matchings(population: Sequence[Agent]) -> Iterator[Matching]:
    """Every partial matching exactly once, the empty one included."""
    _guard(population)
    check_population(population)
    ids = sorted(a.id for a in population)

    def rec(rest: list[int]) -> Iterator[list[tuple[int, int]]]:
        if not rest:
            yield []
            return
        head, tail = rest[0], rest[1:]
        yield from rec(tail)  # head stays single
        for k, other in enumerate(tail):
            for sub in rec(tail[:k] + tail[k + 1 :]):
                yield [(head, other)] + sub

    for m in rec(ids):
        yield tuple(sorted(m))


def normalize_matching(matching: Iterable[Sequence[int]], population: Sequence[Agent]) -> Matching:
    """Sorted tuple-of-pairs form; rejects unknown ids and agents used twice."""
    ids = {a.id for a in population}
    seen: set[int] = set()
    pairs = []
    for p in matching:
        a, b = p
        if a == b:
            raise ValidationError(f"agent {a} cannot be matched with itself")
        for x in (a, b):
            if x not in ids:
                raise ValidationError(f"agent {x} is not in the population")
            if x in seen:
                raise ValidationError(f"agent {x} appears in more than one pair")
            seen.add(x)
        pairs.append((min(a, b), max(a, b)))
    return tuple(sorted(pairs))


def _partners(matching: Matching) -> dict[int, int]:
    out = {}
    for a, b in matching:
        out[a], out[b] = b, a
    return out


def static_satisfaction(matching: Matching, population: Sequence[Agent]) -> dict[int, float]:
    by_id = {a.id: a for a in population}
    partners = _partners(matching)
    out = {}
    for i in sorted(by_id):
        p = partners.get(i)
        out[i] = by_id[i].beta if p is None else satisfaction(by_id[i], by_id[p].offer)
    return out


def welfare(matching: Iterable[Sequence[int]], population: Sequence[Agent], objective: str | None = None) -> WelfareReport:
    m = normalize_matching(matching, population)
    sats = static_satisfaction(m, population)
    return WelfareReport(
        matching=m,
        total=math.fsum(sats.values()),
        minimum=min(sats.values(), default=math.inf),
        satisfaction=sats,
        objective=objective,
    )


def max_welfare_matching(population: Sequence[Agent], objective: str = UTILITARIAN) -> WelfareReport:
    if objective not in OBJECTIVES:
        raise ValidationError(f"unknown objective {objective!r}; choose from {OBJECTIVES}")
    best: WelfareReport | None = None
    for m in enumerate_matchings(population):
        report = welfare(m, population, objective)
        if best is None or report.value > best.value or (
            report.value == best.value and m < best.matching
        ):
            best = report
    assert best is not None
    return best


def blocking_pairs(matching: Iterable[Sequence[int]], population: Sequence[Agent]) -> list[tuple[int, int]]:
    """Pairs not matched together where both strictly prefer each other."""
    m = normalize_matching(matching, population)
    current = static_satisfaction(m, population)
    partners = _partners(m)
    agents = sorted(population, key=lambda a: a.id)
    found = []
    for x, a in enumerate(agents):
        for b in agents[x + 1 :]:
            if partners.get(a.id) == b.id:
                continue
            if satisfaction(a, b.offer) > current[a.id] and satisfaction(b, a.offer) > current[b.id]:
                found.append((a.id, b.id))
    return found


def is_individually_rational(
    matching: Iterable[Sequence[int]],
    population: Sequence[Agent],
    baseline: dict[int, float] | None = None,
) -> bool:
    """Every matched agent strictly beats its stand-alone level.

    The stand-alone level is beta unless ``baseline`` supplies one per agent
    (e.g. the frustrated level at which the engine confirmed the match).
    """
    m = normalize_matching(matching, population)
    by_id = {a.id: a for a in population}
    for a, b in m:
        for me, other in ((a, b), (b, a)):
            floor = by_id[me].beta if baseline is None else baseline[me]
            if not satisfaction(by_id[me], by_id[other].offer) > floor:
                return False
    return True
